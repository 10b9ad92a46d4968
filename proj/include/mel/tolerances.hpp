#pragma once

namespace mel {

/* All numeric tolerances used by validators and guards live here so every
 * module pulls the same constants. SolverConfig carries a copy that callers
 * may override per run. */
struct Tolerances {
  double symmetry = 1e-10;         // max |M - M^T| entry before a matrix is rejected
  double zero_diagonal = 1e-10;    // |diag| bound for (semi)metric matrices
  double nonnegative = 1e-10;      // off-diagonal >= -nonnegative
  double triangle = 1e-10;         // slack in triangle-inequality scans
  double psd = 1e-10;              // smallest eigenvalue >= -psd
  double laplacian_row_sum = 1e-10;
  double laplacian_offdiag = 1e-12;  // off-diagonal <= +laplacian_offdiag
  double dedup = 1e-12;            // linf threshold for duplicate rows/columns
  double marginal_sum = 1e-10;     // probability vectors must sum to 1 within this
  double quadratic_form = 1e-10;   // clamp window for Mahalanobis round-off
  double divergence_clamp = 1e-9;  // Sinkhorn divergence round-off window
  double eigenvalue_clip = 1e-10;  // PSD projection window inside solvers
  double genericity = 1e-20;       // relative floor for vanishing genericity sums
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t;
  return t;
}

}  // namespace mel
