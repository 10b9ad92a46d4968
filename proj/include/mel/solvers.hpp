#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mel/cost_matrix.hpp"
#include "mel/ground_map.hpp"
#include "mel/tolerances.hpp"

namespace mel {

enum class Algorithm {
  NormalizedIteration,
  RelaxedIteration,
  RandomFunctionIteration,
  AdaptiveGamma,
};
const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

enum class Verdict { Converged, MaxIters, EarlyStopped, Diverged };
const char* to_string(Verdict v);

/// Stop when the silhouette on the sample-side iterate stops improving.
struct EarlyStopConfig {
  std::vector<int> labels;  // one class id per sample-side index
  Index patience = 10;      // iterations without a new best before stopping
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::RelaxedIteration;
  double alpha = 0.5;          // relaxation weight in (0, 1]
  double gamma_f = 1.0;        // step size on the B update
  double gamma_g = 1.0;        // step size on the A update
  double tol_residual = 1e-8;  // stop when max_norm(A_t - A_{t+1}) dips below
  Index max_iters = 500;
  std::uint64_t seed = 0;
  double batch_fraction = 1.0;  // stochastic: fraction of coordinate pairs per step
  bool jacobi = false;          // stochastic: A update reads the pre-step B
  bool symmetric_pairs = true;  // stochastic: update (i,j) and (j,i) together
  Index validate_every = 10;    // class-invariant check cadence; 0 disables
  std::optional<EarlyStopConfig> early_stop;
  Tolerances tolerances = default_tolerances();
};

struct TraceRow {
  Index iteration = 0;
  double residual_a = 0.0;  // max_norm(A_t - A_{t+1})
  double residual_b = 0.0;  // NaN on the first step of algorithms without a B0
  double hilbert_a = 0.0;   // off-diagonal Hilbert diagnostic, +inf when undefined
  double gamma_f = 0.0;     // step sizes in effect during this iteration
  double gamma_g = 0.0;
  std::optional<double> asw;          // with early stopping enabled
  std::optional<double> ref_sq_dist;  // stochastic: ||(A,B)-(A*,B*)||_F^2
};

/* Certified contraction data. The relaxed iteration contracts when
 * gamma_f gamma_g L_F L_G < 1, with overall constant
 * l_t = 1 - alpha (1 - gamma_f gamma_g L_F L_G). The normalized iteration's
 * certificate uses the norm lower bounds C_F, C_G: its map has constant
 * l_t_normalized = (2 L_F / C_F)(2 L_G / C_G), and Banach needs that < 1;
 * the looser printed comparison against C_F C_G / 4 is reported alongside. */
struct ContractionReport {
  std::optional<double> l_f, l_g;  // map Lipschitz constants when certified
  double alpha = 0.0, gamma_f = 0.0, gamma_g = 0.0;
  std::optional<double> l_t;
  std::optional<bool> relaxed_condition;
  std::optional<double> c_f, c_g;
  std::optional<double> l_t_normalized;
  std::optional<bool> normalized_condition;
  std::optional<bool> normalized_condition_quarter;
};

struct RunReport {
  SolverConfig config;
  Verdict verdict = Verdict::MaxIters;
  Index iterations = 0;
  std::vector<TraceRow> trace;
  Matrix a, b;  // final iterates
  ContractionReport contraction;
  double wall_seconds = 0.0;
  std::string message;
  // Best-silhouette iterate, kept when early stopping is enabled.
  std::optional<Matrix> best_a, best_b;
  std::optional<double> best_asw;
  Index best_iteration = 0;
};

/* The maps must be a coupled pair: f takes the m x m matrix to n x n,
 * g takes n x n back to m x m. a0 is the m x m starting matrix. */

/// B = F(A)/max_norm(F(A)), A = G(B)/max_norm(G(B)); iterates have unit
/// max-norm; throws ZeroNorm when a map output vanishes.
RunReport solve_normalized(const GroundMetricMap& f, const GroundMetricMap& g,
                           const SolverConfig& cfg, const Matrix& a0);

/// B = gamma_f F(A); A = (1-alpha) A + alpha gamma_g G(B).
RunReport solve_relaxed(const GroundMetricMap& f, const GroundMetricMap& g,
                        const SolverConfig& cfg, const Matrix& a0);

/// Known fixed point to measure stochastic iterates against.
struct FixedPointReference {
  Matrix a, b;
};

/* Stochastic coordinate version of the relaxed iteration: each step samples
 * coordinate sets without replacement (fraction batch_fraction of all pairs),
 * updates the sampled B entries to gamma_f F_ij(A), then the sampled A
 * entries to (1-alpha) A_kl + alpha gamma_g G_kl(B). With batch_fraction = 1
 * and symmetric pairs the trajectory is bit-identical to solve_relaxed. */
RunReport solve_rfi(const GroundMetricMap& f, const GroundMetricMap& g,
                    const SolverConfig& cfg, const Matrix& a0, const Matrix& b0,
                    const FixedPointReference* reference = nullptr);

/// Relaxed iteration that rescales gamma_f by 1/max_norm(B - F(A)) and
/// gamma_g by 1/max_norm(A - G(B)) after every step; a vanishing denominator
/// means the pair is stationary and the run returns Converged.
RunReport solve_adaptive_gamma(const GroundMetricMap& f, const GroundMetricMap& g,
                               const SolverConfig& cfg, const Matrix& a0);

/// Dispatch on cfg.algorithm; b0/reference only feed the stochastic variant.
RunReport solve(const GroundMetricMap& f, const GroundMetricMap& g,
                const SolverConfig& cfg, const Matrix& a0,
                const Matrix* b0 = nullptr,
                const FixedPointReference* reference = nullptr);

ContractionReport contraction_report(const GroundMetricMap& f,
                                     const GroundMetricMap& g,
                                     const SolverConfig& cfg);

/* Default start: the m x m side's reference (the g map's output reference)
 * when present, else all-ones minus identity (already unit max-norm). */
Matrix default_initial_matrix(const GroundMetricMap& f, const GroundMetricMap& g);

struct ResidualDiagnostics {
  double linf = 0.0;
  double hilbert = 0.0;
};

/* linf = max_norm(prev - next); hilbert = spread (max - min) of the
 * entrywise log-ratios over off-diagonal positions, +inf unless every
 * off-diagonal entry of both matrices is strictly positive. Zero iff the
 * off-diagonals agree up to one positive scale factor. */
ResidualDiagnostics residual_diagnostics(const Matrix& prev, const Matrix& next);

}  // namespace mel
