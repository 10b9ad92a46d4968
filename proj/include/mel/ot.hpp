#pragma once

#include <optional>
#include <vector>

#include "mel/cost_matrix.hpp"
#include "mel/dataset.hpp"
#include "mel/ground_map.hpp"
#include "mel/reference.hpp"
#include "mel/tolerances.hpp"

namespace mel {

/* Discrete transport problem between two histograms over the same ground
 * set: cost is d x d, source and target are nonnegative and sum to one. */
struct TransportProblem {
  CostMatrix cost;
  Vector source;
  Vector target;
};

struct TransportResult {
  double value = 0.0;
  Matrix plan;  // d x d, nonnegative, marginals source/target
};

/* Exact optimal transport via the transportation simplex (network simplex on
 * the bipartite graph). Bland's rule for pivot selection; degenerate initial
 * bases are avoided by a tiny lexicographic perturbation of the marginals,
 * well below the marginal tolerance. Returns an optimal vertex of the
 * transportation polytope. */
TransportResult exact_ot(const TransportProblem& problem,
                         const Tolerances& tol = default_tolerances());

struct SinkhornParams {
  double epsilon = 5e-2;       // relative regularization strength
  double marginal_tol = 1e-9;  // stop when l1 marginal violation is below this
  Index max_sweeps = 10000;
  bool log_domain = true;  // logsumexp sweeps; false = multiplicative scaling
};

/// Scaling potentials kept between calls to warm-start the next solve.
struct SinkhornPotentials {
  Vector phi, psi;  // dimensionless (divided by the effective regularizer)
  bool valid = false;
};

/* Entropy-regularized transport: minimizes <cost, P> + eta * KL(P, s t^T)
 * over the transportation polytope, with eta = epsilon * max_norm(cost)
 * recomputed on every call. A zero cost matrix short-circuits to value 0 and
 * plan = s t^T.
 *
 * Scaling sweeps with half-step damping, applied to both potentials at once;
 * identical marginals collapse to a single self-dual potential. The damping
 * matters: concentrated histograms put the optimal plan near a vertex, where
 * undamped alternation slows to a crawl (rate 1 - O(smallest kernel entry))
 * while the averaged update stays fast. Stops when both l1 marginal
 * violations are at most marginal_tol; throws NonConvergence when max_sweeps
 * is hit first. log_domain selects logsumexp sweeps (robust for histograms
 * with tiny entries) versus plain multiplicative scaling (faster, safe when
 * histogram entries are moderate). */
TransportResult entropic_ot(const TransportProblem& problem,
                            const SinkhornParams& params = {},
                            SinkhornPotentials* warm = nullptr,
                            const Tolerances& tol = default_tolerances());

/* KL(P || Q) with the conventions 0 log 0 = 0 and +inf when P has mass where
 * Q has none. Both matrices must be entrywise nonnegative and sum to one
 * within tol.marginal_sum. */
double kl_divergence(const Matrix& p, const Matrix& q,
                     const Tolerances& tol = default_tolerances());

/* Debiased divergence S(x, y) = W(x, y) - (W(x, x) + W(y, y)) / 2 under the
 * entropic cost above. Round-off inside [-clamp, 0) is clamped to zero;
 * anything below the window raises NegativeDivergence. */
double sinkhorn_divergence(const CostMatrix& cost, const Vector& x,
                           const Vector& y, const SinkhornParams& params = {},
                           const Tolerances& tol = default_tolerances());

/* Lipschitz bound 2 (1 + epsilon C) of the entropic map, where C is twice the
 * histogram length times the largest total self-information of a histogram
 * on `side` (zero entries skipped). */
double sinkhorn_lipschitz_constant(const Dataset& data, double epsilon,
                                   Side side);

enum class OtVariant { Exact, Sinkhorn };

/* Transport-based ground metric map: output(i, j) = distance between the
 * normalized histograms i and j on `side` under the input cost, plus the
 * reference entry. Exact transport yields a metric output whenever the
 * reference is a metric; the entropic variant yields a semi-metric. */
class OtGroundMap : public GroundMetricMap {
 public:
  OtGroundMap(const Dataset& data, Side side, OtVariant variant,
              ReferenceMatrix reference, SinkhornParams params = {},
              bool warm_start = true,
              const Tolerances& tol = default_tolerances());

  Index input_dim() const override { return data_.vector_dim(side_); }
  Index output_dim() const override { return data_.count(side_); }
  Matrix apply(const Matrix& cost) const override;
  double entry(const Matrix& cost, Index i, Index j) const override;
  MatrixClass input_class() const override { return MatrixClass::SemiMetric; }
  MatrixClass output_class() const override;
  const Matrix* reference() const override { return &ref_.entries(); }
  std::optional<double> lipschitz_constant() const override;
  std::optional<double> norm_lower_bound() const override;

  OtVariant variant() const { return variant_; }
  Side side() const { return side_; }
  const SinkhornParams& params() const { return params_; }
  /// Drops all cached potentials (e.g. before a reproducibility re-run).
  void reset_warm_start() const;

 private:
  SinkhornPotentials* slot(Index a, Index b) const;
  double self_transport(const CostMatrix& cost, Index i) const;
  double pair_value(const CostMatrix& cost, Index a, Index b, double waa,
                    double wbb) const;

  const Dataset& data_;
  Side side_;
  OtVariant variant_;
  ReferenceMatrix ref_;
  SinkhornParams params_;
  bool warm_start_;
  Tolerances tol_;
  std::vector<Vector> hists_;
  mutable std::vector<SinkhornPotentials> slots_;  // per ordered pair (a <= b)
};

/// Validates the input against the map's input class, applies, tags the output.
CostMatrix ot_map_apply(const OtGroundMap& map, const CostMatrix& cost,
                        const Tolerances& tol = default_tolerances());

}  // namespace mel
