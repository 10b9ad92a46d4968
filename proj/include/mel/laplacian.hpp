#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mel/cost_matrix.hpp"
#include "mel/dataset.hpp"
#include "mel/ground_map.hpp"

namespace mel {

/* Linear indexing of strict lower-triangle pairs (p, q), p > q, ordered
 * (1,0), (2,0), (2,1), (3,0), ... so index = p(p-1)/2 + q. */
Index lower_tri_count(Index m);
Index lower_tri_index(Index p, Index q, Index m);
std::pair<Index, Index> lower_tri_pair(Index idx, Index m);

/* Graph-Laplacian ground metric map: weights w(i, j) = M_cost(v_i, v_j)^2
 * between the side's raw vectors, output = diag(W 1) - W. Linear in the
 * input, no reference term, output row sums are zero and off-diagonals
 * nonpositive. Weights must be nonnegative; round-off inside the clamp
 * window is zeroed, larger negatives raise NegativeWeight. */
class LaplacianGroundMap : public GroundMetricMap {
 public:
  LaplacianGroundMap(const Dataset& data, Side side,
                     const Tolerances& tol = default_tolerances());

  Index input_dim() const override { return data_.vector_dim(side_); }
  Index output_dim() const override { return data_.count(side_); }
  Matrix apply(const Matrix& cost) const override;
  double entry(const Matrix& cost, Index i, Index j) const override;
  MatrixClass input_class() const override { return MatrixClass::Psd; }
  MatrixClass output_class() const override { return MatrixClass::GraphLaplacian; }
  const Matrix* reference() const override { return nullptr; }
  /// Exact operator norm for the max-norm on symmetric inputs.
  std::optional<double> lipschitz_constant() const override;
  std::optional<double> norm_lower_bound() const override { return std::nullopt; }

  Side side() const { return side_; }
  const Dataset& data() const { return data_; }

 private:
  double weight(const Matrix& cost, Index i, Index j) const;

  const Dataset& data_;
  Side side_;
  Tolerances tol_;
  std::vector<Vector> vectors_;
};

CostMatrix laplacian_map_apply(const LaplacianGroundMap& map,
                               const CostMatrix& cost,
                               const Tolerances& tol = default_tolerances());

/* Genericity of the data matrix (features x samples) for the eigen pipeline.
 * Two families of inner sums must all be strictly positive:
 *   feature pairs K=(k,l), P=(p,q):  sum_{i<j} D_{K,ij}^2 D_{P,ij}^2
 *   sample pairs (i, j):             sum_{k,l} (D_{ij})_{kl}^2
 * with D_{(k,l),ij} = X(k,i) - X(l,i) - X(k,j) + X(l,j). A sum at or below
 * the relative threshold is a violation; the report records the first few. */
struct GenericityReport {
  bool generic = false;
  struct FeatureQuad {
    Index k, l, p, q;
    double sum;
  };
  struct SamplePair {
    Index i, j;
    double sum;
  };
  std::vector<FeatureQuad> feature_violations;
  std::vector<SamplePair> sample_violations;
  double min_feature_sum = 0.0;
  double min_sample_sum = 0.0;
  double threshold_feature = 0.0;
  double threshold_sample = 0.0;
  std::string summary() const;
};

GenericityReport genericity_check(const Matrix& raw,
                                  const Tolerances& tol = default_tolerances());
GenericityReport genericity_check(const Dataset& data,
                                  const Tolerances& tol = default_tolerances());

/* The composition of the two Laplacian maps is linear on the off-diagonal
 * lower-triangle coordinates: for a Laplacian A with off-diagonal entries
 * a_{pq} = A_{pq} (p > q), the output's lower triangle satisfies
 * offdiag(G(F(A))) = H a. H is symmetric, PSD, and entrywise positive on
 * generic data; its Perron eigenvector yields the learned ground metric. */
struct PerronSystem {
  Matrix h;         // M x M, M = m(m-1)/2
  Index m = 0;      // number of features
  bool entrywise_positive = false;
  GenericityReport genericity;
  // Filled by solve_perron:
  double lambda = 0.0;
  Vector v;
  double residual = 0.0;
  Index iterations = 0;
};

/* Assembles H in closed form and, for M <= cross_check_limit, verifies each
 * column against the composed maps applied to basis edge Laplacians.
 * Throws NotGeneric when the genericity check fails. */
PerronSystem assemble_perron_matrix(const Dataset& data,
                                    Index cross_check_limit = 50,
                                    const Tolerances& tol = default_tolerances());

struct PowerIterationResult {
  double lambda = 0.0;
  Vector v;  // max-norm 1, entrywise positive
  Index iterations = 0;
  double residual = 0.0;
};

/* Power iteration from the all-ones vector with max-norm normalization.
 * Stops when ||H v - lambda v||_inf <= tol_residual * lambda. The seed only
 * feeds optional randomized restarts after a failed deterministic run. */
PowerIterationResult power_iteration(const Matrix& h, double tol_residual = 1e-12,
                                     Index max_iters = 100000,
                                     std::uint64_t seed = 0);

/// Runs power iteration on sys.h and stores the eigenpair in sys.
void solve_perron(PerronSystem& sys, double tol_residual = 1e-12,
                  Index max_iters = 100000, std::uint64_t seed = 0);

/* Ground metric from the Perron eigenvector: off-diagonals -v, diagonal the
 * row-sum compensation, validated as a graph Laplacian. */
CostMatrix reconstruct_ground_matrix(const Vector& v, Index m,
                                     const Tolerances& tol = default_tolerances());

/* Checks that pairwise Mahalanobis distances between raw samples under `a`
 * form a metric matrix: positivity needs sample differences outside
 * span{all-ones} (checked directly), plus the triangle inequality scan. */
ValidationReport metric_matrix_check(const Matrix& a, const Dataset& data,
                                     const Tolerances& tol = default_tolerances());

}  // namespace mel
