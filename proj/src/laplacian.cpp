#include "mel/laplacian.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mel/errors.hpp"
#include "mel/mahalanobis.hpp"
#include "mel/rng.hpp"
#include "mel/runtime.hpp"

namespace mel {

Index lower_tri_count(Index m) { return m * (m - 1) / 2; }

Index lower_tri_index(Index p, Index q, Index m) {
  if (!(q >= 0 && q < p && p < m)) {
    throw DimensionMismatch("lower-triangle index out of range");
  }
  return p * (p - 1) / 2 + q;
}

std::pair<Index, Index> lower_tri_pair(Index idx, Index m) {
  if (idx < 0 || idx >= lower_tri_count(m)) {
    throw DimensionMismatch("lower-triangle index out of range");
  }
  Index p = 1;
  while (p * (p + 1) / 2 <= idx) ++p;
  return {p, idx - p * (p - 1) / 2};
}

LaplacianGroundMap::LaplacianGroundMap(const Dataset& data, Side side,
                                       const Tolerances& tol)
    : data_(data), side_(side), tol_(tol) {
  vectors_.reserve(static_cast<std::size_t>(data_.count(side_)));
  for (Index i = 0; i < data_.count(side_); ++i) {
    vectors_.push_back(data_.raw_vector(side_, i));
  }
}

double LaplacianGroundMap::weight(const Matrix& cost, Index i, Index j) const {
  const Vector d = vectors_[static_cast<std::size_t>(i)] -
                   vectors_[static_cast<std::size_t>(j)];
  const double u = d.dot(cost * d);
  if (u >= 0.0) return u;
  if (u >= -tol_.quadratic_form) return 0.0;
  std::ostringstream os;
  os << "edge weight (" << i << ", " << j << ") is negative: " << u;
  throw NegativeWeight(os.str());
}

Matrix LaplacianGroundMap::apply(const Matrix& cost) const {
  if (cost.rows() != input_dim() || cost.cols() != input_dim()) {
    throw DimensionMismatch("laplacian map: input has the wrong shape");
  }
  const Index d = output_dim();
  Matrix w = Matrix::Zero(d, d);
  parallel_for(d, [&](Index i) {
    for (Index j = i + 1; j < d; ++j) {
      const double value = weight(cost, i, j);
      w(i, j) = value;
      w(j, i) = value;
    }
  });
  Matrix out(d, d);
  for (Index i = 0; i < d; ++i) {
    double row_sum = 0.0;
    for (Index j = 0; j < d; ++j) {
      if (j == i) continue;
      out(i, j) = -w(i, j);
      row_sum += w(i, j);
    }
    out(i, i) = row_sum;
  }
  return out;
}

double LaplacianGroundMap::entry(const Matrix& cost, Index i, Index j) const {
  if (cost.rows() != input_dim() || cost.cols() != input_dim()) {
    throw DimensionMismatch("laplacian map: input has the wrong shape");
  }
  if (i != j) return -weight(cost, i, j);
  double row_sum = 0.0;
  for (Index s = 0; s < output_dim(); ++s) {
    if (s == i) continue;
    row_sum += weight(cost, i, s);
  }
  return row_sum;
}

std::optional<double> LaplacianGroundMap::lipschitz_constant() const {
  // The map is linear; each output entry is a linear functional of the input
  // with an explicit coefficient matrix, so the max-norm operator norm is the
  // largest coefficient l1 norm. Off-diagonal (i, j): coefficients -d d^T
  // with d = v_i - v_j, l1 norm ||d||_1^2. Diagonal i: sum of d d^T over
  // partners, signs can cancel, so take the l1 norm of the summed matrix.
  const Index d = output_dim();
  double worst = 0.0;
  for (Index i = 0; i < d; ++i) {
    Matrix diag_coeff = Matrix::Zero(input_dim(), input_dim());
    for (Index j = 0; j < d; ++j) {
      if (j == i) continue;
      const Vector diff = vectors_[static_cast<std::size_t>(i)] -
                          vectors_[static_cast<std::size_t>(j)];
      const double l1 = diff.lpNorm<1>();
      worst = std::max(worst, l1 * l1);
      diag_coeff += diff * diff.transpose();
    }
    worst = std::max(worst, diag_coeff.cwiseAbs().sum());
  }
  return worst;
}

CostMatrix laplacian_map_apply(const LaplacianGroundMap& map,
                               const CostMatrix& cost, const Tolerances& tol) {
  ValidationReport report = validate_class(cost.entries(), map.input_class(), tol);
  if (!report.ok) {
    throw ClassViolation("laplacian map input: " + report.summary());
  }
  return CostMatrix(map.apply(cost.entries()), map.output_class(), tol);
}

namespace {

/* Rows of U are strict lower-triangle feature pairs K = (k, l), columns are
 * strict lower-triangle sample pairs (i, j), entries D_{K,ij}^2 with
 * D = X(k,i) - X(l,i) - X(k,j) + X(l,j). Then U U^T has entries
 * sum_{i<j} D_K^2 D_P^2, which is both the genericity inner-sum matrix and
 * the eigen-system matrix H. */
Matrix squared_difference_table(const Matrix& raw) {
  const Index m = raw.rows();
  const Index n = raw.cols();
  const Index big_m = lower_tri_count(m);
  const Index pairs_n = lower_tri_count(n);
  Matrix u(big_m, pairs_n);
  parallel_for(big_m, [&](Index row) {
    const auto [k, l] = lower_tri_pair(row, m);
    Index col = 0;
    for (Index i = 1; i < n; ++i) {
      for (Index j = 0; j < i; ++j) {
        const double d = raw(k, i) - raw(l, i) - raw(k, j) + raw(l, j);
        u(row, col) = d * d;
        ++col;
      }
    }
  });
  return u;
}

}  // namespace

std::string GenericityReport::summary() const {
  std::ostringstream os;
  if (generic) {
    os << "generic (min feature sum " << min_feature_sum << ", min sample sum "
       << min_sample_sum << ")";
    return os.str();
  }
  os << feature_violations.size() << " vanishing feature sums, "
     << sample_violations.size() << " vanishing sample sums;";
  for (const auto& v : feature_violations) {
    os << " F(" << v.k << "," << v.l << ";" << v.p << "," << v.q
       << ")=" << v.sum;
  }
  for (const auto& v : sample_violations) {
    os << " S(" << v.i << "," << v.j << ")=" << v.sum;
  }
  return os.str();
}

GenericityReport genericity_check(const Matrix& raw, const Tolerances& tol) {
  if (raw.rows() < 2 || raw.cols() < 2) {
    throw DimensionMismatch("genericity check needs at least 2x2 data");
  }
  const Index m = raw.rows();
  const Index n = raw.cols();
  const double scale = raw.cwiseAbs().maxCoeff();
  constexpr std::size_t kMaxRecorded = 16;

  GenericityReport rep;
  rep.threshold_feature = tol.genericity * scale * scale * scale * scale;
  rep.threshold_sample = tol.genericity * scale * scale;
  rep.min_feature_sum = std::numeric_limits<double>::infinity();
  rep.min_sample_sum = std::numeric_limits<double>::infinity();

  const Matrix u = squared_difference_table(raw);
  const Matrix gram = u * u.transpose();
  const Index big_m = gram.rows();
  for (Index a = 0; a < big_m; ++a) {
    for (Index b = a; b < big_m; ++b) {
      const double sum = gram(a, b);
      rep.min_feature_sum = std::min(rep.min_feature_sum, sum);
      if (sum <= rep.threshold_feature &&
          rep.feature_violations.size() < kMaxRecorded) {
        const auto [k, l] = lower_tri_pair(a, m);
        const auto [p, q] = lower_tri_pair(b, m);
        rep.feature_violations.push_back({k, l, p, q, sum});
      }
    }
  }

  for (Index i = 1; i < n; ++i) {
    for (Index j = 0; j < i; ++j) {
      const Vector delta = raw.col(i) - raw.col(j);
      // sum_{k,l} ((delta_k - delta_l)^2) = 2 (m ||delta||^2 - (sum delta)^2),
      // zero exactly when delta lies in span{all-ones}.
      const double s1 = delta.sum();
      const double sum = std::max(0.0, 2.0 * (static_cast<double>(m) * delta.squaredNorm() - s1 * s1));
      rep.min_sample_sum = std::min(rep.min_sample_sum, sum);
      if (sum <= rep.threshold_sample &&
          rep.sample_violations.size() < kMaxRecorded) {
        rep.sample_violations.push_back({i, j, sum});
      }
    }
  }

  rep.generic = rep.feature_violations.empty() && rep.sample_violations.empty();
  return rep;
}

GenericityReport genericity_check(const Dataset& data, const Tolerances& tol) {
  return genericity_check(data.raw(), tol);
}

PerronSystem assemble_perron_matrix(const Dataset& data, Index cross_check_limit,
                                    const Tolerances& tol) {
  const Index m = data.m();
  if (m < 2) throw DimensionMismatch("eigen pipeline needs at least 2 features");
  const Index big_m = lower_tri_count(m);
  if (big_m > 20100) {
    throw ConfigError("dense eigen system would exceed 20100 pairs; "
                      "reduce the feature count (practical cap is about 200)");
  }

  PerronSystem sys;
  sys.m = m;
  sys.genericity = genericity_check(data, tol);
  if (!sys.genericity.generic) {
    throw NotGeneric("data fails the genericity condition: " +
                     sys.genericity.summary());
  }

  const Matrix u = squared_difference_table(data.raw());
  Matrix h = u * u.transpose();
  h = ((h + h.transpose()) * 0.5).eval();
  sys.h = std::move(h);
  sys.entrywise_positive = sys.h.minCoeff() > 0.0;

  if (big_m <= cross_check_limit) {
    // Columns of H must reproduce the composed maps on basis edge Laplacians.
    // The composition's off-diagonals are nonpositive, so the sign flips:
    // lower triangle of (G compose F)(E^{(p,q)}) equals -H[:, (p,q)].
    LaplacianGroundMap f(data, Side::Samples, tol);
    LaplacianGroundMap g(data, Side::Features, tol);
    for (Index col = 0; col < big_m; ++col) {
      const auto [p, q] = lower_tri_pair(col, m);
      Matrix e = Matrix::Zero(m, m);
      e(p, p) = 1.0;
      e(q, q) = 1.0;
      e(p, q) = -1.0;
      e(q, p) = -1.0;
      const Matrix composed = g.apply(f.apply(e));
      for (Index row = 0; row < big_m; ++row) {
        const auto [k, l] = lower_tri_pair(row, m);
        const double expected = -composed(k, l);
        const double got = sys.h(row, col);
        const double denom = std::max({std::fabs(expected), std::fabs(got), 1e-30});
        if (std::fabs(expected - got) > 1e-9 * denom) {
          std::ostringstream os;
          os << "eigen system assembly cross-check failed at H(" << row << ", "
             << col << "): closed form " << got << ", composed maps "
             << expected;
          throw Error(os.str());
        }
      }
    }
  }
  return sys;
}

PowerIterationResult power_iteration(const Matrix& h, double tol_residual,
                                     Index max_iters, std::uint64_t seed) {
  if (h.rows() != h.cols() || h.rows() < 1) {
    throw InvalidMatrix("power iteration needs a square matrix");
  }
  const Index d = h.rows();
  const auto run = [&](Vector x) -> std::optional<PowerIterationResult> {
    x /= x.cwiseAbs().maxCoeff();
    for (Index it = 1; it <= max_iters; ++it) {
      const Vector y = h * x;
      const double lambda = x.dot(y) / x.squaredNorm();
      const double res = (y - lambda * x).cwiseAbs().maxCoeff();
      if (res <= tol_residual * std::fabs(lambda)) {
        return PowerIterationResult{lambda, x, it, res};
      }
      const double norm = y.cwiseAbs().maxCoeff();
      if (!(norm > 0.0) || !std::isfinite(norm)) return std::nullopt;
      x = y / norm;
    }
    return std::nullopt;
  };

  auto result = run(Vector::Ones(d));
  for (int restart = 0; !result && restart < 3; ++restart) {
    CounterRng rng(seed, static_cast<std::uint64_t>(restart) + 1);
    Vector x(d);
    for (Index i = 0; i < d; ++i) x(i) = 0.5 + rng.next_double();
    result = run(std::move(x));
  }
  if (!result) {
    throw NonConvergence("power iteration did not reach the residual target");
  }
  if (result->v.minCoeff() <= 0.0) {
    throw NonConvergence("power iteration left the positive cone");
  }
  return *result;
}

void solve_perron(PerronSystem& sys, double tol_residual, Index max_iters,
                  std::uint64_t seed) {
  PowerIterationResult r = power_iteration(sys.h, tol_residual, max_iters, seed);
  sys.lambda = r.lambda;
  sys.v = std::move(r.v);
  sys.residual = r.residual;
  sys.iterations = r.iterations;
}

CostMatrix reconstruct_ground_matrix(const Vector& v, Index m,
                                     const Tolerances& tol) {
  if (v.size() != lower_tri_count(m)) {
    throw DimensionMismatch("eigenvector length does not match m(m-1)/2");
  }
  if (v.size() > 0 && v.minCoeff() <= 0.0) {
    throw InvalidMatrix("ground metric reconstruction needs a positive eigenvector");
  }
  Matrix a = Matrix::Zero(m, m);
  for (Index p = 1; p < m; ++p) {
    for (Index q = 0; q < p; ++q) {
      const double value = -v(lower_tri_index(p, q, m));
      a(p, q) = value;
      a(q, p) = value;
    }
  }
  for (Index k = 0; k < m; ++k) {
    double row_sum = 0.0;
    for (Index t = 0; t < m; ++t) {
      if (t == k) continue;
      row_sum -= a(k, t);
    }
    a(k, k) = row_sum;
  }
  ValidationReport report = validate_class(a, MatrixClass::GraphLaplacian, tol);
  if (!report.ok) {
    throw ClassViolation("reconstructed ground matrix: " + report.summary());
  }
  return CostMatrix(std::move(a), MatrixClass::GraphLaplacian, tol);
}

ValidationReport metric_matrix_check(const Matrix& a, const Dataset& data,
                                     const Tolerances& tol) {
  const Index n = data.n();
  Matrix dist(n, n);
  for (Index i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      const double value =
          mahalanobis_distance(a, data.sample(i), data.sample(j), tol);
      dist(i, j) = value;
      dist(j, i) = value;
    }
  }
  ValidationReport report = validate_class(dist, MatrixClass::Metric, tol);

  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const Vector delta = data.sample(i) - data.sample(j);
      const double spread = delta.maxCoeff() - delta.minCoeff();
      if (spread <= 1e-12 * std::max(1.0, delta.cwiseAbs().maxCoeff())) {
        report.ok = false;
        report.violations.push_back(
            {"sample difference lies in span of the all-ones vector", i, j, -1,
             spread});
      }
      if (!(dist(i, j) > 0.0)) {
        report.ok = false;
        report.violations.push_back(
            {"distinct samples at zero distance", i, j, -1, dist(i, j)});
      }
    }
  }
  return report;
}

}  // namespace mel
