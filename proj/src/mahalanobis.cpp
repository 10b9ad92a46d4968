#include "mel/mahalanobis.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "mel/errors.hpp"
#include "mel/runtime.hpp"

namespace mel {

const char* to_string(KernelKind k) {
  switch (k) {
    case KernelKind::Gaussian: return "gaussian";
    case KernelKind::InverseMultiquadric: return "inverse_multiquadric";
    case KernelKind::Laplacian: return "laplacian";
  }
  return "?";
}

RadialKernel::RadialKernel(KernelKind kind, double param)
    : kind_(kind), param_(param) {
  if (!(param > 0.0) || !std::isfinite(param)) {
    throw ConfigError("kernel parameter must be positive and finite");
  }
}

RadialKernel RadialKernel::gaussian(double sigma) {
  return RadialKernel(KernelKind::Gaussian, sigma);
}

RadialKernel RadialKernel::inverse_multiquadric(double epsilon) {
  return RadialKernel(KernelKind::InverseMultiquadric, epsilon);
}

RadialKernel RadialKernel::laplacian(double sigma) {
  return RadialKernel(KernelKind::Laplacian, sigma);
}

double RadialKernel::at_squared(double u) const {
  switch (kind_) {
    case KernelKind::Gaussian:
      return std::exp(-u / (2.0 * param_ * param_));
    case KernelKind::InverseMultiquadric:
      return 1.0 / std::sqrt(1.0 + param_ * param_ * u);
    case KernelKind::Laplacian:
      return std::exp(-std::sqrt(u) / param_);
  }
  return 0.0;
}

double RadialKernel::squared_arg_lipschitz(double q) const {
  switch (kind_) {
    case KernelKind::Gaussian:
      // |d/du exp(-u / 2s^2)| <= 1 / 2s^2
      return 1.0 / (2.0 * param_ * param_);
    case KernelKind::InverseMultiquadric:
      // |d/du (1 + e^2 u)^{-1/2}| <= e^2 / 2
      return param_ * param_ / 2.0;
    case KernelKind::Laplacian:
      // |d/du exp(-sqrt(u)/s)| = exp(-sqrt(u)/s) / (2 s sqrt(u)) <= 1/(2 s sqrt(q))
      if (!(q > 0.0)) {
        throw PositiveReferenceRequired(
            "laplacian kernel needs a positive floor on squared distances");
      }
      return 1.0 / (2.0 * param_ * std::sqrt(q));
  }
  return 0.0;
}

double squared_mahalanobis(const Matrix& a, const Vector& x, const Vector& y,
                           const Tolerances& tol) {
  if (x.size() != y.size() || a.rows() != x.size() || a.cols() != x.size()) {
    throw DimensionMismatch("mahalanobis form: incompatible shapes");
  }
  const Vector d = x - y;
  const double u = d.dot(a * d);
  if (u >= 0.0) return u;
  if (u >= -tol.quadratic_form) return 0.0;
  std::ostringstream os;
  os << "quadratic form is negative beyond round-off: " << u;
  throw NegativeQuadraticForm(os.str());
}

double mahalanobis_distance(const Matrix& a, const Vector& x, const Vector& y,
                            const Tolerances& tol) {
  return std::sqrt(squared_mahalanobis(a, x, y, tol));
}

KernelGroundMap::KernelGroundMap(const Dataset& data, Side side,
                                 RadialKernel kernel, ReferenceMatrix reference,
                                 double input_floor, const Tolerances& tol)
    : data_(data),
      side_(side),
      kernel_(kernel),
      ref_(std::move(reference)),
      input_floor_(input_floor),
      tol_(tol) {
  if (ref_.entries().rows() != data_.count(side_)) {
    throw DimensionMismatch("reference dimension does not match the side");
  }
  vectors_.reserve(static_cast<std::size_t>(data_.count(side_)));
  for (Index i = 0; i < data_.count(side_); ++i) {
    vectors_.push_back(data_.raw_vector(side_, i));
  }
}

Matrix KernelGroundMap::psd_guard(const Matrix& cost) const {
  const double shift = 1e-12 * std::max(1.0, max_norm(cost));
  Matrix shifted = cost;
  shifted.diagonal().array() += shift;
  Eigen::LLT<Matrix> llt(shifted);
  if (llt.info() == Eigen::Success) return cost;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(cost);
  if (eig.info() != Eigen::Success) {
    throw NotPositiveSemidefinite("eigendecomposition of the input failed");
  }
  const double lambda_min = eig.eigenvalues().minCoeff();
  if (lambda_min <= -tol_.eigenvalue_clip) {
    std::ostringstream os;
    os << "input eigenvalue " << lambda_min << " below the clip window";
    throw NotPositiveSemidefinite(os.str());
  }
  Vector clipped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clipped.asDiagonal() *
         eig.eigenvectors().transpose();
}

Matrix KernelGroundMap::apply(const Matrix& cost) const {
  if (cost.rows() != input_dim() || cost.cols() != input_dim()) {
    throw DimensionMismatch("kernel map: input has the wrong shape");
  }
  const Matrix aa = psd_guard(cost);
  const Index d = output_dim();
  Matrix out(d, d);
  const Matrix& ref = ref_.entries();
  parallel_for(d, [&](Index i) {
    for (Index j = i; j < d; ++j) {
      const double u = squared_mahalanobis(aa, vectors_[static_cast<std::size_t>(i)],
                                           vectors_[static_cast<std::size_t>(j)], tol_);
      const double value = kernel_.at_squared(u) + ref(i, j);
      out(i, j) = value;
      out(j, i) = value;
    }
  });
  return out;
}

double KernelGroundMap::entry(const Matrix& cost, Index i, Index j) const {
  if (cost.rows() != input_dim() || cost.cols() != input_dim()) {
    throw DimensionMismatch("kernel map: input has the wrong shape");
  }
  const double u = squared_mahalanobis(cost, vectors_[static_cast<std::size_t>(i)],
                                       vectors_[static_cast<std::size_t>(j)], tol_);
  return kernel_.at_squared(u) + ref_.entries()(i, j);
}

std::optional<double> KernelGroundMap::lipschitz_constant() const {
  if (kernel_.kind() == KernelKind::Laplacian && !(input_floor_ > 0.0)) {
    return std::nullopt;
  }
  return lipschitz_budget(*this).map;
}

std::optional<double> KernelGroundMap::norm_lower_bound() const {
  // Diagonal entries equal f(0) + reference diagonal.
  return kernel_.at_zero() + ref_.entries().diagonal().maxCoeff();
}

LipschitzBudget lipschitz_budget(const KernelGroundMap& map) {
  const Dataset& data = map.data();
  const Side side = map.side();
  const Index d = data.count(side);
  double r = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < d; ++i) {
    const Vector vi = data.raw_vector(side, i);
    for (Index j = i + 1; j < d; ++j) {
      const Vector diff = vi - data.raw_vector(side, j);
      const double l1 = diff.lpNorm<1>();
      r = std::max(r, l1 * l1);
      min_gap = std::min(min_gap, diff.squaredNorm());
    }
  }
  if (!std::isfinite(min_gap)) min_gap = 0.0;  // fewer than two vectors

  LipschitzBudget budget;
  budget.r = r;
  budget.q = map.input_floor() > 0.0 ? map.input_floor() * min_gap : 0.0;
  budget.scalar = map.kernel().squared_arg_lipschitz(budget.q);
  budget.map = budget.r * budget.scalar;
  return budget;
}

CostMatrix kernel_map_apply(const KernelGroundMap& map, const CostMatrix& cost,
                            const Tolerances& tol) {
  ValidationReport report = validate_class(cost.entries(), map.input_class(), tol);
  if (!report.ok) {
    throw ClassViolation("kernel map input: " + report.summary());
  }
  return CostMatrix(map.apply(cost.entries()), map.output_class(), tol);
}

}  // namespace mel
