#pragma once

#include <optional>
#include <vector>

#include "mel/cost_matrix.hpp"
#include "mel/dataset.hpp"
#include "mel/ground_map.hpp"
#include "mel/reference.hpp"

namespace mel {

enum class KernelKind { Gaussian, InverseMultiquadric, Laplacian };

const char* to_string(KernelKind k);

/* Radial kernel f applied to Mahalanobis distances. The maps evaluate
 * f(sqrt(u)) on squared distances u, so the Lipschitz constants certified
 * here are those of u -> f(sqrt(u)); the Laplacian kernel is only Lipschitz
 * away from zero and needs a positive floor q on the squared distances. */
class RadialKernel {
 public:
  static RadialKernel gaussian(double sigma);
  static RadialKernel inverse_multiquadric(double epsilon);
  static RadialKernel laplacian(double sigma);

  double at_squared(double u) const;  // f(sqrt(u)), u >= 0
  double at_zero() const { return 1.0; }
  /// Lipschitz constant of u -> f(sqrt(u)) on [q, inf).
  double squared_arg_lipschitz(double q = 0.0) const;

  KernelKind kind() const { return kind_; }
  double parameter() const { return param_; }

 private:
  RadialKernel(KernelKind kind, double param);
  KernelKind kind_;
  double param_;
};

/* sqrt((x - y)^T a (x - y)) for PSD a. Quadratic forms inside
 * [-tol.quadratic_form, 0) are treated as round-off and clamped to zero;
 * anything lower raises NegativeQuadraticForm. */
double squared_mahalanobis(const Matrix& a, const Vector& x, const Vector& y,
                           const Tolerances& tol = default_tolerances());
double mahalanobis_distance(const Matrix& a, const Vector& x, const Vector& y,
                            const Tolerances& tol = default_tolerances());

struct LipschitzBudget {
  double r = 0.0;       // max squared l1 diameter of the side's raw vectors
  double q = 0.0;       // floor on squared distances admissible inputs produce
  double scalar = 0.0;  // Lipschitz constant of f(sqrt(.)) given q
  double map = 0.0;     // r * scalar
};

/* Kernel ground metric map: output(i, j) = f(M_cost(v_i, v_j)) + reference,
 * where v_i are the raw vectors of `side`. Output is PSD (kernel matrix plus
 * PSD reference). `input_floor` is a certified lower bound on the smallest
 * eigenvalue of admissible input matrices; the Laplacian kernel requires it
 * to be positive to have a Lipschitz certificate at all. */
class KernelGroundMap : public GroundMetricMap {
 public:
  KernelGroundMap(const Dataset& data, Side side, RadialKernel kernel,
                  ReferenceMatrix reference, double input_floor = 0.0,
                  const Tolerances& tol = default_tolerances());

  Index input_dim() const override { return data_.vector_dim(side_); }
  Index output_dim() const override { return data_.count(side_); }
  Matrix apply(const Matrix& cost) const override;
  double entry(const Matrix& cost, Index i, Index j) const override;
  MatrixClass input_class() const override { return MatrixClass::Psd; }
  MatrixClass output_class() const override { return MatrixClass::Psd; }
  const Matrix* reference() const override { return &ref_.entries(); }
  std::optional<double> lipschitz_constant() const override;
  std::optional<double> norm_lower_bound() const override;

  const RadialKernel& kernel() const { return kernel_; }
  Side side() const { return side_; }
  double input_floor() const { return input_floor_; }
  const Dataset& data() const { return data_; }

 private:
  /* Validates the input is PSD up to round-off: fast path is a Cholesky
   * attempt with a tiny diagonal shift; on failure, eigenvalues inside the
   * clip window are zeroed, larger violations abort. Returns the matrix to
   * evaluate with (input itself unless clipping was needed). */
  Matrix psd_guard(const Matrix& cost) const;

  const Dataset& data_;
  Side side_;
  RadialKernel kernel_;
  ReferenceMatrix ref_;
  double input_floor_;
  Tolerances tol_;
  std::vector<Vector> vectors_;
};

/// Certified constants for the map; throws PositiveReferenceRequired when the
/// Laplacian kernel lacks a positive squared-distance floor.
LipschitzBudget lipschitz_budget(const KernelGroundMap& map);

/// Validates the input class, applies the map, tags the output PSD.
CostMatrix kernel_map_apply(const KernelGroundMap& map, const CostMatrix& cost,
                            const Tolerances& tol = default_tolerances());

}  // namespace mel
