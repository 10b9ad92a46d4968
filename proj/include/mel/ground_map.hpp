#pragma once

#include <optional>

#include "mel/cost_matrix.hpp"
#include "mel/types.hpp"

namespace mel {

/* A map from a cost matrix on one side of the coupled problem to a
 * distance-like matrix on the other side (feature costs to sample distances
 * or vice versa). Implementations close over the dataset and a reference
 * matrix; the fixed-point solvers only see this interface.
 *
 * entry() evaluates a single output entry so stochastic solvers can update
 * coordinates without paying for a full apply(). For a symmetric output,
 * entry(i, j) == entry(j, i) bitwise. */
class GroundMetricMap {
 public:
  virtual ~GroundMetricMap() = default;

  virtual Index input_dim() const = 0;
  virtual Index output_dim() const = 0;

  virtual Matrix apply(const Matrix& cost) const = 0;
  virtual double entry(const Matrix& cost, Index i, Index j) const = 0;

  virtual MatrixClass input_class() const = 0;
  virtual MatrixClass output_class() const = 0;

  /// Reference matrix added to the output, when the family uses one.
  virtual const Matrix* reference() const { return nullptr; }

  /// Certified Lipschitz constant w.r.t. the entrywise max norm, if known.
  virtual std::optional<double> lipschitz_constant() const { return std::nullopt; }

  /// Lower bound on max_norm(apply(A)) valid for every admissible input.
  virtual std::optional<double> norm_lower_bound() const { return std::nullopt; }
};

}  // namespace mel
