#pragma once

#include <string>
#include <vector>

#include "mel/tolerances.hpp"
#include "mel/types.hpp"

namespace mel {

/* Structural classes a cost matrix can be validated against. Metric implies
 * SemiMetric; GraphLaplacian matrices are PSD by diagonal dominance but are
 * validated against their own invariants (zero row sums, nonpositive
 * off-diagonal). */
enum class MatrixClass { Unchecked, SemiMetric, Metric, Psd, GraphLaplacian };

const char* to_string(MatrixClass c);

struct Violation {
  std::string what;   // e.g. "triangle", "diagonal", "eigenvalue"
  Index i = -1, j = -1, k = -1;
  double value = 0.0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  std::string summary() const;
};

/// Validates M against the invariants of `tag`. Side-effect free.
ValidationReport validate_class(const Matrix& m, MatrixClass tag,
                                const Tolerances& tol = default_tolerances());

/* Square symmetric cost matrix with a declared class tag. Construction
 * symmetrizes (M + M^T)/2 when the asymmetry is within tolerance and rejects
 * the matrix otherwise; the tag itself is declared intent and is checked by
 * validate_class, not on every construction. */
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(Matrix entries, MatrixClass tag,
             const Tolerances& tol = default_tolerances());

  const Matrix& entries() const { return entries_; }
  MatrixClass class_tag() const { return tag_; }
  Index dim() const { return entries_.rows(); }
  double operator()(Index i, Index j) const { return entries_(i, j); }

  ValidationReport validate(const Tolerances& tol = default_tolerances()) const;

 private:
  Matrix entries_;
  MatrixClass tag_ = MatrixClass::Unchecked;
};

}  // namespace mel
