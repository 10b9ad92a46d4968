#pragma once

#include "mel/cost_matrix.hpp"
#include "mel/dataset.hpp"

namespace mel {

enum class ReferenceKind { ScaledL1Pairwise, ScaledIdentity, UserSupplied };

const char* to_string(ReferenceKind k);

/* Strictly positive (off the diagonal) or PSD anchor added to every map
 * output. Keeps the fixed-point iterates away from the degenerate all-zero
 * solution and bounds the map norms from below. */
class ReferenceMatrix {
 public:
  /// tau * pairwise l1 distances between normalized histograms on `side`.
  static ReferenceMatrix scaled_l1_pairwise(const Dataset& data, Side side,
                                            double tau);
  /// tau * identity, the usual anchor for the kernel family.
  static ReferenceMatrix scaled_identity(Index dim, double tau);
  static ReferenceMatrix user_supplied(CostMatrix cost);

  const CostMatrix& cost() const { return cost_; }
  const Matrix& entries() const { return cost_.entries(); }
  ReferenceKind kind() const { return kind_; }
  double tau() const { return tau_; }
  Index dim() const { return cost_.dim(); }

 private:
  ReferenceMatrix(CostMatrix cost, ReferenceKind kind, double tau)
      : cost_(std::move(cost)), kind_(kind), tau_(tau) {}

  CostMatrix cost_;
  ReferenceKind kind_;
  double tau_;
};

}  // namespace mel
