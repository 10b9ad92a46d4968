#include "mel/reference.hpp"

#include "mel/errors.hpp"

namespace mel {

const char* to_string(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::ScaledL1Pairwise: return "scaled-l1-pairwise";
    case ReferenceKind::ScaledIdentity: return "scaled-identity";
    case ReferenceKind::UserSupplied: return "user-supplied";
  }
  return "?";
}

ReferenceMatrix ReferenceMatrix::scaled_l1_pairwise(const Dataset& data,
                                                    Side side, double tau) {
  if (tau <= 0.0) throw ConfigError("reference: tau must be positive");
  Index d = data.count(side);
  Matrix r = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    Vector hi = data.histogram(side, i);
    for (Index j = i + 1; j < d; ++j) {
      double dist = tau * (hi - data.histogram(side, j)).lpNorm<1>();
      r(i, j) = dist;
      r(j, i) = dist;
    }
  }
  // l1 pairwise distances form a metric; dedup guarantees strictly positive
  // off-diagonal entries.
  return ReferenceMatrix(CostMatrix(std::move(r), MatrixClass::Metric),
                         ReferenceKind::ScaledL1Pairwise, tau);
}

ReferenceMatrix ReferenceMatrix::scaled_identity(Index dim, double tau) {
  if (tau <= 0.0) throw ConfigError("reference: tau must be positive");
  if (dim <= 0) throw InvalidMatrix("reference: dimension must be positive");
  Matrix r = tau * Matrix::Identity(dim, dim);
  return ReferenceMatrix(CostMatrix(std::move(r), MatrixClass::Psd),
                         ReferenceKind::ScaledIdentity, tau);
}

ReferenceMatrix ReferenceMatrix::user_supplied(CostMatrix cost) {
  return ReferenceMatrix(std::move(cost), ReferenceKind::UserSupplied, 1.0);
}

}  // namespace mel
