#pragma once

#include <Eigen/Dense>

namespace mel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Entrywise maximum norm, max_{i,j} |M(i,j)|.
double max_norm(const Matrix& m);

}  // namespace mel
