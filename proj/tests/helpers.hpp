#pragma once

// Shared deterministic generators for the unit tests. std::mt19937_64 keeps
// the tests independent of the library's own counter-based generator.

#include <random>
#include <vector>

#include "mel/dataset.hpp"
#include "mel/types.hpp"

namespace testutil {

using mel::Index;
using mel::Matrix;
using mel::Vector;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Strictly positive histogram of length d summing to one.
inline Vector random_histogram(std::mt19937_64& rng, Index d,
                               double floor = 0.05) {
  Vector h(d);
  for (Index i = 0; i < d; ++i) h(i) = floor + uniform(rng, 0.0, 1.0);
  return h / h.sum();
}

/// Symmetric nonnegative matrix with zero diagonal (a semi-metric).
inline Matrix random_semimetric(std::mt19937_64& rng, Index d, double lo = 0.1,
                                double hi = 1.0) {
  Matrix m = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      m(i, j) = m(j, i) = uniform(rng, lo, hi);
    }
  }
  return m;
}

/// Random PSD matrix built as B B^T from a rectangular Gaussian factor.
inline Matrix random_psd(std::mt19937_64& rng, Index d, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix b(d, d + 2);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d + 2; ++j) b(i, j) = gauss(rng);
  }
  Matrix out = scale * (b * b.transpose()) / static_cast<double>(d + 2);
  return (out + out.transpose()) / 2.0;
}

/// Strictly positive raw data matrix (features x samples), entries in
/// [0.1, 1.1), generic with probability one.
inline Matrix random_raw(std::mt19937_64& rng, Index m, Index n) {
  Matrix raw(m, n);
  for (Index k = 0; k < m; ++k) {
    for (Index i = 0; i < n; ++i) raw(k, i) = 0.1 + uniform(rng, 0.0, 1.0);
  }
  return raw;
}

inline mel::Dataset random_dataset(std::mt19937_64& rng, Index m, Index n) {
  return mel::Dataset::from_raw(random_raw(rng, m, n));
}

/// Round-robin labels 0..classes-1 over n samples.
inline std::vector<int> cyclic_labels(Index n, int classes) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] =
      static_cast<int>(i) % classes;
  return out;
}

}  // namespace testutil
