#pragma once

#include <vector>

#include "mel/tolerances.hpp"
#include "mel/types.hpp"

namespace mel {

/// Which side of the coupled problem an operation works on.
enum class Side { Samples, Features };

const char* to_string(Side s);

/* Nonnegative data matrix, features as rows and samples as columns, carrying
 * the two normalized copies used throughout: one with unit row sums (feature
 * histograms over samples) and one with unit column sums (sample histograms
 * over features). Duplicate rows/columns are dropped on construction, keeping
 * the earliest index, so pairwise distances between kept vectors are nonzero. */
class Dataset {
 public:
  static Dataset from_raw(Matrix raw, const Tolerances& tol = default_tolerances());

  Index m() const { return raw_.rows(); }  // feature count
  Index n() const { return raw_.cols(); }  // sample count

  const Matrix& raw() const { return raw_; }
  const Matrix& row_normalized() const { return row_normalized_; }
  const Matrix& col_normalized() const { return col_normalized_; }

  /// Sample i as a histogram over features (column of col_normalized, sums to 1).
  Vector sample_histogram(Index i) const { return col_normalized_.col(i); }
  /// Feature k as a histogram over samples (row of row_normalized, sums to 1).
  Vector feature_histogram(Index k) const {
    return row_normalized_.row(k).transpose();
  }

  Vector sample(Index i) const { return raw_.col(i); }
  Vector feature(Index k) const { return raw_.row(k).transpose(); }

  /// Raw vectors for `side`: samples are columns, features are rows.
  Vector raw_vector(Side side, Index i) const {
    return side == Side::Samples ? sample(i) : feature(i);
  }
  /// Normalized histogram for `side`.
  Vector histogram(Side side, Index i) const {
    return side == Side::Samples ? sample_histogram(i) : feature_histogram(i);
  }
  /// Number of vectors on `side` (n for samples, m for features).
  Index count(Side side) const { return side == Side::Samples ? n() : m(); }
  /// Length of each vector on `side`.
  Index vector_dim(Side side) const { return side == Side::Samples ? m() : n(); }

  const std::vector<Index>& dropped_rows() const { return dropped_rows_; }
  const std::vector<Index>& dropped_cols() const { return dropped_cols_; }

 private:
  Dataset() = default;

  Matrix raw_;
  Matrix row_normalized_;
  Matrix col_normalized_;
  std::vector<Index> dropped_rows_;  // original indices removed by dedup
  std::vector<Index> dropped_cols_;
};

/// Convenience alias for Dataset::from_raw.
Dataset normalize_dataset(Matrix raw, const Tolerances& tol = default_tolerances());

}  // namespace mel
