#pragma once

#include <vector>

#include "mel/dataset.hpp"
#include "mel/types.hpp"

namespace mel {

/// Distance matrix plus a class id per sample.
struct LabeledDistances {
  Matrix d;                 // square, symmetric, nonnegative, zero diagonal
  std::vector<int> labels;  // one id per row of d
};

/* Average silhouette width, in [-1, 1]: mean over samples of
 * (b_i - a_i) / max(a_i, b_i), a_i the mean distance to the other members of
 * the own class, b_i the smallest mean distance to another class. Samples in
 * singleton classes contribute silhouette 0. Throws SingleClass with fewer
 * than two classes. */
double asw(const LabeledDistances& ld);

/* Dunn index: minimum inter-class distance over maximum intra-class
 * distance. When the maximum intra-class distance is zero (all classes are
 * single points or exact duplicates) the ratio is degenerate and +infinity
 * is returned as a sentinel. */
double dunn_index(const LabeledDistances& ld);

/// Pairwise Euclidean distances between the side's raw vectors.
Matrix euclidean_baseline(const Dataset& data, Side side);

/// One id per line; accepts integers, ignores blank lines.
std::vector<int> load_labels(const std::string& path);

}  // namespace mel
