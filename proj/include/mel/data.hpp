#pragma once

#include <string>

#include "mel/dataset.hpp"
#include "mel/types.hpp"

namespace mel {

/* Translated-histogram families on the unit torus, all built from a Gaussian
 * bump g(x) = exp(-peak_width x^2) evaluated at the nearest image:
 *   H1: g(x)
 *   H2: g(x) + g(x + 1/2) / 2
 *   H3: g(x) + g(x + 1/3) / 2
 * each divided by its value at 0 (the proportionality constant is immaterial
 * after dataset normalization). */
enum class Shape { H1, H2, H3 };

const char* to_string(Shape s);
Shape shape_from_string(const std::string& name);

struct SyntheticSpec {
  Index n = 100;  // samples
  Index m = 80;   // features
  Shape shape = Shape::H1;
  double peak_width = 400.0;  // exponent scale of the bump
};

/* Entry (i, j) = h(i/n - j/m), samples as rows (n x m): each row is the same
 * bump pattern translated around the torus, exactly circulant when n = m.
 * Deterministic, no randomness involved. */
Matrix synthetic_matrix(const SyntheticSpec& spec);

/// synthetic_matrix transposed into features-by-samples and normalized.
Dataset generate_synthetic(const SyntheticSpec& spec,
                           const Tolerances& tol = default_tolerances());

struct CsvOptions {
  bool exp_transform = false;  // entrywise exp, for inputs with negatives
  bool transpose = false;      // set when CSV rows are samples
};

/* Rectangular numeric CSV; a first line with any non-numeric token is
 * treated as a header and skipped; NaN and infinities are rejected. */
Matrix load_csv_matrix(const std::string& path);

/// load_csv_matrix, optional entrywise exp, optional transpose, then Dataset
/// normalization (which rejects negative entries).
Dataset load_csv(const std::string& path, const CsvOptions& opts = {},
                 const Tolerances& tol = default_tolerances());

/// Comma-separated, 17 significant digits: reloading reproduces the exact
/// same doubles.
void save_csv(const std::string& path, const Matrix& mat);

}  // namespace mel
