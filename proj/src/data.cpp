#include "mel/data.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "mel/errors.hpp"

namespace mel {

const char* to_string(Shape s) {
  switch (s) {
    case Shape::H1: return "h1";
    case Shape::H2: return "h2";
    case Shape::H3: return "h3";
  }
  return "?";
}

Shape shape_from_string(const std::string& name) {
  if (name == "h1" || name == "H1") return Shape::H1;
  if (name == "h2" || name == "H2") return Shape::H2;
  if (name == "h3" || name == "H3") return Shape::H3;
  throw ConfigError("unknown shape: " + name + " (expected h1, h2, or h3)");
}

namespace {

/// Nearest-image bump: the argument is reduced to [-1/2, 1/2] with
/// round-half-to-even so the boundary is deterministic.
double torus_bump(double t, double width) {
  const double x = std::remainder(t, 1.0);
  return std::exp(-width * x * x);
}

double shape_value(Shape shape, double t, double width) {
  switch (shape) {
    case Shape::H1: return torus_bump(t, width);
    case Shape::H2: return torus_bump(t, width) + 0.5 * torus_bump(t + 0.5, width);
    case Shape::H3:
      return torus_bump(t, width) + 0.5 * torus_bump(t + 1.0 / 3.0, width);
  }
  return 0.0;
}

}  // namespace

Matrix synthetic_matrix(const SyntheticSpec& spec) {
  if (spec.n < 2 || spec.m < 2) {
    throw ConfigError("synthetic data needs n, m >= 2");
  }
  if (!(spec.peak_width > 0.0)) {
    throw ConfigError("peak_width must be positive");
  }
  const double at_zero = shape_value(spec.shape, 0.0, spec.peak_width);
  Matrix x(spec.n, spec.m);
  for (Index i = 0; i < spec.n; ++i) {
    for (Index j = 0; j < spec.m; ++j) {
      const double t = static_cast<double>(i) / static_cast<double>(spec.n) -
                       static_cast<double>(j) / static_cast<double>(spec.m);
      x(i, j) = shape_value(spec.shape, t, spec.peak_width) / at_zero;
    }
  }
  return x;
}

Dataset generate_synthetic(const SyntheticSpec& spec, const Tolerances& tol) {
  return Dataset::from_raw(synthetic_matrix(spec).transpose(), tol);
}

namespace {

bool parse_double(const std::string& token, double* out) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || end != begin + token.size()) return false;
  *out = value;
  return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      tokens.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  tokens.push_back(current);
  for (std::string& t : tokens) {
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    t = b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
  }
  return tokens;
}

}  // namespace

Matrix load_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first_data_line = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto tokens = split_csv_line(line);
    std::vector<double> row;
    row.reserve(tokens.size());
    bool all_numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < tokens.size(); ++c) {
      double value = 0.0;
      if (!parse_double(tokens[c], &value)) {
        all_numeric = false;
        bad_col = c;
        break;
      }
      row.push_back(value);
    }
    if (!all_numeric) {
      if (first_data_line) continue;  // header row
      std::ostringstream os;
      os << path << " line " << lineno << " column " << bad_col + 1
         << ": not a number: '" << tokens[bad_col] << "'";
      throw ParseError(os.str());
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) {
        std::ostringstream os;
        os << path << " line " << lineno << " column " << c + 1
           << ": non-finite value";
        throw ParseError(os.str());
      }
    }
    if (first_data_line) {
      width = row.size();
      first_data_line = false;
    } else if (row.size() != width) {
      std::ostringstream os;
      os << path << " line " << lineno << ": expected " << width
         << " columns, found " << row.size();
      throw ParseError(os.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": no numeric rows");

  Matrix mat(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      mat(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return mat;
}

Dataset load_csv(const std::string& path, const CsvOptions& opts,
                 const Tolerances& tol) {
  Matrix mat = load_csv_matrix(path);
  if (opts.exp_transform) mat = mat.array().exp().matrix();
  if (opts.transpose) mat.transposeInPlace();
  return Dataset::from_raw(std::move(mat), tol);
}

void save_csv(const std::string& path, const Matrix& mat) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  char buf[64];
  for (Index i = 0; i < mat.rows(); ++i) {
    for (Index j = 0; j < mat.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", mat(i, j));
      out << buf;
      if (j + 1 < mat.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace mel
