#include "mel/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "mel/errors.hpp"

namespace mel {

namespace {

void check_labeled(const LabeledDistances& ld) {
  if (ld.d.rows() != ld.d.cols()) {
    throw InvalidMatrix("distance matrix must be square");
  }
  if (static_cast<Index>(ld.labels.size()) != ld.d.rows()) {
    throw DimensionMismatch("one label per sample required");
  }
}

/// label -> member indices, iteration order sorted by label id.
std::map<int, std::vector<Index>> group_by_label(const std::vector<int>& labels) {
  std::map<int, std::vector<Index>> classes;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    classes[labels[i]].push_back(static_cast<Index>(i));
  }
  return classes;
}

}  // namespace

double asw(const LabeledDistances& ld) {
  check_labeled(ld);
  const auto classes = group_by_label(ld.labels);
  if (classes.size() < 2) {
    throw SingleClass("silhouette needs at least two classes");
  }
  const Index n = ld.d.rows();
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    const int own = ld.labels[static_cast<std::size_t>(i)];
    const auto& own_members = classes.at(own);
    if (own_members.size() < 2) continue;  // singleton: silhouette 0

    double a_i = 0.0;
    for (Index j : own_members) {
      if (j != i) a_i += ld.d(i, j);
    }
    a_i /= static_cast<double>(own_members.size() - 1);

    double b_i = std::numeric_limits<double>::infinity();
    for (const auto& [label, members] : classes) {
      if (label == own) continue;
      double mean = 0.0;
      for (Index j : members) mean += ld.d(i, j);
      mean /= static_cast<double>(members.size());
      b_i = std::min(b_i, mean);
    }

    const double denom = std::max(a_i, b_i);
    if (denom > 0.0) total += (b_i - a_i) / denom;
  }
  return total / static_cast<double>(n);
}

double dunn_index(const LabeledDistances& ld) {
  check_labeled(ld);
  const auto classes = group_by_label(ld.labels);
  if (classes.size() < 2) {
    throw SingleClass("Dunn index needs at least two classes");
  }
  const Index n = ld.d.rows();
  double inter_min = std::numeric_limits<double>::infinity();
  double intra_max = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const bool same = ld.labels[static_cast<std::size_t>(i)] ==
                        ld.labels[static_cast<std::size_t>(j)];
      if (same) {
        intra_max = std::max(intra_max, ld.d(i, j));
      } else {
        inter_min = std::min(inter_min, ld.d(i, j));
      }
    }
  }
  if (!(intra_max > 0.0)) {
    // Degenerate clusters: every class is a single point (or duplicates).
    return std::numeric_limits<double>::infinity();
  }
  return inter_min / intra_max;
}

Matrix euclidean_baseline(const Dataset& data, Side side) {
  const Index d = data.count(side);
  Matrix out = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    const Vector vi = data.raw_vector(side, i);
    for (Index j = i + 1; j < d; ++j) {
      const double value = (vi - data.raw_vector(side, j)).norm();
      out(i, j) = value;
      out(j, i) = value;
    }
  }
  return out;
}

std::vector<int> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open labels file: " + path);
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Trim whitespace and optional trailing CR.
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(begin, end - begin + 1);
    try {
      std::size_t used = 0;
      const int value = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      labels.push_back(value);
    } catch (const std::exception&) {
      std::ostringstream os;
      os << "labels file " << path << " line " << lineno
         << ": not an integer: '" << token << "'";
      throw ParseError(os.str());
    }
  }
  return labels;
}

}  // namespace mel
