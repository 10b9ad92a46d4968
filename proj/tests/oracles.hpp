#pragma once

// Reference implementations used only by the tests. Each one recomputes the
// quantity under test through a different algorithm (vertex enumeration, grid
// scan, dense factorization, direct loops) so that agreement with the library
// is evidence rather than tautology.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Minimum of <c, P> over all couplings with marginals (s, t), found by
// enumerating basic solutions. Every vertex of the transportation polytope is
// supported on a spanning tree of the complete bipartite graph, i.e. on
// a + b - 1 cells, and flows on a tree are forced; so enumerate all cell
// subsets of that size, solve each by leaf stripping, and keep the feasible
// ones. Exponential in the cell count, intended for tiny problems only.
inline double exact_transport_value(const Matrix& c, const Vector& s,
                                    const Vector& t) {
  const Index a = s.size();
  const Index b = t.size();
  const int cells = static_cast<int>(a * b);
  const int need = static_cast<int>(a + b - 1);
  double best = std::numeric_limits<double>::infinity();

  std::vector<int> rows(cells), cols(cells);
  for (int e = 0; e < cells; ++e) {
    rows[e] = e / static_cast<int>(b);
    cols[e] = e % static_cast<int>(b);
  }

  for (std::uint32_t mask = 0; mask < (1u << cells); ++mask) {
    if (__builtin_popcount(mask) != need) continue;

    std::vector<int> active;
    std::vector<int> row_deg(a, 0), col_deg(b, 0);
    for (int e = 0; e < cells; ++e) {
      if (mask & (1u << e)) {
        active.push_back(e);
        ++row_deg[rows[e]];
        ++col_deg[cols[e]];
      }
    }

    // Strip leaves: a node incident to exactly one active cell forces that
    // cell's flow to its remaining marginal. A subset that never runs out of
    // leaves before emptying is a tree; anything cyclic gets stuck.
    std::vector<double> rs(s.data(), s.data() + a);
    std::vector<double> ts(t.data(), t.data() + b);
    std::vector<double> flow(cells, 0.0);
    std::vector<bool> used(cells, false);
    bool tree = true;
    for (int step = 0; step < need; ++step) {
      int pick = -1;
      for (int e : active) {
        if (used[e]) continue;
        if (row_deg[rows[e]] == 1 || col_deg[cols[e]] == 1) {
          pick = e;
          break;
        }
      }
      if (pick < 0) {
        tree = false;
        break;
      }
      const int r = rows[pick];
      const int q = cols[pick];
      const double v = row_deg[r] == 1 ? rs[r] : ts[q];
      flow[pick] = v;
      rs[r] -= v;
      ts[q] -= v;
      used[pick] = true;
      --row_deg[r];
      --col_deg[q];
    }
    if (!tree) continue;

    bool feasible = true;
    for (int e : active) {
      if (flow[e] < -1e-12) feasible = false;
    }
    for (Index i = 0; i < a; ++i) {
      if (std::fabs(rs[i]) > 1e-9) feasible = false;
    }
    for (Index j = 0; j < b; ++j) {
      if (std::fabs(ts[j]) > 1e-9) feasible = false;
    }
    if (!feasible) continue;

    double value = 0.0;
    for (int e : active) value += flow[e] * c(rows[e], cols[e]);
    best = std::min(best, value);
  }
  return best;
}

// Entropic transport cost for a 2x2 problem. The polytope is a segment: with
// p = P(0,0), the coupling is [[p, x0-p], [y0-p, 1-x0-y0+p]] for p in
// [max(0, x0+y0-1), min(x0, y0)]. The objective <c,P> + eta*KL(P | x y^T) is
// strictly convex in p, so a coarse scan plus golden-section refinement nails
// the minimum.
inline double entropic_value_2x2(const Matrix& c, const Vector& x,
                                 const Vector& y, double eta) {
  const double lo = std::max(0.0, x(0) + y(0) - 1.0);
  const double hi = std::min(x(0), y(0));

  const auto term = [&](double p, Index i, Index j) {
    if (p <= 0.0) return 0.0;  // 0 log 0 = 0; negative p only at roundoff
    return p * c(i, j) + eta * p * std::log(p / (x(i) * y(j)));
  };
  const auto f = [&](double p) {
    return term(p, 0, 0) + term(x(0) - p, 0, 1) + term(y(0) - p, 1, 0) +
           term(1.0 - x(0) - y(0) + p, 1, 1);
  };

  const int grid = 4096;
  double best_p = lo;
  double best_v = f(lo);
  for (int k = 1; k <= grid; ++k) {
    const double p = lo + (hi - lo) * static_cast<double>(k) / grid;
    const double v = f(p);
    if (v < best_v) {
      best_v = v;
      best_p = p;
    }
  }

  double a = std::max(lo, best_p - (hi - lo) / grid);
  double b = std::min(hi, best_p + (hi - lo) / grid);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double p1 = b - phi * (b - a);
  double p2 = a + phi * (b - a);
  double f1 = f(p1);
  double f2 = f(p2);
  while (b - a > 1e-14) {
    if (f1 < f2) {
      b = p2;
      p2 = p1;
      f2 = f1;
      p1 = b - phi * (b - a);
      f1 = f(p1);
    } else {
      a = p1;
      p1 = p2;
      f1 = f2;
      p2 = a + phi * (b - a);
      f2 = f(p2);
    }
  }
  return std::min({best_v, f1, f2});
}

// Mean silhouette over all samples: s(i) = (b - a) / max(a, b) with a the
// mean distance to the rest of i's class and b the smallest mean distance to
// another class; s(i) = 0 for singleton classes and when max(a, b) = 0.
inline double silhouette_mean(const Matrix& d, const std::vector<int>& labels) {
  const Index n = d.rows();
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    int own_count = 0;
    double own_sum = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (labels[static_cast<std::size_t>(j)] ==
          labels[static_cast<std::size_t>(i)]) {
        ++own_count;
        if (j != i) own_sum += d(i, j);
      }
    }
    if (own_count < 2) continue;
    const double a = own_sum / static_cast<double>(own_count - 1);

    double b = std::numeric_limits<double>::infinity();
    std::vector<int> seen;
    for (Index j = 0; j < n; ++j) {
      const int lab = labels[static_cast<std::size_t>(j)];
      if (lab == labels[static_cast<std::size_t>(i)]) continue;
      if (std::find(seen.begin(), seen.end(), lab) != seen.end()) continue;
      seen.push_back(lab);
      double sum = 0.0;
      int count = 0;
      for (Index k = 0; k < n; ++k) {
        if (labels[static_cast<std::size_t>(k)] == lab) {
          sum += d(i, k);
          ++count;
        }
      }
      b = std::min(b, sum / static_cast<double>(count));
    }
    if (std::max(a, b) > 0.0) total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(n);
}

// Smallest between-class distance over largest within-class distance;
// +infinity when no within-class pair is separated.
inline double dunn(const Matrix& d, const std::vector<int>& labels) {
  const Index n = d.rows();
  double inter = std::numeric_limits<double>::infinity();
  double intra = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (labels[static_cast<std::size_t>(i)] ==
          labels[static_cast<std::size_t>(j)]) {
        intra = std::max(intra, d(i, j));
      } else {
        inter = std::min(inter, d(i, j));
      }
    }
  }
  if (!(intra > 0.0)) return std::numeric_limits<double>::infinity();
  return inter / intra;
}

struct EigenPair {
  double lambda = 0.0;
  Vector v;
};

// Dominant eigenpair of a symmetric matrix through a full dense
// factorization, with the eigenvector scaled to unit max-norm and oriented
// positively (the convention used for Perron vectors).
inline EigenPair dominant_eigenpair(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Index last = h.rows() - 1;
  EigenPair out;
  out.lambda = es.eigenvalues()(last);
  out.v = es.eigenvectors().col(last);
  Index arg = 0;
  out.v.cwiseAbs().maxCoeff(&arg);
  out.v /= out.v(arg);  // max-norm 1 and the largest entry positive
  return out;
}

}  // namespace oracle
