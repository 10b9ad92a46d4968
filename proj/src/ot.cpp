#include "mel/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <sstream>
#include <vector>

#include "mel/errors.hpp"
#include "mel/runtime.hpp"

namespace mel {

namespace {

void validate_problem(const TransportProblem& problem, const Tolerances& tol) {
  Index d = problem.cost.dim();
  if (problem.source.size() != d || problem.target.size() != d)
    throw DimensionMismatch("transport: marginal size does not match cost");
  for (Index i = 0; i < d; ++i)
    if (problem.source(i) < 0.0 || problem.target(i) < 0.0)
      throw InvalidMatrix("transport: negative mass");
  double ss = problem.source.sum();
  double ts = problem.target.sum();
  if (std::abs(ss - 1.0) > tol.marginal_sum ||
      std::abs(ts - 1.0) > tol.marginal_sum) {
    std::ostringstream msg;
    msg << "transport: marginals must sum to one (got " << ss << ", " << ts
        << ")";
    throw InvalidMatrix(msg.str());
  }
  if (std::abs(ss - ts) > 1e-9) throw Infeasible("transport: mass mismatch");
}

struct SimplexCell {
  int i, j;
};

struct NorthwestBasis {
  std::vector<SimplexCell> cells;
  Matrix flow;
  bool degenerate = false;
};

NorthwestBasis northwest_corner(const Vector& s, const Vector& t) {
  const int a = static_cast<int>(s.size());
  const int b = static_cast<int>(t.size());
  NorthwestBasis out;
  out.flow = Matrix::Zero(a, b);
  Vector rs = s, rt = t;
  int i = 0, j = 0;
  while (true) {
    double q = std::min(rs(i), rt(j));
    out.flow(i, j) = q;
    out.cells.push_back({i, j});
    rs(i) -= q;
    rt(j) -= q;
    if (q == 0.0) out.degenerate = true;
    if (i == a - 1 && j == b - 1) break;
    bool row_done = rs(i) == 0.0;
    bool col_done = rt(j) == 0.0;
    if (row_done && col_done) out.degenerate = true;
    // Retire exactly one line per step so the basis stays a spanning tree
    // with a + b - 1 cells; ties leave a zero allocation behind. Once a side
    // runs out of lines the walk is forced along the other, regardless of
    // which line round-off retired first.
    if (i == a - 1)
      ++j;
    else if (j == b - 1)
      ++i;
    else if (row_done)
      ++i;
    else
      ++j;
  }
  return out;
}

/* Transportation simplex with Bland's pivot rule. Marginals must be strictly
 * positive and balanced. Returns an optimal basic feasible flow. */
Matrix transport_simplex(const Matrix& c, const Vector& s_in, const Vector& t_in) {
  const int a = static_cast<int>(s_in.size());
  const int b = static_cast<int>(t_in.size());
  if (a == 1) return t_in.transpose();
  if (b == 1) return s_in;

  Vector s = s_in, t = t_in;
  NorthwestBasis nb = northwest_corner(s, t);
  if (nb.degenerate) {
    // Lexicographic perturbation: generic marginals make the initial basis
    // and subsequent ratio tests unique. Total shift stays far below the
    // marginal tolerance and is never removed from the returned flow.
    double min_mass = std::min(s.minCoeff(), t.minCoeff());
    double denom = 0.5 * a * (a + 1) + 1.0;
    double delta = 1e-12 * min_mass / denom;
    for (int i = 0; i < a; ++i) s(i) += delta * (i + 1);
    t(b - 1) += delta * (0.5 * a * (a + 1));
    nb = northwest_corner(s, t);
  }

  Matrix x = std::move(nb.flow);
  std::vector<SimplexCell> basis = std::move(nb.cells);
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  const double pivot_tol = 1e-13 * scale;
  const int nodes = a + b;  // rows 0..a-1, columns a..a+b-1
  const long max_pivots = 50L * a * b + 1000;

  std::vector<std::vector<std::pair<int, int>>> adj(nodes);  // (node, cell idx)
  Vector u(a), v(b);
  std::vector<char> seen(nodes);
  std::vector<int> parent_node(nodes), parent_cell(nodes);

  for (long pivot = 0; pivot <= max_pivots; ++pivot) {
    for (auto& list : adj) list.clear();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      adj[basis[k].i].push_back({a + basis[k].j, static_cast<int>(k)});
      adj[a + basis[k].j].push_back({basis[k].i, static_cast<int>(k)});
    }

    // Dual potentials from the basis tree: c(i,j) = u(i) + v(j) on basic cells.
    std::fill(seen.begin(), seen.end(), 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    u(0) = 0.0;
    while (!bfs.empty()) {
      int node = bfs.front();
      bfs.pop();
      for (auto [next, cell] : adj[node]) {
        if (seen[next]) continue;
        seen[next] = 1;
        const SimplexCell& bc = basis[static_cast<std::size_t>(cell)];
        if (next >= a)
          v(next - a) = c(bc.i, bc.j) - u(bc.i);
        else
          u(next) = c(bc.i, bc.j) - v(bc.j);
        bfs.push(next);
      }
    }

    // Bland's rule: first cell in row-major order with negative reduced cost.
    int ei = -1, ej = -1;
    for (int i = 0; i < a && ei < 0; ++i)
      for (int j = 0; j < b; ++j) {
        if (c(i, j) - u(i) - v(j) < -pivot_tol) {
          ei = i;
          ej = j;
          break;
        }
      }
    if (ei < 0) return x;  // optimal

    // Unique tree path from the entering column node back to its row node.
    std::fill(seen.begin(), seen.end(), 0);
    std::queue<int> q;
    q.push(a + ej);
    seen[a + ej] = 1;
    parent_node[a + ej] = -1;
    while (!q.empty()) {
      int node = q.front();
      q.pop();
      if (node == ei) break;
      for (auto [next, cell] : adj[node]) {
        if (seen[next]) continue;
        seen[next] = 1;
        parent_node[next] = node;
        parent_cell[next] = cell;
        q.push(next);
      }
    }

    // Walk the path; cells alternate -theta, +theta starting with -theta.
    std::vector<int> minus_cells, plus_cells;
    {
      int node = ei;
      bool minus = true;
      while (node != a + ej) {
        int cell = parent_cell[node];
        (minus ? minus_cells : plus_cells).push_back(cell);
        minus = !minus;
        node = parent_node[node];
      }
    }

    double theta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    for (int cell : minus_cells) {
      const SimplexCell& bc = basis[static_cast<std::size_t>(cell)];
      double f = x(bc.i, bc.j);
      if (f < theta) {
        theta = f;
        leaving = cell;
      } else if (f == theta && leaving >= 0) {
        const SimplexCell& lc = basis[static_cast<std::size_t>(leaving)];
        if (bc.i < lc.i || (bc.i == lc.i && bc.j < lc.j)) leaving = cell;
      }
    }

    for (int cell : plus_cells) {
      const SimplexCell& bc = basis[static_cast<std::size_t>(cell)];
      x(bc.i, bc.j) += theta;
    }
    for (int cell : minus_cells) {
      const SimplexCell& bc = basis[static_cast<std::size_t>(cell)];
      x(bc.i, bc.j) -= theta;
    }
    const SimplexCell& lc = basis[static_cast<std::size_t>(leaving)];
    x(lc.i, lc.j) = 0.0;  // kill round-off residue on the leaving cell
    x(ei, ej) = theta;
    basis[static_cast<std::size_t>(leaving)] = {ei, ej};
  }
  throw NonConvergence("transport simplex: pivot limit reached");
}

}  // namespace

TransportResult exact_ot(const TransportProblem& problem, const Tolerances& tol) {
  validate_problem(problem, tol);
  const Index d = problem.cost.dim();
  const Matrix& c = problem.cost.entries();

  std::vector<Index> rows, cols;
  for (Index i = 0; i < d; ++i) {
    if (problem.source(i) > 0.0) rows.push_back(i);
    if (problem.target(i) > 0.0) cols.push_back(i);
  }
  const Index a = static_cast<Index>(rows.size());
  const Index b = static_cast<Index>(cols.size());

  Matrix sub_cost(a, b);
  Vector s(a), t(b);
  for (Index p = 0; p < a; ++p) {
    s(p) = problem.source(rows[static_cast<std::size_t>(p)]);
    for (Index q = 0; q < b; ++q)
      sub_cost(p, q) = c(rows[static_cast<std::size_t>(p)],
                         cols[static_cast<std::size_t>(q)]);
  }
  for (Index q = 0; q < b; ++q) t(q) = problem.target(cols[static_cast<std::size_t>(q)]);

  Matrix sub_plan = transport_simplex(sub_cost, s, t);

  TransportResult result;
  result.plan = Matrix::Zero(d, d);
  for (Index p = 0; p < a; ++p)
    for (Index q = 0; q < b; ++q)
      result.plan(rows[static_cast<std::size_t>(p)],
                  cols[static_cast<std::size_t>(q)]) = sub_plan(p, q);
  result.value = (c.cwiseProduct(result.plan)).sum();
  return result;
}

double kl_divergence(const Matrix& p, const Matrix& q, const Tolerances& tol) {
  if (p.rows() != q.rows() || p.cols() != q.cols())
    throw DimensionMismatch("kl_divergence: shape mismatch");
  if ((p.array() < 0.0).any() || (q.array() < 0.0).any())
    throw InvalidMatrix("kl_divergence: negative entries");
  if (std::abs(p.sum() - 1.0) > tol.marginal_sum ||
      std::abs(q.sum() - 1.0) > tol.marginal_sum)
    throw InvalidMatrix("kl_divergence: inputs must sum to one");
  double acc = 0.0;
  for (Index i = 0; i < p.rows(); ++i)
    for (Index j = 0; j < p.cols(); ++j) {
      double pij = p(i, j);
      if (pij == 0.0) continue;  // 0 log 0 = 0
      double qij = q(i, j);
      if (qij == 0.0) return std::numeric_limits<double>::infinity();
      acc += pij * std::log(pij / qij);
    }
  return acc;
}

namespace {

double logsumexp_head(const Vector& v, Index n) {
  double m = v.head(n).maxCoeff();
  if (!std::isfinite(m)) return m;  // all -inf
  return m + std::log((v.head(n).array() - m).exp().sum());
}

/* One scaling pass over the support-restricted problem. Potentials phi, psi
 * are dimensionless (dual variables divided by eta). Plan entries are
 * x_p y_q exp(phi_p + psi_q + kernel_pq), so the row constraint reads
 * exp(phi_p + logsum_p) = 1 with logsum_p over log_y + psi + kernel row p.
 * Returns the larger of the two l1 marginal violations at the CURRENT
 * potentials, then applies the damped update phi <- (phi - logsum)/2 (and
 * the mirrored psi update). Identical marginals keep phi == psi throughout,
 * which is the self-dual symmetric iteration. */
struct ScalingState {
  Vector phi, psi;          // support-restricted potentials
  Vector row_logsum, col_logsum;
  bool symmetric = false;   // source == target bitwise
};

class LogDomainSweeper {
 public:
  LogDomainSweeper(const Matrix& kernel, const Vector& log_x,
                   const Vector& log_y, const Vector& x, const Vector& y)
      : kernel_(kernel), log_x_(log_x), log_y_(log_y), x_(x), y_(y),
        buf_(std::max(kernel.rows(), kernel.cols())) {}

  double measure(ScalingState& s) {
    const Index ns = kernel_.rows(), nt = kernel_.cols();
    for (Index p = 0; p < ns; ++p) {
      buf_.head(nt) = log_y_ + s.psi + kernel_.row(p).transpose();
      s.row_logsum(p) = logsumexp_head(buf_, nt);
    }
    double row_viol = 0.0;
    for (Index p = 0; p < ns; ++p)
      row_viol += x_(p) * std::abs(std::exp(s.phi(p) + s.row_logsum(p)) - 1.0);
    if (s.symmetric) return row_viol;  // columns identical by symmetry
    for (Index q = 0; q < nt; ++q) {
      buf_.head(ns) = log_x_ + s.phi + kernel_.col(q);
      s.col_logsum(q) = logsumexp_head(buf_, ns);
    }
    double col_viol = 0.0;
    for (Index q = 0; q < nt; ++q)
      col_viol += y_(q) * std::abs(std::exp(s.psi(q) + s.col_logsum(q)) - 1.0);
    return std::max(row_viol, col_viol);
  }

  void update(ScalingState& s) const {
    s.phi = 0.5 * (s.phi - s.row_logsum);
    if (s.symmetric)
      s.psi = s.phi;
    else
      s.psi = 0.5 * (s.psi - s.col_logsum);
  }

 private:
  const Matrix& kernel_;
  const Vector& log_x_;
  const Vector& log_y_;
  const Vector& x_;
  const Vector& y_;
  Vector buf_;
};

/* Multiplicative variant: scalings u = exp(phi), v = exp(psi) and
 * K = exp(kernel). Same damped update, sqrt instead of halving. Kernel
 * entries are at least exp(-1/epsilon), so K itself cannot underflow; tiny
 * histogram entries can still lose accuracy here, which is why log domain
 * is the default. row_logsum/col_logsum hold the linear-scale sums. */
class MultiplicativeSweeper {
 public:
  MultiplicativeSweeper(const Matrix& kernel, const Vector& x, const Vector& y)
      : k_(kernel.array().exp()), x_(x), y_(y) {}

  double measure(ScalingState& s) {
    Vector u = s.phi.array().exp();
    Vector v = s.psi.array().exp();
    s.row_logsum = k_ * (y_.cwiseProduct(v));
    double row_viol = 0.0;
    for (Index p = 0; p < s.row_logsum.size(); ++p)
      row_viol += x_(p) * std::abs(u(p) * s.row_logsum(p) - 1.0);
    if (s.symmetric) return row_viol;
    s.col_logsum = k_.transpose() * (x_.cwiseProduct(u));
    double col_viol = 0.0;
    for (Index q = 0; q < s.col_logsum.size(); ++q)
      col_viol += y_(q) * std::abs(v(q) * s.col_logsum(q) - 1.0);
    return std::max(row_viol, col_viol);
  }

  void update(ScalingState& s) const {
    Vector u = s.phi.array().exp();
    u = (u.cwiseQuotient(s.row_logsum)).cwiseSqrt();
    s.phi = u.array().log();
    if (s.symmetric) {
      s.psi = s.phi;
    } else {
      Vector v = s.psi.array().exp();
      v = (v.cwiseQuotient(s.col_logsum)).cwiseSqrt();
      s.psi = v.array().log();
    }
  }

 private:
  Matrix k_;
  const Vector& x_;
  const Vector& y_;
};

}  // namespace

TransportResult entropic_ot(const TransportProblem& problem,
                            const SinkhornParams& params,
                            SinkhornPotentials* warm, const Tolerances& tol) {
  validate_problem(problem, tol);
  if (params.epsilon <= 0.0)
    throw ConfigError("entropic_ot: epsilon must be positive");
  if (params.max_sweeps < 1)
    throw ConfigError("entropic_ot: max_sweeps must be at least 1");

  const Index d = problem.cost.dim();
  const Matrix& c = problem.cost.entries();
  const double scale = max_norm(c);

  TransportResult result;
  if (scale == 0.0) {
    // Zero cost: regularization selects the product coupling directly.
    result.plan = problem.source * problem.target.transpose();
    result.value = 0.0;
    if (warm) {
      warm->phi = Vector::Zero(d);
      warm->psi = Vector::Zero(d);
      warm->valid = true;
    }
    return result;
  }

  const double eta = params.epsilon * scale;
  std::vector<Index> si, ti;
  for (Index i = 0; i < d; ++i) {
    if (problem.source(i) > 0.0) si.push_back(i);
    if (problem.target(i) > 0.0) ti.push_back(i);
  }
  const Index ns = static_cast<Index>(si.size());
  const Index nt = static_cast<Index>(ti.size());

  Vector x(ns), y(nt), log_x(ns), log_y(nt);
  for (Index p = 0; p < ns; ++p) {
    x(p) = problem.source(si[static_cast<std::size_t>(p)]);
    log_x(p) = std::log(x(p));
  }
  for (Index q = 0; q < nt; ++q) {
    y(q) = problem.target(ti[static_cast<std::size_t>(q)]);
    log_y(q) = std::log(y(q));
  }

  // Dimensionless kernel exponents, bounded below by -1/epsilon.
  Matrix kernel(ns, nt);
  for (Index p = 0; p < ns; ++p)
    for (Index q = 0; q < nt; ++q)
      kernel(p, q) = -c(si[static_cast<std::size_t>(p)], ti[static_cast<std::size_t>(q)]) / eta;

  ScalingState state;
  state.phi = Vector::Zero(ns);
  state.psi = Vector::Zero(nt);
  state.row_logsum = Vector::Zero(ns);
  state.col_logsum = Vector::Zero(nt);
  state.symmetric = (problem.source == problem.target);
  if (warm && warm->valid && warm->phi.size() == d && warm->psi.size() == d) {
    for (Index p = 0; p < ns; ++p) state.phi(p) = warm->phi(si[static_cast<std::size_t>(p)]);
    for (Index q = 0; q < nt; ++q) state.psi(q) = warm->psi(ti[static_cast<std::size_t>(q)]);
    if (state.symmetric) {
      // Keep the self-dual invariant phi == psi.
      state.phi = 0.5 * (state.phi + state.psi);
      state.psi = state.phi;
    }
  }

  std::optional<LogDomainSweeper> log_sweeper;
  std::optional<MultiplicativeSweeper> mult_sweeper;
  if (params.log_domain)
    log_sweeper.emplace(kernel, log_x, log_y, x, y);
  else
    mult_sweeper.emplace(kernel, x, y);

  bool converged = false;
  double violation = std::numeric_limits<double>::infinity();
  for (Index sweep = 0; sweep < params.max_sweeps; ++sweep) {
    violation = params.log_domain ? log_sweeper->measure(state)
                                  : mult_sweeper->measure(state);
    if (violation <= params.marginal_tol) {
      converged = true;
      break;
    }
    if (params.log_domain)
      log_sweeper->update(state);
    else
      mult_sweeper->update(state);
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "entropic_ot: no convergence after " << params.max_sweeps
        << " sweeps (marginal violation " << violation << ")";
    throw NonConvergence(msg.str());
  }

  result.plan = Matrix::Zero(d, d);
  for (Index p = 0; p < ns; ++p)
    for (Index q = 0; q < nt; ++q)
      result.plan(si[static_cast<std::size_t>(p)], ti[static_cast<std::size_t>(q)]) =
          std::exp(log_x(p) + log_y(q) + state.phi(p) + state.psi(q) +
                   kernel(p, q));

  // <c,P> + eta * KL(P, x y^T), with the KL term expanded in the log domain
  // so a marginal_tol looser than the mass tolerance cannot reject the plan.
  double linear = (c.cwiseProduct(result.plan)).sum();
  double kl = 0.0;
  for (Index p = 0; p < ns; ++p)
    for (Index q = 0; q < nt; ++q) {
      double pij = result.plan(si[static_cast<std::size_t>(p)], ti[static_cast<std::size_t>(q)]);
      kl += pij * (state.phi(p) + state.psi(q) + kernel(p, q));
    }
  result.value = linear + eta * kl;

  if (warm) {
    warm->phi = Vector::Zero(d);
    warm->psi = Vector::Zero(d);
    for (Index p = 0; p < ns; ++p) warm->phi(si[static_cast<std::size_t>(p)]) = state.phi(p);
    for (Index q = 0; q < nt; ++q) warm->psi(ti[static_cast<std::size_t>(q)]) = state.psi(q);
    warm->valid = true;
  }
  return result;
}

namespace {

double clamp_divergence(double s, const Tolerances& tol) {
  if (s >= 0.0) return s;
  if (s >= -tol.divergence_clamp) return 0.0;
  std::ostringstream msg;
  msg << "sinkhorn divergence is negative beyond round-off: " << s;
  throw NegativeDivergence(msg.str());
}

}  // namespace

double sinkhorn_divergence(const CostMatrix& cost, const Vector& x,
                           const Vector& y, const SinkhornParams& params,
                           const Tolerances& tol) {
  double wxy = entropic_ot({cost, x, y}, params, nullptr, tol).value;
  double wxx = entropic_ot({cost, x, x}, params, nullptr, tol).value;
  double wyy = entropic_ot({cost, y, y}, params, nullptr, tol).value;
  return clamp_divergence(wxy - 0.5 * (wxx + wyy), tol);
}

double sinkhorn_lipschitz_constant(const Dataset& data, double epsilon,
                                   Side side) {
  if (epsilon <= 0.0)
    throw ConfigError("sinkhorn_lipschitz_constant: epsilon must be positive");
  const Index hist_len = data.vector_dim(side);
  double worst = 0.0;
  for (Index i = 0; i < data.count(side); ++i) {
    Vector h = data.histogram(side, i);
    double self_info = 0.0;
    for (Index k = 0; k < h.size(); ++k)
      if (h(k) > 0.0) self_info -= std::log(h(k));
    worst = std::max(worst, self_info);
  }
  double c = 2.0 * static_cast<double>(hist_len) * worst;
  return 2.0 * (1.0 + epsilon * c);
}

OtGroundMap::OtGroundMap(const Dataset& data, Side side, OtVariant variant,
                         ReferenceMatrix reference, SinkhornParams params,
                         bool warm_start, const Tolerances& tol)
    : data_(data),
      side_(side),
      variant_(variant),
      ref_(std::move(reference)),
      params_(params),
      warm_start_(warm_start),
      tol_(tol) {
  if (ref_.dim() != data_.count(side_))
    throw DimensionMismatch("OtGroundMap: reference dimension mismatch");
  const Index d = data_.count(side_);
  hists_.reserve(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) hists_.push_back(data_.histogram(side_, i));
  if (variant_ == OtVariant::Sinkhorn && warm_start_)
    slots_.resize(static_cast<std::size_t>(d * d));
}

MatrixClass OtGroundMap::output_class() const {
  if (variant_ == OtVariant::Exact &&
      ref_.cost().class_tag() == MatrixClass::Metric)
    return MatrixClass::Metric;
  return MatrixClass::SemiMetric;
}

std::optional<double> OtGroundMap::lipschitz_constant() const {
  if (variant_ == OtVariant::Exact) return 1.0;
  return sinkhorn_lipschitz_constant(data_, params_.epsilon, side_);
}

std::optional<double> OtGroundMap::norm_lower_bound() const {
  return max_norm(ref_.entries());
}

void OtGroundMap::reset_warm_start() const {
  for (auto& slot : slots_) slot = SinkhornPotentials{};
}

SinkhornPotentials* OtGroundMap::slot(Index a, Index b) const {
  if (!warm_start_ || variant_ != OtVariant::Sinkhorn) return nullptr;
  return &slots_[static_cast<std::size_t>(a * output_dim() + b)];
}

double OtGroundMap::self_transport(const CostMatrix& cost, Index i) const {
  const Vector& x = hists_[static_cast<std::size_t>(i)];
  return entropic_ot({cost, x, x}, params_, slot(i, i), tol_).value;
}

double OtGroundMap::pair_value(const CostMatrix& cost, Index a, Index b,
                               double waa, double wbb) const {
  const Vector& x = hists_[static_cast<std::size_t>(a)];
  const Vector& y = hists_[static_cast<std::size_t>(b)];
  if (variant_ == OtVariant::Exact) return exact_ot({cost, x, y}, tol_).value;
  double wab = entropic_ot({cost, x, y}, params_, slot(a, b), tol_).value;
  return clamp_divergence(wab - 0.5 * (waa + wbb), tol_);
}

double OtGroundMap::entry(const Matrix& cost, Index i, Index j) const {
  if (i == j) return ref_.entries()(i, i);
  Index a = std::min(i, j), b = std::max(i, j);
  CostMatrix c(cost, MatrixClass::Unchecked, tol_);
  double waa = 0.0, wbb = 0.0;
  if (variant_ == OtVariant::Sinkhorn) {
    waa = self_transport(c, a);
    wbb = self_transport(c, b);
  }
  return pair_value(c, a, b, waa, wbb) + ref_.entries()(a, b);
}

Matrix OtGroundMap::apply(const Matrix& cost) const {
  const Index d = output_dim();
  CostMatrix c(cost, MatrixClass::Unchecked, tol_);
  Matrix out(d, d);
  for (Index i = 0; i < d; ++i) out(i, i) = ref_.entries()(i, i);

  // Self-transport terms first. Each diagonal warm slot is touched by exactly
  // one task here, and the off-diagonal pass only reads the values, so pairs
  // sharing an endpoint never race on a slot.
  Vector diag_w = Vector::Zero(d);
  if (variant_ == OtVariant::Sinkhorn)
    parallel_for(d, [&](Index i) { diag_w(i) = self_transport(c, i); });

  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(d * (d - 1) / 2));
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) pairs.push_back({i, j});
  parallel_for(static_cast<Index>(pairs.size()), [&](Index p) {
    auto [i, j] = pairs[static_cast<std::size_t>(p)];
    double value = pair_value(c, i, j, diag_w(i), diag_w(j)) +
                   ref_.entries()(i, j);
    out(i, j) = value;
    out(j, i) = value;
  });
  return out;
}

CostMatrix ot_map_apply(const OtGroundMap& map, const CostMatrix& cost,
                        const Tolerances& tol) {
  if (cost.dim() != map.input_dim())
    throw DimensionMismatch("ot_map_apply: cost dimension mismatch");
  ValidationReport report = validate_class(cost.entries(), map.input_class(), tol);
  if (!report.ok)
    throw ClassViolation("ot_map_apply: input " + report.summary());
  return CostMatrix(map.apply(cost.entries()), map.output_class(), tol);
}

}  // namespace mel
