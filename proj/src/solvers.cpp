#include "mel/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "mel/errors.hpp"
#include "mel/eval.hpp"
#include "mel/rng.hpp"
#include "mel/runtime.hpp"

namespace mel {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::NormalizedIteration: return "normalized";
    case Algorithm::RelaxedIteration: return "relaxed";
    case Algorithm::RandomFunctionIteration: return "rfi";
    case Algorithm::AdaptiveGamma: return "adaptive_gamma";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "normalized") return Algorithm::NormalizedIteration;
  if (name == "relaxed") return Algorithm::RelaxedIteration;
  if (name == "rfi") return Algorithm::RandomFunctionIteration;
  if (name == "adaptive_gamma") return Algorithm::AdaptiveGamma;
  throw ConfigError("unknown algorithm: " + name);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::MaxIters: return "max_iters";
    case Verdict::EarlyStopped: return "early_stopped";
    case Verdict::Diverged: return "diverged";
  }
  return "?";
}

ResidualDiagnostics residual_diagnostics(const Matrix& prev, const Matrix& next) {
  if (prev.rows() != next.rows() || prev.cols() != next.cols()) {
    throw DimensionMismatch("residual diagnostics need equal shapes");
  }
  ResidualDiagnostics out;
  out.linf = max_norm(prev - next);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (Index i = 0; i < prev.rows(); ++i) {
    for (Index j = 0; j < prev.cols(); ++j) {
      if (i == j) continue;
      if (!(prev(i, j) > 0.0) || !(next(i, j) > 0.0)) {
        out.hilbert = std::numeric_limits<double>::infinity();
        return out;
      }
      const double ratio = std::log(prev(i, j) / next(i, j));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      any = true;
    }
  }
  out.hilbert = any ? hi - lo : 0.0;
  return out;
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Shared scalar update forms: the stochastic solver must reproduce the dense
// solvers' arithmetic bit for bit when it touches every coordinate.
inline double b_update(double fval, double gamma_f) { return gamma_f * fval; }
inline double a_update(double a_old, double gval, double alpha, double gamma_g) {
  return (1.0 - alpha) * a_old + alpha * (gamma_g * gval);
}

void check_config(const SolverConfig& cfg) {
  if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0) {
    throw ConfigError("alpha must lie in (0, 1]");
  }
  if (!(cfg.gamma_f > 0.0) || !std::isfinite(cfg.gamma_f) ||
      !(cfg.gamma_g > 0.0) || !std::isfinite(cfg.gamma_g)) {
    throw ConfigError("gamma_f and gamma_g must be positive and finite");
  }
  if (!(cfg.tol_residual > 0.0)) throw ConfigError("tol_residual must be positive");
  if (cfg.max_iters < 1) throw ConfigError("max_iters must be at least 1");
  if (!(cfg.batch_fraction > 0.0) || cfg.batch_fraction > 1.0) {
    throw ConfigError("batch_fraction must lie in (0, 1]");
  }
  if (cfg.early_stop && cfg.early_stop->patience < 1) {
    throw ConfigError("early-stop patience must be at least 1");
  }
}

void check_shapes(const GroundMetricMap& f, const GroundMetricMap& g,
                  const Matrix& a0) {
  if (f.input_dim() != g.output_dim() || f.output_dim() != g.input_dim()) {
    throw DimensionMismatch("maps do not form a coupled pair");
  }
  if (a0.rows() != a0.cols() || a0.rows() != f.input_dim()) {
    throw DimensionMismatch("initial matrix does not match the maps");
  }
}

void check_early_stop(const SolverConfig& cfg, Index n) {
  if (!cfg.early_stop) return;
  if (static_cast<Index>(cfg.early_stop->labels.size()) != n) {
    throw ConfigError("early-stop labels must cover the sample side");
  }
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct EarlyStopTracker {
  double best = -std::numeric_limits<double>::infinity();
  Index best_iteration = 0;
  Matrix best_a, best_b;

  /// Returns true when patience ran out without a new best.
  bool observe(Index it, double value, const Matrix& a, const Matrix& b,
               Index patience) {
    if (value > best) {
      best = value;
      best_iteration = it;
      best_a = a;
      best_b = b;
      return false;
    }
    return it - best_iteration >= patience;
  }
};

struct DivergenceDetector {
  double min_residual = std::numeric_limits<double>::infinity();
  int streak = 0;

  /// True after the residual sits 10x above its running minimum for 20 steps.
  bool observe(double residual) {
    if (residual < min_residual) {
      min_residual = residual;
      streak = 0;
      return false;
    }
    streak = residual > 10.0 * min_residual ? streak + 1 : 0;
    return streak >= 20;
  }
};

void validate_iterates(const GroundMetricMap& f, const GroundMetricMap& g,
                       const Matrix& a, const Matrix& b, Index it,
                       const SolverConfig& cfg) {
  if (cfg.validate_every <= 0 || it % cfg.validate_every != 0) return;
  ValidationReport ra = validate_class(a, g.output_class(), cfg.tolerances);
  if (!ra.ok) {
    std::ostringstream os;
    os << "iterate A left its class at iteration " << it << ": " << ra.summary();
    throw ClassViolation(os.str());
  }
  ValidationReport rb = validate_class(b, f.output_class(), cfg.tolerances);
  if (!rb.ok) {
    std::ostringstream os;
    os << "iterate B left its class at iteration " << it << ": " << rb.summary();
    throw ClassViolation(os.str());
  }
}

std::optional<double> maybe_asw(const SolverConfig& cfg, const Matrix& b) {
  if (!cfg.early_stop) return std::nullopt;
  return asw(LabeledDistances{b, cfg.early_stop->labels});
}

/// max |x(i,j) - scale * y(i,j)|: relation residual without forming temporaries.
double relation_gap(const Matrix& x, const Matrix& y, double scale) {
  double worst = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      worst = std::max(worst, std::fabs(x(i, j) - scale * y(i, j)));
    }
  }
  return worst;
}

}  // namespace

ContractionReport contraction_report(const GroundMetricMap& f,
                                     const GroundMetricMap& g,
                                     const SolverConfig& cfg) {
  ContractionReport rep;
  rep.alpha = cfg.alpha;
  rep.gamma_f = cfg.gamma_f;
  rep.gamma_g = cfg.gamma_g;
  rep.l_f = f.lipschitz_constant();
  rep.l_g = g.lipschitz_constant();
  if (rep.l_f && rep.l_g) {
    const double product = cfg.gamma_f * cfg.gamma_g * (*rep.l_f) * (*rep.l_g);
    rep.l_t = 1.0 - cfg.alpha * (1.0 - product);
    rep.relaxed_condition = product < 1.0;
  }
  rep.c_f = f.norm_lower_bound();
  rep.c_g = g.norm_lower_bound();
  if (rep.l_f && rep.l_g && rep.c_f && rep.c_g && *rep.c_f > 0.0 &&
      *rep.c_g > 0.0) {
    rep.l_t_normalized = (2.0 * *rep.l_f / *rep.c_f) * (2.0 * *rep.l_g / *rep.c_g);
    rep.normalized_condition = *rep.l_t_normalized < 1.0;
    rep.normalized_condition_quarter =
        *rep.l_t_normalized < (*rep.c_f) * (*rep.c_g) / 4.0;
  }
  return rep;
}

Matrix default_initial_matrix(const GroundMetricMap& f, const GroundMetricMap& g) {
  if (g.reference() != nullptr) return *g.reference();
  const Index m = f.input_dim();
  return Matrix::Ones(m, m) - Matrix::Identity(m, m);
}

RunReport solve_normalized(const GroundMetricMap& f, const GroundMetricMap& g,
                           const SolverConfig& cfg, const Matrix& a0) {
  check_config(cfg);
  check_shapes(f, g, a0);
  check_early_stop(cfg, f.output_dim());
  Stopwatch watch;

  RunReport rep;
  rep.config = cfg;
  rep.config.algorithm = Algorithm::NormalizedIteration;
  rep.contraction = contraction_report(f, g, cfg);

  Matrix a = a0;
  Matrix b;
  std::optional<Matrix> b_prev;
  EarlyStopTracker stop;

  for (Index it = 1; it <= cfg.max_iters; ++it) {
    const Matrix fa = f.apply(a);
    const double norm_f = max_norm(fa);
    if (!(norm_f > 0.0)) {
      throw ZeroNorm("max_norm(F(A)) vanished; the reference matrix is zero");
    }
    b = fa / norm_f;
    const Matrix gb = g.apply(b);
    const double norm_g = max_norm(gb);
    if (!(norm_g > 0.0)) {
      throw ZeroNorm("max_norm(G(B)) vanished; the reference matrix is zero");
    }
    Matrix a_next = gb / norm_g;

    TraceRow row;
    row.iteration = it;
    const ResidualDiagnostics diag = residual_diagnostics(a, a_next);
    row.residual_a = diag.linf;
    row.hilbert_a = diag.hilbert;
    row.residual_b = b_prev ? max_norm(b - *b_prev) : kNan;
    // The normalized iteration has no step sizes; the columns carry the
    // normalization factors applied this step.
    row.gamma_f = 1.0 / norm_f;
    row.gamma_g = 1.0 / norm_g;
    row.asw = maybe_asw(cfg, b);
    rep.trace.push_back(row);
    rep.iterations = it;

    validate_iterates(f, g, a_next, b, it, cfg);

    if (row.residual_a <= cfg.tol_residual) {
      // Re-verify both fixed-point relations before declaring victory.
      const Matrix fa2 = f.apply(a_next);
      const double nf2 = max_norm(fa2);
      const Matrix gb2 = g.apply(b);
      const double ng2 = max_norm(gb2);
      if (nf2 > 0.0 && ng2 > 0.0 &&
          relation_gap(b, fa2, 1.0 / nf2) <= 10.0 * cfg.tol_residual &&
          relation_gap(a_next, gb2, 1.0 / ng2) <= 10.0 * cfg.tol_residual) {
        rep.verdict = Verdict::Converged;
        a = std::move(a_next);
        break;
      }
    }
    if (row.asw && stop.observe(it, *row.asw, a_next, b,
                                cfg.early_stop->patience)) {
      rep.verdict = Verdict::EarlyStopped;
      a = std::move(a_next);
      break;
    }
    b_prev = b;
    a = std::move(a_next);
  }

  rep.a = std::move(a);
  rep.b = std::move(b);
  if (stop.best_iteration > 0) {
    rep.best_a = stop.best_a;
    rep.best_b = stop.best_b;
    rep.best_asw = stop.best;
    rep.best_iteration = stop.best_iteration;
  }
  rep.wall_seconds = watch.seconds();
  return rep;
}

RunReport solve_relaxed(const GroundMetricMap& f, const GroundMetricMap& g,
                        const SolverConfig& cfg, const Matrix& a0) {
  check_config(cfg);
  check_shapes(f, g, a0);
  check_early_stop(cfg, f.output_dim());
  Stopwatch watch;

  RunReport rep;
  rep.config = cfg;
  rep.config.algorithm = Algorithm::RelaxedIteration;
  rep.contraction = contraction_report(f, g, cfg);

  const Index m = f.input_dim();
  const Index n = f.output_dim();
  Matrix a = a0;
  Matrix b(n, n);
  std::optional<Matrix> b_prev;
  EarlyStopTracker stop;
  DivergenceDetector diverge;

  for (Index it = 1; it <= cfg.max_iters; ++it) {
    const Matrix fa = f.apply(a);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) b(i, j) = b_update(fa(i, j), cfg.gamma_f);
    }
    const Matrix gb = g.apply(b);
    Matrix a_next(m, m);
    for (Index k = 0; k < m; ++k) {
      for (Index l = 0; l < m; ++l) {
        a_next(k, l) = a_update(a(k, l), gb(k, l), cfg.alpha, cfg.gamma_g);
      }
    }

    TraceRow row;
    row.iteration = it;
    const ResidualDiagnostics diag = residual_diagnostics(a, a_next);
    row.residual_a = diag.linf;
    row.hilbert_a = diag.hilbert;
    row.residual_b = b_prev ? max_norm(b - *b_prev) : kNan;
    row.gamma_f = cfg.gamma_f;
    row.gamma_g = cfg.gamma_g;
    row.asw = maybe_asw(cfg, b);
    rep.trace.push_back(row);
    rep.iterations = it;

    validate_iterates(f, g, a_next, b, it, cfg);

    if (row.residual_a <= cfg.tol_residual) {
      if (relation_gap(b, f.apply(a_next), cfg.gamma_f) <= 10.0 * cfg.tol_residual &&
          relation_gap(a_next, g.apply(b), cfg.gamma_g) <= 10.0 * cfg.tol_residual) {
        rep.verdict = Verdict::Converged;
        a = std::move(a_next);
        break;
      }
    }
    if (row.asw && stop.observe(it, *row.asw, a_next, b,
                                cfg.early_stop->patience)) {
      rep.verdict = Verdict::EarlyStopped;
      a = std::move(a_next);
      break;
    }
    if (diverge.observe(row.residual_a)) {
      rep.verdict = Verdict::Diverged;
      std::ostringstream os;
      os << "residual stayed 10x above its minimum " << diverge.min_residual
         << " for 20 iterations";
      rep.message = os.str();
      a = std::move(a_next);
      break;
    }
    b_prev = b;
    a = std::move(a_next);
  }

  rep.a = std::move(a);
  rep.b = std::move(b);
  if (stop.best_iteration > 0) {
    rep.best_a = stop.best_a;
    rep.best_b = stop.best_b;
    rep.best_asw = stop.best;
    rep.best_iteration = stop.best_iteration;
  }
  rep.wall_seconds = watch.seconds();
  return rep;
}

namespace {

/// Coordinate pairs of the stochastic sweep: unordered pairs (i <= j) in
/// symmetric mode, all ordered pairs otherwise.
std::vector<std::pair<Index, Index>> coordinate_space(Index d, bool symmetric) {
  std::vector<std::pair<Index, Index>> pairs;
  if (symmetric) {
    pairs.reserve(static_cast<std::size_t>(d * (d + 1) / 2));
    for (Index i = 0; i < d; ++i) {
      for (Index j = i; j < d; ++j) pairs.emplace_back(i, j);
    }
  } else {
    pairs.reserve(static_cast<std::size_t>(d * d));
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

/// First `take` entries of a seeded partial Fisher-Yates shuffle of
/// {0, ..., total-1}, returned sorted so the sweep order is index order.
std::vector<Index> sample_without_replacement(Index total, Index take,
                                              CounterRng rng) {
  std::vector<Index> arr(static_cast<std::size_t>(total));
  std::iota(arr.begin(), arr.end(), Index{0});
  for (Index t = 0; t < take; ++t) {
    const Index offset =
        static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(total - t)));
    std::swap(arr[static_cast<std::size_t>(t)],
              arr[static_cast<std::size_t>(t + offset)]);
  }
  arr.resize(static_cast<std::size_t>(take));
  std::sort(arr.begin(), arr.end());
  return arr;
}

Index batch_size(Index total, double fraction) {
  const Index k = static_cast<Index>(std::llround(fraction * static_cast<double>(total)));
  return std::clamp<Index>(k, 1, total);
}

}  // namespace

RunReport solve_rfi(const GroundMetricMap& f, const GroundMetricMap& g,
                    const SolverConfig& cfg, const Matrix& a0, const Matrix& b0,
                    const FixedPointReference* reference) {
  check_config(cfg);
  check_shapes(f, g, a0);
  check_early_stop(cfg, f.output_dim());
  const Index n = f.output_dim();
  const Index m = f.input_dim();
  if (b0.rows() != n || b0.cols() != n) {
    throw DimensionMismatch("initial B does not match the sample side");
  }
  if (reference &&
      (reference->a.rows() != m || reference->a.cols() != m ||
       reference->b.rows() != n || reference->b.cols() != n)) {
    throw DimensionMismatch("fixed-point reference has the wrong shape");
  }
  Stopwatch watch;

  RunReport rep;
  rep.config = cfg;
  rep.config.algorithm = Algorithm::RandomFunctionIteration;
  rep.contraction = contraction_report(f, g, cfg);

  const auto pairs_b = coordinate_space(n, cfg.symmetric_pairs);
  const auto pairs_a = coordinate_space(m, cfg.symmetric_pairs);
  const Index kb = batch_size(static_cast<Index>(pairs_b.size()), cfg.batch_fraction);
  const Index ka = batch_size(static_cast<Index>(pairs_a.size()), cfg.batch_fraction);

  Matrix a = a0;
  Matrix b = b0;
  EarlyStopTracker stop;

  for (Index it = 1; it <= cfg.max_iters; ++it) {
    const Matrix a_prev = a;
    const Matrix b_prev = b;
    const std::uint64_t step = static_cast<std::uint64_t>(it);

    const auto picked_b = sample_without_replacement(
        static_cast<Index>(pairs_b.size()), kb, CounterRng(cfg.seed, 2 * step));
    for (Index idx : picked_b) {
      const auto [i, j] = pairs_b[static_cast<std::size_t>(idx)];
      const double value = b_update(f.entry(a, i, j), cfg.gamma_f);
      b(i, j) = value;
      if (cfg.symmetric_pairs && i != j) b(j, i) = value;
    }

    const Matrix& b_for_a = cfg.jacobi ? b_prev : b;
    const auto picked_a = sample_without_replacement(
        static_cast<Index>(pairs_a.size()), ka, CounterRng(cfg.seed, 2 * step + 1));
    for (Index idx : picked_a) {
      const auto [k, l] = pairs_a[static_cast<std::size_t>(idx)];
      const double value =
          a_update(a(k, l), g.entry(b_for_a, k, l), cfg.alpha, cfg.gamma_g);
      a(k, l) = value;
      if (cfg.symmetric_pairs && k != l) a(l, k) = value;
    }

    TraceRow row;
    row.iteration = it;
    const ResidualDiagnostics diag = residual_diagnostics(a_prev, a);
    row.residual_a = diag.linf;
    row.hilbert_a = diag.hilbert;
    row.residual_b = max_norm(b - b_prev);
    row.gamma_f = cfg.gamma_f;
    row.gamma_g = cfg.gamma_g;
    row.asw = maybe_asw(cfg, b);
    if (reference) {
      row.ref_sq_dist = (a - reference->a).squaredNorm() +
                        (b - reference->b).squaredNorm();
    }
    rep.trace.push_back(row);
    rep.iterations = it;

    if (cfg.symmetric_pairs) validate_iterates(f, g, a, b, it, cfg);

    if (row.residual_a <= cfg.tol_residual) {
      if (!cfg.symmetric_pairs) {
        // Single-sided iterates are transiently asymmetric; the class-based
        // verification does not apply. Converge on the residual alone.
        rep.verdict = Verdict::Converged;
        rep.message = "single-sided mode: fixed-point relations not re-verified";
        break;
      }
      if (relation_gap(b, f.apply(a), cfg.gamma_f) <= 10.0 * cfg.tol_residual &&
          relation_gap(a, g.apply(b), cfg.gamma_g) <= 10.0 * cfg.tol_residual) {
        rep.verdict = Verdict::Converged;
        break;
      }
    }
    if (row.asw && stop.observe(it, *row.asw, a, b, cfg.early_stop->patience)) {
      rep.verdict = Verdict::EarlyStopped;
      break;
    }
  }

  rep.a = std::move(a);
  rep.b = std::move(b);
  if (stop.best_iteration > 0) {
    rep.best_a = stop.best_a;
    rep.best_b = stop.best_b;
    rep.best_asw = stop.best;
    rep.best_iteration = stop.best_iteration;
  }
  rep.wall_seconds = watch.seconds();
  return rep;
}

RunReport solve_adaptive_gamma(const GroundMetricMap& f, const GroundMetricMap& g,
                               const SolverConfig& cfg, const Matrix& a0) {
  check_config(cfg);
  check_shapes(f, g, a0);
  check_early_stop(cfg, f.output_dim());
  Stopwatch watch;

  RunReport rep;
  rep.config = cfg;
  rep.config.algorithm = Algorithm::AdaptiveGamma;
  rep.contraction = contraction_report(f, g, cfg);

  const Index m = f.input_dim();
  const Index n = f.output_dim();
  double gamma_f = cfg.gamma_f;
  double gamma_g = cfg.gamma_g;
  Matrix a = a0;
  Matrix fa = f.apply(a);
  Matrix b(n, n);
  std::optional<Matrix> b_prev;
  EarlyStopTracker stop;
  DivergenceDetector diverge;

  for (Index it = 1; it <= cfg.max_iters; ++it) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) b(i, j) = b_update(fa(i, j), gamma_f);
    }
    const Matrix gb = g.apply(b);
    Matrix a_next(m, m);
    for (Index k = 0; k < m; ++k) {
      for (Index l = 0; l < m; ++l) {
        a_next(k, l) = a_update(a(k, l), gb(k, l), cfg.alpha, gamma_g);
      }
    }
    const Matrix fa_next = f.apply(a_next);
    // Rescale denominators: how far the current pair is from being a fixed
    // point of the unscaled maps.
    const double den_f = max_norm(b - fa_next);
    const double den_g = max_norm(a_next - gb);

    TraceRow row;
    row.iteration = it;
    const ResidualDiagnostics diag = residual_diagnostics(a, a_next);
    row.residual_a = diag.linf;
    row.hilbert_a = diag.hilbert;
    row.residual_b = b_prev ? max_norm(b - *b_prev) : kNan;
    row.gamma_f = gamma_f;
    row.gamma_g = gamma_g;
    row.asw = maybe_asw(cfg, b);
    rep.trace.push_back(row);
    rep.iterations = it;

    validate_iterates(f, g, a_next, b, it, cfg);

    if (row.residual_a <= cfg.tol_residual) {
      if (relation_gap(b, fa_next, gamma_f) <= 10.0 * cfg.tol_residual &&
          relation_gap(a_next, gb, gamma_g) <= 10.0 * cfg.tol_residual) {
        rep.verdict = Verdict::Converged;
        a = std::move(a_next);
        break;
      }
    }
    if (den_f < 1e-15 || den_g < 1e-15) {
      // A vanishing rescale denominator means the pair is stationary.
      rep.verdict = Verdict::Converged;
      rep.message = "step-size rescale denominator vanished at a fixed point";
      a = std::move(a_next);
      break;
    }
    if (row.asw && stop.observe(it, *row.asw, a_next, b,
                                cfg.early_stop->patience)) {
      rep.verdict = Verdict::EarlyStopped;
      a = std::move(a_next);
      break;
    }
    if (diverge.observe(row.residual_a)) {
      rep.verdict = Verdict::Diverged;
      std::ostringstream os;
      os << "residual stayed 10x above its minimum " << diverge.min_residual
         << " for 20 iterations";
      rep.message = os.str();
      a = std::move(a_next);
      break;
    }
    gamma_f /= den_f;
    gamma_g /= den_g;
    b_prev = b;
    a = std::move(a_next);
    fa = fa_next;
  }

  rep.a = std::move(a);
  rep.b = std::move(b);
  if (stop.best_iteration > 0) {
    rep.best_a = stop.best_a;
    rep.best_b = stop.best_b;
    rep.best_asw = stop.best;
    rep.best_iteration = stop.best_iteration;
  }
  rep.wall_seconds = watch.seconds();
  return rep;
}

RunReport solve(const GroundMetricMap& f, const GroundMetricMap& g,
                const SolverConfig& cfg, const Matrix& a0, const Matrix* b0,
                const FixedPointReference* reference) {
  switch (cfg.algorithm) {
    case Algorithm::NormalizedIteration:
      return solve_normalized(f, g, cfg, a0);
    case Algorithm::RelaxedIteration:
      return solve_relaxed(f, g, cfg, a0);
    case Algorithm::RandomFunctionIteration: {
      Matrix start_b;
      if (b0 != nullptr) {
        start_b = *b0;
      } else {
        // Default B0 mirrors the first dense update so the stochastic run
        // starts from a point the relaxed iteration would also visit.
        const Matrix fa = f.apply(a0);
        start_b.resize(fa.rows(), fa.cols());
        for (Index i = 0; i < fa.rows(); ++i) {
          for (Index j = 0; j < fa.cols(); ++j) {
            start_b(i, j) = b_update(fa(i, j), cfg.gamma_f);
          }
        }
      }
      return solve_rfi(f, g, cfg, a0, start_b, reference);
    }
    case Algorithm::AdaptiveGamma:
      return solve_adaptive_gamma(f, g, cfg, a0);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace mel
