#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mel/errors.hpp"
#include "mel/solvers.hpp"

using namespace mel;

namespace {

/* Entrywise affine test map X -> theta * X + K between square matrix spaces.
 * Linear with exact Lipschitz constant theta, and entry() shares the scalar
 * expression with apply() so stochastic sweeps reproduce it bitwise. */
class AffineMap : public GroundMetricMap {
 public:
  AffineMap(double theta, Matrix k, Index in_dim)
      : theta_(theta), k_(std::move(k)), in_(in_dim) {}

  Index input_dim() const override { return in_; }
  Index output_dim() const override { return k_.rows(); }
  Matrix apply(const Matrix& cost) const override {
    Matrix out(k_.rows(), k_.cols());
    for (Index i = 0; i < out.rows(); ++i) {
      for (Index j = 0; j < out.cols(); ++j) {
        out(i, j) = entry(cost, i, j);
      }
    }
    return out;
  }
  double entry(const Matrix& cost, Index i, Index j) const override {
    // The input is square but may differ in size from the output; fold the
    // input entry at the wrapped position so every output coordinate still
    // depends on the input.
    const Index p = i % cost.rows();
    const Index q = j % cost.cols();
    return theta_ * cost(p, q) + k_(i, j);
  }
  MatrixClass input_class() const override { return MatrixClass::Unchecked; }
  MatrixClass output_class() const override { return MatrixClass::Unchecked; }
  std::optional<double> lipschitz_constant() const override { return theta_; }
  std::optional<double> norm_lower_bound() const override {
    return theta_ > 0.0 ? std::nullopt
                        : std::optional<double>(max_norm(k_));
  }

 private:
  double theta_;
  Matrix k_;
  Index in_;
};

}  // namespace

TEST_CASE("config validation") {
  std::mt19937_64 rng(41);
  const Matrix k = testutil::random_semimetric(rng, 3, 0.5, 1.0);
  AffineMap f(0.5, k, 3), g(0.5, k, 3);
  const Matrix a0 = testutil::random_semimetric(rng, 3, 0.5, 1.0);
  SolverConfig cfg;

  SUBCASE("alpha") {
    cfg.alpha = 0.0;
    CHECK_THROWS_AS(solve_relaxed(f, g, cfg, a0), ConfigError);
    cfg.alpha = 1.5;
    CHECK_THROWS_AS(solve_relaxed(f, g, cfg, a0), ConfigError);
  }
  SUBCASE("gammas") {
    cfg.gamma_f = -1.0;
    CHECK_THROWS_AS(solve_relaxed(f, g, cfg, a0), ConfigError);
  }
  SUBCASE("batch fraction") {
    cfg.batch_fraction = 0.0;
    CHECK_THROWS_AS(solve_rfi(f, g, cfg, a0, k), ConfigError);
  }
  SUBCASE("early stop labels must cover the sample side") {
    cfg.early_stop = EarlyStopConfig{{0, 1}, 5};
    CHECK_THROWS_AS(solve_relaxed(f, g, cfg, a0), ConfigError);
    cfg.early_stop = EarlyStopConfig{{0, 1, 1}, 0};
    CHECK_THROWS_AS(solve_relaxed(f, g, cfg, a0), ConfigError);
  }
  SUBCASE("mismatched map dimensions") {
    AffineMap wrong(0.5, k, 4);  // expects 4x4 input, g produces 3x3
    CHECK_THROWS_AS(solve_relaxed(wrong, g, cfg, Matrix::Zero(4, 4)),
                    DimensionMismatch);
  }
}

TEST_CASE("relaxed iteration on an affine contraction") {
  std::mt19937_64 rng(42);
  const Index d = 4;
  const Matrix kf = testutil::random_semimetric(rng, d, 0.5, 1.5);
  const Matrix kg = testutil::random_semimetric(rng, d, 0.5, 1.5);
  const double theta_f = 0.6, theta_g = 0.7;
  AffineMap f(theta_f, kf, d), g(theta_g, kg, d);

  SolverConfig cfg;
  cfg.alpha = 0.9;
  cfg.gamma_f = 0.8;
  cfg.gamma_g = 0.9;
  cfg.tol_residual = 1e-12;
  cfg.max_iters = 2000;

  const double product = cfg.gamma_f * cfg.gamma_g * theta_f * theta_g;
  REQUIRE(product < 1.0);
  const double l_t = 1.0 - cfg.alpha * (1.0 - product);

  const Matrix a0 = testutil::random_semimetric(rng, d, 0.1, 2.0);
  RunReport rep = solve_relaxed(f, g, cfg, a0);
  CHECK(rep.verdict == Verdict::Converged);

  // The entrywise fixed point is available in closed form.
  const Matrix a_star =
      (cfg.gamma_g * theta_g * cfg.gamma_f * kf + cfg.gamma_g * kg) /
      (1.0 - product);
  const Matrix b_star = cfg.gamma_f * (theta_f * a_star + kf);
  CHECK(max_norm(rep.a - a_star) < 1e-10);
  CHECK(max_norm(rep.b - b_star) < 1e-10);

  SUBCASE("residual contraction matches the certified factor") {
    REQUIRE(rep.contraction.l_t.has_value());
    CHECK(*rep.contraction.l_t == doctest::Approx(l_t));
    CHECK(rep.contraction.relaxed_condition == true);
    for (std::size_t t = 1; t + 1 < rep.trace.size(); ++t) {
      const double ratio = rep.trace[t + 1].residual_a / rep.trace[t].residual_a;
      if (rep.trace[t].residual_a < 1e-11) break;  // roundoff floor
      CHECK(ratio <= l_t + 1e-4);
    }
  }

  SUBCASE("two initializations meet at the unique fixed point") {
    const Matrix other = testutil::random_semimetric(rng, d, 0.5, 3.0);
    RunReport rep2 = solve_relaxed(f, g, cfg, other);
    CHECK(max_norm(rep.a - rep2.a) < 1e-10);
  }

  SUBCASE("first trace row has no previous B, so residual_b is NaN") {
    CHECK(std::isnan(rep.trace.front().residual_b));
    CHECK_FALSE(std::isnan(rep.trace.at(1).residual_b));
  }
}

TEST_CASE("relaxed iteration detects divergence") {
  std::mt19937_64 rng(43);
  const Index d = 3;
  AffineMap f(2.0, testutil::random_semimetric(rng, d, 0.5, 1.0), d);
  AffineMap g(2.0, testutil::random_semimetric(rng, d, 0.5, 1.0), d);
  SolverConfig cfg;
  cfg.alpha = 1.0;
  cfg.max_iters = 200;
  RunReport rep = solve_relaxed(f, g, cfg, Matrix::Ones(d, d));
  CHECK(rep.verdict == Verdict::Diverged);
  CHECK(rep.message.find("residual") != std::string::npos);
}

TEST_CASE("relaxed iteration reports max iters on a slow instance") {
  std::mt19937_64 rng(44);
  const Index d = 3;
  AffineMap f(0.99, testutil::random_semimetric(rng, d, 0.5, 1.0), d);
  AffineMap g(0.99, testutil::random_semimetric(rng, d, 0.5, 1.0), d);
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.max_iters = 5;
  cfg.tol_residual = 1e-14;
  RunReport rep = solve_relaxed(f, g, cfg, Matrix::Zero(d, d));
  CHECK(rep.verdict == Verdict::MaxIters);
  CHECK(rep.iterations == 5);
  CHECK(rep.trace.size() == 5);
}

TEST_CASE("normalized iteration on constant maps") {
  std::mt19937_64 rng(45);
  const Index d = 4;
  const Matrix kf = testutil::random_semimetric(rng, d, 0.5, 2.0);
  const Matrix kg = testutil::random_semimetric(rng, d, 0.5, 2.0);
  AffineMap f(0.0, kf, d), g(0.0, kg, d);
  SolverConfig cfg;
  cfg.algorithm = Algorithm::NormalizedIteration;

  RunReport rep = solve(f, g, cfg, Matrix::Ones(d, d) - Matrix::Identity(d, d));
  CHECK(rep.verdict == Verdict::Converged);
  CHECK(rep.iterations == 2);
  CHECK(max_norm(rep.b - kf / max_norm(kf)) < 1e-15);
  CHECK(max_norm(rep.a - kg / max_norm(kg)) < 1e-15);
  CHECK(max_norm(rep.b) == doctest::Approx(1.0));
  // Trace columns carry the normalization factors.
  CHECK(rep.trace.front().gamma_f == doctest::Approx(1.0 / max_norm(kf)));
  CHECK(rep.trace.front().gamma_g == doctest::Approx(1.0 / max_norm(kg)));

  SUBCASE("a vanishing image raises ZeroNorm") {
    AffineMap zero(0.0, Matrix::Zero(d, d), d);
    CHECK_THROWS_AS(solve_normalized(zero, g, cfg, kf), ZeroNorm);
  }
}

TEST_CASE("stochastic iteration") {
  std::mt19937_64 rng(46);
  const Index d = 4;
  const Matrix kf = testutil::random_semimetric(rng, d, 0.5, 1.5);
  const Matrix kg = testutil::random_semimetric(rng, d, 0.5, 1.5);
  AffineMap f(0.6, kf, d), g(0.7, kg, d);
  SolverConfig cfg;
  cfg.alpha = 0.9;
  cfg.gamma_f = 0.8;
  cfg.gamma_g = 0.9;
  cfg.tol_residual = 1e-12;
  cfg.max_iters = 2000;
  const Matrix a0 = testutil::random_semimetric(rng, d, 0.1, 2.0);

  SUBCASE("full batch reproduces the relaxed trajectory bitwise") {
    RunReport dense = solve_relaxed(f, g, cfg, a0);
    SolverConfig scfg = cfg;
    scfg.algorithm = Algorithm::RandomFunctionIteration;
    scfg.batch_fraction = 1.0;
    RunReport sparse = solve(f, g, scfg, a0);
    CHECK(max_norm(dense.a - sparse.a) == 0.0);
    CHECK(max_norm(dense.b - sparse.b) == 0.0);
    REQUIRE(dense.trace.size() == sparse.trace.size());
    for (std::size_t t = 0; t < dense.trace.size(); ++t) {
      CHECK(dense.trace[t].residual_a == sparse.trace[t].residual_a);
    }
  }

  SUBCASE("small batches still converge to the same fixed point") {
    const double product = cfg.gamma_f * cfg.gamma_g * 0.6 * 0.7;
    const Matrix a_star =
        (cfg.gamma_g * 0.7 * cfg.gamma_f * kf + cfg.gamma_g * kg) /
        (1.0 - product);
    SolverConfig scfg = cfg;
    scfg.batch_fraction = 0.3;
    scfg.max_iters = 20000;
    scfg.tol_residual = 1e-13;
    RunReport rep = solve_rfi(f, g, scfg, a0, cfg.gamma_f * f.apply(a0));
    CHECK(max_norm(rep.a - a_star) < 1e-8);
  }

  SUBCASE("seeds change the sampled trajectory") {
    SolverConfig scfg = cfg;
    scfg.batch_fraction = 0.3;
    scfg.max_iters = 3;
    scfg.seed = 1;
    RunReport r1 = solve_rfi(f, g, scfg, a0, Matrix::Zero(d, d));
    scfg.seed = 2;
    RunReport r2 = solve_rfi(f, g, scfg, a0, Matrix::Zero(d, d));
    CHECK(max_norm(r1.b - r2.b) > 0.0);
  }

  SUBCASE("jacobi updates read the previous B") {
    SolverConfig scfg = cfg;
    scfg.max_iters = 1;
    const Matrix b0 = Matrix::Zero(d, d);
    RunReport gauss = solve_rfi(f, g, scfg, a0, b0);
    scfg.jacobi = true;
    RunReport jac = solve_rfi(f, g, scfg, a0, b0);
    // Gauss-Seidel feeds the fresh B into the A update; Jacobi feeds b0.
    CHECK(max_norm(gauss.a - jac.a) > 0.0);
    CHECK(max_norm(gauss.b - jac.b) == 0.0);
  }

  SUBCASE("reference fixed point fills the squared-distance column") {
    RunReport dense = solve_relaxed(f, g, cfg, a0);
    FixedPointReference ref{dense.a, dense.b};
    SolverConfig scfg = cfg;
    scfg.batch_fraction = 0.5;
    scfg.max_iters = 50;
    scfg.tol_residual = 1e-15;
    RunReport rep = solve_rfi(f, g, scfg, a0, Matrix::Zero(d, d), &ref);
    REQUIRE(rep.trace.size() == 50);
    for (const TraceRow& row : rep.trace) {
      REQUIRE(row.ref_sq_dist.has_value());
    }
    // Distances to the fixed point eventually shrink.
    CHECK(*rep.trace.back().ref_sq_dist < *rep.trace.front().ref_sq_dist);
  }
}

TEST_CASE("adaptive step sizes on constant maps") {
  std::mt19937_64 rng(47);
  const Index d = 3;
  Matrix kf = testutil::random_semimetric(rng, d, 0.5, 1.0);
  Matrix kg = testutil::random_semimetric(rng, d, 0.5, 1.0);
  kf *= 2.0 / max_norm(kf);  // max norm exactly... close to 2
  kg *= 2.0 / max_norm(kg);
  AffineMap f(0.0, kf, d), g(0.0, kg, d);

  SolverConfig cfg;
  cfg.algorithm = Algorithm::AdaptiveGamma;
  cfg.alpha = 1.0;
  cfg.gamma_f = 1.5;
  cfg.gamma_g = 1.5;
  RunReport rep = solve(f, g, cfg, Matrix::Ones(d, d) - Matrix::Identity(d, d));
  CHECK(rep.verdict == Verdict::Converged);
  CHECK(rep.iterations <= 3);
  // With constant maps the second sweep already repeats B = 1.5 Kf and
  // A = 1.5 Kg, whatever the rescale chose.
  CHECK(max_norm(rep.b - 1.5 * kf) < 1e-14);
  CHECK(max_norm(rep.a - 1.5 * kg) < 1e-14);
}

TEST_CASE("early stopping tracks the silhouette peak") {
  // F is constant so B (and its silhouette) freezes after one iteration,
  // while A keeps moving; patience must then end the run.
  std::mt19937_64 rng(48);
  const Index d = 6;
  const Matrix kf = testutil::random_semimetric(rng, d, 0.5, 1.5);
  const Matrix kg = testutil::random_semimetric(rng, d, 0.5, 1.5);
  AffineMap f(0.0, kf, d), g(0.9, kg, d);
  SolverConfig cfg;
  cfg.alpha = 0.5;
  cfg.tol_residual = 1e-13;
  cfg.max_iters = 500;
  cfg.early_stop = EarlyStopConfig{testutil::cyclic_labels(d, 2), 5};

  RunReport rep = solve_relaxed(f, g, cfg, Matrix::Zero(d, d));
  CHECK(rep.verdict == Verdict::EarlyStopped);
  CHECK(rep.iterations == 6);  // best at 1, patience 5
  CHECK(rep.best_iteration == 1);
  REQUIRE(rep.best_asw.has_value());
  REQUIRE(rep.best_b.has_value());
  CHECK(max_norm(*rep.best_b - rep.b) == 0.0);
  REQUIRE(rep.trace.front().asw.has_value());
  CHECK(*rep.trace.front().asw == *rep.best_asw);
}

TEST_CASE("iterate class validation fires inside the loop") {
  // G emits matrices with a negative off-diagonal entry while claiming the
  // semi-metric class, so the periodic validation must object.
  std::mt19937_64 rng(49);
  const Index d = 3;
  class BadMap : public AffineMap {
   public:
    using AffineMap::AffineMap;
    MatrixClass output_class() const override { return MatrixClass::SemiMetric; }
  };
  Matrix neg = Matrix::Zero(d, d);
  neg(0, 1) = neg(1, 0) = -1.0;
  BadMap f(0.0, testutil::random_semimetric(rng, d, 0.5, 1.0), d);
  BadMap g(0.0, neg, d);
  SolverConfig cfg;
  cfg.validate_every = 1;
  cfg.tol_residual = 1e-30;
  CHECK_THROWS_WITH_AS(
      solve_relaxed(f, g, cfg, Matrix::Zero(d, d)),
      doctest::Contains("iteration"), ClassViolation);
}

TEST_CASE("default initial matrix prefers the reference") {
  std::mt19937_64 rng(50);
  const Index d = 3;
  const Matrix k = testutil::random_semimetric(rng, d, 0.5, 1.0);
  AffineMap f(0.5, k, d);

  class RefMap : public AffineMap {
   public:
    RefMap(double theta, Matrix k, Index in, Matrix ref)
        : AffineMap(theta, std::move(k), in), ref_(std::move(ref)) {}
    const Matrix* reference() const override { return &ref_; }

   private:
    Matrix ref_;
  };
  RefMap g(0.5, k, d, 2.5 * k);
  CHECK(max_norm(default_initial_matrix(f, g) - 2.5 * k) == 0.0);

  AffineMap plain_g(0.5, k, d);
  CHECK(max_norm(default_initial_matrix(f, plain_g) -
                 (Matrix::Ones(d, d) - Matrix::Identity(d, d))) == 0.0);
}

TEST_CASE("hilbert diagnostic in the trace") {
  // Iterates with equal off-diagonal entries have zero log-ratio spread.
  std::mt19937_64 rng(51);
  const Index d = 3;
  const Matrix ones = Matrix::Ones(d, d) - Matrix::Identity(d, d);
  AffineMap f(0.0, 2.0 * ones, d), g(0.0, 3.0 * ones, d);
  SolverConfig cfg;
  RunReport rep = solve_relaxed(f, g, cfg, ones);
  CHECK(rep.trace.front().hilbert_a == 0.0);

  ResidualDiagnostics diag = residual_diagnostics(ones, 2.0 * ones);
  CHECK(diag.hilbert == 0.0);
  CHECK(diag.linf == 1.0);
  // 2x scale on one entry, 0.5x on another: spread is log 4.
  Matrix skew = ones;
  skew(0, 1) *= 2.0;
  skew(1, 0) *= 2.0;
  skew(0, 2) *= 0.5;
  skew(2, 0) *= 0.5;
  CHECK(residual_diagnostics(ones, skew).hilbert ==
        doctest::Approx(std::log(4.0)));
  // Zero off-diagonals push the diagnostic to infinity.
  CHECK(std::isinf(residual_diagnostics(ones, Matrix::Zero(d, d)).hilbert));
}
