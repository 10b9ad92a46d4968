#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "mel/data.hpp"
#include "mel/errors.hpp"

using namespace mel;

TEST_CASE("synthetic translated histograms") {
  SyntheticSpec spec;
  spec.n = 12;
  spec.m = 9;
  spec.peak_width = 50.0;

  SUBCASE("entries follow the torus bump, normalized at zero") {
    spec.shape = Shape::H1;
    const Matrix x = synthetic_matrix(spec);
    REQUIRE(x.rows() == 12);
    REQUIRE(x.cols() == 9);
    CHECK(x(0, 0) == 1.0);  // t = 0 at (0, 0), divided by itself
    for (Index i = 0; i < spec.n; ++i) {
      for (Index j = 0; j < spec.m; ++j) {
        const double t = static_cast<double>(i) / 12.0 -
                         static_cast<double>(j) / 9.0;
        const double image = std::remainder(t, 1.0);
        CHECK(x(i, j) ==
              doctest::Approx(std::exp(-50.0 * image * image)).epsilon(1e-15));
        CHECK(x(i, j) > 0.0);
        CHECK(x(i, j) <= 1.0);
      }
    }
  }

  SUBCASE("the pattern is translated: square case is circulant") {
    spec.n = 10;
    spec.m = 10;
    spec.shape = Shape::H1;
    const Matrix x = synthetic_matrix(spec);
    for (Index i = 0; i < 10; ++i) {
      for (Index j = 0; j < 10; ++j) {
        CHECK(x(i, j) == doctest::Approx(x(0, (j - i + 10) % 10)).epsilon(1e-15));
      }
    }
  }

  SUBCASE("h2 and h3 add the secondary bump") {
    spec.shape = Shape::H2;
    const Matrix x2 = synthetic_matrix(spec);
    const double g0 = 1.0;
    const double ghalf = std::exp(-50.0 * 0.25);
    const double at0 = g0 + 0.5 * ghalf;
    // At t = 1/2 the roles swap: g(1/2) + g(1)/2 = g(1/2) + g(0)/2.
    spec.n = 2;
    spec.m = 2;
    const Matrix tiny = synthetic_matrix(spec);
    CHECK(tiny(1, 0) ==
          doctest::Approx((ghalf + 0.5 * g0) / at0).epsilon(1e-14));
    (void)x2;

    SyntheticSpec s3;
    s3.n = 9;
    s3.m = 9;
    s3.shape = Shape::H3;
    s3.peak_width = 50.0;
    const Matrix x3 = synthetic_matrix(s3);
    // At t = -1/3 (i/n - j/m = -1/3) the secondary peak contributes fully:
    // h3(-1/3) = g(1/3) + g(0)/2, relatively large.
    const double third = std::exp(-50.0 / 9.0);
    const double expect = (third + 0.5) / (1.0 + 0.5 * third);
    CHECK(x3(0, 3) == doctest::Approx(expect).epsilon(1e-14));
    // The mirror offset t = +1/3 only sees the tails of both bumps.
    CHECK(x3(3, 0) < x3(0, 3));
  }

  SUBCASE("parameter validation") {
    SyntheticSpec bad;
    bad.n = 1;
    CHECK_THROWS_AS(synthetic_matrix(bad), ConfigError);
    bad.n = 10;
    bad.peak_width = 0.0;
    CHECK_THROWS_AS(synthetic_matrix(bad), ConfigError);
  }

  SUBCASE("dataset orientation: features by samples") {
    spec.shape = Shape::H1;
    Dataset data = generate_synthetic(spec);
    const Matrix x = synthetic_matrix(spec);
    REQUIRE(data.m() == 9);
    REQUIRE(data.n() == 12);
    CHECK(data.raw()(3, 7) == x(7, 3));
  }
}

TEST_CASE("csv round trip preserves doubles exactly") {
  std::mt19937_64 rng(71);
  const char* path = "roundtrip_tmp.csv";
  Matrix m(3, 4);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 4; ++j)
      m(i, j) = testutil::uniform(rng, -1.0, 1.0) * std::pow(10.0, (i * 4 + j) % 7 - 3);
  m(0, 0) = 1.0 / 3.0;
  m(1, 1) = 1e-300;
  save_csv(path, m);
  const Matrix back = load_csv_matrix(path);
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 4);
  CHECK(max_norm(back - m) == 0.0);
  std::remove(path);
}

TEST_CASE("csv parsing rules") {
  const char* path = "parse_tmp.csv";

  SUBCASE("header rows are skipped") {
    std::ofstream(path) << "gene,cell_a,cell_b\ng1,1.5,2.5\n";
    CHECK_THROWS_AS(load_csv_matrix(path), ParseError);  // g1 is not numeric
    std::ofstream(path) << "cell_a,cell_b\n1.5,2.5\n3.0,4.0\n";
    const Matrix m = load_csv_matrix(path);
    REQUIRE(m.rows() == 2);
    CHECK(m(0, 1) == 2.5);
  }

  SUBCASE("ragged rows fail with the line number") {
    std::ofstream(path) << "1,2\n3,4,5\n";
    CHECK_THROWS_WITH_AS(load_csv_matrix(path), doctest::Contains("line 2"),
                         ParseError);
  }

  SUBCASE("non-finite values are rejected") {
    std::ofstream(path) << "1,2\nnan,4\n";
    CHECK_THROWS_AS(load_csv_matrix(path), ParseError);
    std::ofstream(path) << "1,inf\n";
    CHECK_THROWS_AS(load_csv_matrix(path), ParseError);
  }

  SUBCASE("empty files are rejected") {
    std::ofstream(path) << "\n\n";
    CHECK_THROWS_AS(load_csv_matrix(path), ParseError);
  }

  SUBCASE("exp transform and transpose feed the dataset") {
    std::ofstream(path) << "0.0,-1.0,0.5\n-0.5,0.25,-2.0\n";
    CsvOptions opts;
    opts.exp_transform = true;
    opts.transpose = true;  // rows are samples: dataset is 3 features x 2
    Dataset data = load_csv(path, opts);
    CHECK(data.m() == 3);
    CHECK(data.n() == 2);
    CHECK(data.raw()(1, 0) == doctest::Approx(std::exp(-1.0)));
  }

  std::remove(path);
}
