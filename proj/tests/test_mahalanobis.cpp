#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mel/errors.hpp"
#include "mel/mahalanobis.hpp"
#include "oracles.hpp"

using namespace mel;

TEST_CASE("radial kernels evaluate their closed forms") {
  const double sigma = 0.7;
  RadialKernel g = RadialKernel::gaussian(sigma);
  CHECK(g.at_zero() == 1.0);
  CHECK(g.at_squared(0.3) ==
        doctest::Approx(std::exp(-0.3 / (2.0 * sigma * sigma))));
  CHECK(g.squared_arg_lipschitz() ==
        doctest::Approx(1.0 / (2.0 * sigma * sigma)));

  const double eps = 1.3;
  RadialKernel imq = RadialKernel::inverse_multiquadric(eps);
  CHECK(imq.at_squared(0.5) ==
        doctest::Approx(1.0 / std::sqrt(1.0 + eps * eps * 0.5)));

  RadialKernel lap = RadialKernel::laplacian(sigma);
  CHECK(lap.at_squared(0.25) == doctest::Approx(std::exp(-0.5 / sigma)));
  // The Laplacian kernel is not Lipschitz in the squared argument at zero.
  CHECK_THROWS_AS(lap.squared_arg_lipschitz(0.0), PositiveReferenceRequired);
  CHECK(lap.squared_arg_lipschitz(0.04) ==
        doctest::Approx(1.0 / (2.0 * sigma * 0.2)));

  CHECK_THROWS_AS(RadialKernel::gaussian(0.0), ConfigError);
  CHECK_THROWS_AS(RadialKernel::laplacian(-1.0), ConfigError);
}

TEST_CASE("mahalanobis distance") {
  std::mt19937_64 rng(21);
  Vector x(3), y(3);
  x << 1.0, 2.0, 3.0;
  y << 0.0, 2.0, 5.0;

  SUBCASE("identity weight reduces to euclidean") {
    const Matrix id = Matrix::Identity(3, 3);
    CHECK(squared_mahalanobis(id, x, y) == doctest::Approx(5.0));
    CHECK(mahalanobis_distance(id, x, y) == doctest::Approx(std::sqrt(5.0)));
  }

  SUBCASE("general psd weight") {
    const Matrix a = testutil::random_psd(rng, 3);
    const Vector d = x - y;
    CHECK(squared_mahalanobis(a, x, y) == doctest::Approx(d.dot(a * d)));
  }

  SUBCASE("round-off negatives clamp, real negatives abort") {
    Matrix tiny = -1e-14 * Matrix::Identity(3, 3);
    CHECK(squared_mahalanobis(tiny, x, y) == 0.0);
    Matrix indefinite = -Matrix::Identity(3, 3);
    CHECK_THROWS_AS(squared_mahalanobis(indefinite, x, y),
                    NegativeQuadraticForm);
  }
}

TEST_CASE("kernel ground map") {
  std::mt19937_64 rng(22);
  Dataset data = testutil::random_dataset(rng, 4, 6);
  const double sigma = 2.0;
  ReferenceMatrix ref = ReferenceMatrix::scaled_identity(6, 0.01);
  KernelGroundMap map(data, Side::Samples, RadialKernel::gaussian(sigma), ref);

  SUBCASE("entries are kernel evaluations plus the reference") {
    const Matrix a = testutil::random_psd(rng, 4);
    const Matrix b = map.apply(a);
    CHECK(validate_class(b, MatrixClass::Psd).ok);
    for (Index i = 0; i < 6; ++i) {
      for (Index j = 0; j < 6; ++j) {
        const double u =
            squared_mahalanobis(a, data.sample(i), data.sample(j));
        const double expected = map.kernel().at_squared(u) + ref.entries()(i, j);
        CHECK(b(i, j) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(map.entry(a, i, j) == b(i, j));
      }
    }
  }

  SUBCASE("lipschitz budget certifies the map on random psd pairs") {
    LipschitzBudget budget = lipschitz_budget(map);
    double r = 0.0;
    for (Index i = 0; i < 6; ++i) {
      for (Index j = 0; j < 6; ++j) {
        const double l1 = (data.sample(i) - data.sample(j)).lpNorm<1>();
        r = std::max(r, l1 * l1);
      }
    }
    CHECK(budget.r == doctest::Approx(r));
    CHECK(budget.scalar == doctest::Approx(1.0 / (2.0 * sigma * sigma)));
    CHECK(budget.map == doctest::Approx(budget.r * budget.scalar));
    CHECK(map.lipschitz_constant() == budget.map);

    for (int trial = 0; trial < 20; ++trial) {
      const Matrix a1 = testutil::random_psd(rng, 4);
      const Matrix a2 = testutil::random_psd(rng, 4);
      const double num = max_norm(map.apply(a1) - map.apply(a2));
      const double den = max_norm(a1 - a2);
      CHECK(num <= budget.map * den * (1.0 + 1e-12) + 1e-15);
    }
  }

  SUBCASE("laplacian kernel needs a positive input floor") {
    KernelGroundMap lap(data, Side::Samples, RadialKernel::laplacian(1.0), ref);
    CHECK_FALSE(lap.lipschitz_constant().has_value());
    CHECK_THROWS_AS(lipschitz_budget(lap), PositiveReferenceRequired);

    KernelGroundMap floored(data, Side::Samples, RadialKernel::laplacian(1.0),
                            ref, 0.5);
    REQUIRE(floored.lipschitz_constant().has_value());
    CHECK(*floored.lipschitz_constant() > 0.0);
  }

  SUBCASE("psd guard clips round-off and rejects indefinite input") {
    Matrix borderline = testutil::random_psd(rng, 4);
    borderline -= 5e-11 * Matrix::Identity(4, 4);
    const Matrix b = map.apply(borderline);  // clip path, must stay finite
    CHECK(b.allFinite());

    Matrix indefinite = testutil::random_psd(rng, 4);
    indefinite -= 2.0 * indefinite.eigenvalues().real().maxCoeff() *
                  Matrix::Identity(4, 4);
    CHECK_THROWS_AS(kernel_map_apply(
                        map, CostMatrix(indefinite, MatrixClass::Unchecked)),
                    ClassViolation);
  }

  SUBCASE("norm lower bound comes from the kernel diagonal") {
    REQUIRE(map.norm_lower_bound().has_value());
    CHECK(*map.norm_lower_bound() >= 1.0);
  }
}
