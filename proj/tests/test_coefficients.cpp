#include <doctest.h>

#include <cmath>
#include <random>

#include "kspe/coefficients.hpp"

TEST_SUITE("coefficients") {

TEST_CASE("checkerboard parity with half-open cells") {
  const auto c = kspe::CoefficientField::checkerboard(3, 1.0, 10.0, 0.25);
  CHECK(c.diagonal_value({0.1, 0.1, 0.1}, 0.0) == 1.0);    // first cell
  CHECK(c.diagonal_value({0.3, 0.1, 0.1}, 0.0) == 10.0);   // one cell over
  CHECK(c.diagonal_value({0.3, 0.3, 0.1}, 0.0) == 1.0);    // two flips cancel
  CHECK(c.diagonal_value({0.25, 0.1, 0.1}, 0.0) == 10.0);  // boundary joins the right cell
  CHECK(c.alpha() == 1.0);
  CHECK(c.beta() == 10.0);
}

TEST_CASE("layered field reads only its axis") {
  const auto c = kspe::CoefficientField::layered(2, 1.0, 10.0, 0.25, 0);
  CHECK(c.diagonal_value({0.1, 0.9, 0.0}, 0.0) == 1.0);
  CHECK(c.diagonal_value({0.3, 0.9, 0.0}, 0.0) == 10.0);
  CHECK(c.diagonal_value({0.3, 0.1, 0.0}, 0.0) == 10.0);
}

TEST_CASE("time modulation and its validity window") {
  const auto c = kspe::CoefficientField::time_modulated(3, 1.0, 0.5);
  CHECK(c.time_dependent());
  CHECK(c.diagonal_value({0.5, 0.5, 0.5}, 0.0) == 1.0);
  CHECK(c.diagonal_value({0.5, 0.5, 0.5}, 0.25) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(c.alpha() == doctest::Approx(0.5));
  CHECK(c.beta() == doctest::Approx(1.5));
  // amplitude must leave the field uniformly positive
  CHECK_THROWS_AS(kspe::CoefficientField::time_modulated(3, 1.0, 1.0), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::CoefficientField::time_modulated(3, 1.0, -1.5), kspe::invalid_input);
}

TEST_CASE("evaluation outside the closed box is refused") {
  const auto c = kspe::CoefficientField::identity(2);
  CHECK(c.diagonal_value({1.0, 0.0, 0.0}, 0.0) == 1.0);  // boundary trace ok
  CHECK_THROWS_AS(c.diagonal_value({1.2, 0.5, 0.0}, 0.0), kspe::domain_error);
  CHECK_THROWS_AS(c.diagonal_value({0.5, -0.1, 0.0}, 0.0), kspe::domain_error);
}

TEST_CASE("face coefficient is the harmonic mean across the face") {
  // nodes at 0.25 (high cell) and 0.5 (low cell): 2*10*1/11
  const auto c = kspe::CoefficientField::checkerboard(1, 1.0, 10.0, 0.25);
  const auto g = kspe::SpaceGrid::make(1, 4);
  CHECK(kspe::face_coefficient(c, g, 0, 1, 0, 0, 0.0) == doctest::Approx(20.0 / 11.0).epsilon(1e-15));

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pick(0.1, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = pick(rng), b = pick(rng);
    const double mean = 2.0 * a * b / (a + b);
    REQUIRE(mean >= std::min(a, b) - 1e-12);
    REQUIRE(mean <= std::max(a, b) + 1e-12);
    REQUIRE(mean <= 0.5 * (a + b) + 1e-12);
  }
}

TEST_CASE("sampled matrix is diagonal") {
  const auto c = kspe::CoefficientField::checkerboard(3, 2.0, 5.0, 0.5);
  const auto m = c.sample({0.3, 0.6, 0.9}, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(m[i][j] == 0.0);
  CHECK(m[0][0] == m[1][1]);
  CHECK(m[1][1] == m[2][2]);
}

TEST_CASE("ellipticity verification accepts honest bounds") {
  const auto c = kspe::CoefficientField::checkerboard(3, 1.0, 10.0, 0.25);
  const auto report = kspe::verify_ellipticity(c, 2000);
  CHECK(report.pass);
  CHECK(report.min_rayleigh >= 1.0 - 1e-12);
  CHECK(report.max_gain <= 10.0 + 1e-12);
}

TEST_CASE("ellipticity verification flags misdeclared bounds") {
  const auto honest = kspe::CoefficientField::checkerboard(3, 1.0, 10.0, 0.25);
  const auto inflated = honest.with_declared_bounds(2.0, 10.0);
  CHECK_FALSE(kspe::verify_ellipticity(inflated, 2000).pass);
  const auto deflated = honest.with_declared_bounds(1.0, 5.0);
  CHECK_FALSE(kspe::verify_ellipticity(deflated, 2000).pass);
}

TEST_CASE("family factories validate their parameters") {
  CHECK_THROWS_AS(kspe::CoefficientField::checkerboard(3, -1.0, 2.0), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::CoefficientField::checkerboard(3, 1.0, 2.0, 0.0), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::CoefficientField::layered(3, 1.0, 2.0, 0.25, 3), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::CoefficientField::identity(0), kspe::invalid_input);
}

}  // TEST_SUITE
