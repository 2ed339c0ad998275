#include <doctest.h>

#include <cmath>
#include <random>

#include "kspe/grid.hpp"

namespace {

constexpr double pi = 3.14159265358979323846;

kspe::ScalarField random_field(const kspe::SpaceGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  kspe::ScalarField v(g);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = dist(rng);
  return v;
}

kspe::FluxField random_flux(const kspe::SpaceGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  kspe::FluxField f(g);
  for (int a = 0; a < g.dim; ++a)
    for (double& x : f.axis(a)) x = dist(rng);
  return f;
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("construction validates its arguments") {
  CHECK_THROWS_AS(kspe::SpaceGrid::make(0, 8), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::SpaceGrid::make(4, 8), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::SpaceGrid::make(2, 3), kspe::invalid_input);
  // 1.0/49 * 49 != 1.0 in double arithmetic; such sizes are refused outright
  // so quadrature identities stay exact.
  CHECK_THROWS_AS(kspe::SpaceGrid::make(2, 49), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::SpaceGrid::make(3, 103), kspe::invalid_input);

  const kspe::SpaceGrid g = kspe::SpaceGrid::make(3, 8);
  CHECK(g.spacing == 0.125);
  CHECK(g.nodes_per_axis() == 7);
  CHECK(g.node_count() == 343);
  CHECK(g.face_count(0) == 8 * 7 * 7);
  CHECK(g.cell_volume() == 0.125 * 0.125 * 0.125);
  const auto fe = g.face_extents(1);
  CHECK(fe[0] == 7);
  CHECK(fe[1] == 8);
  CHECK(fe[2] == 7);
}

TEST_CASE("node positions are interior lattice points") {
  const kspe::SpaceGrid g = kspe::SpaceGrid::make(2, 4);
  const kspe::Point p = g.node_position(0, 0, 0);
  CHECK(p[0] == 0.25);
  CHECK(p[1] == 0.25);
  const kspe::Point q = g.node_position(2, 1, 0);
  CHECK(q[0] == 0.75);
  CHECK(q[1] == 0.5);
}

TEST_CASE("gradient and divergence are summation-by-parts adjoints") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> pick_dim(1, 3);
  std::uniform_int_distribution<int> pick_cells(4, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const kspe::SpaceGrid g = kspe::SpaceGrid::make(pick_dim(rng), pick_cells(rng));
    const kspe::ScalarField w = random_field(g, rng);
    const kspe::FluxField f = random_flux(g, rng);

    const kspe::ScalarField div_f = kspe::divergence(f);
    const kspe::FluxField grad_w = kspe::gradient(w);
    double lhs = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) lhs += div_f[i] * w[i];
    double rhs = 0.0;
    for (int a = 0; a < g.dim; ++a)
      for (std::size_t i = 0; i < f.axis(a).size(); ++i) rhs += f.axis(a)[i] * grad_w.axis(a)[i];
    lhs *= g.cell_volume();
    rhs *= g.cell_volume();
    REQUIRE(std::fabs(lhs + rhs) <= 1e-12 * (1.0 + std::fabs(lhs) + std::fabs(rhs)));
  }
}

TEST_CASE("sine quadrature is exact for the vertex-centered rule") {
  // sum_{i=1}^{n-1} sin^2(pi i/n) = n/2, so the L2 norm of sin(pi x) comes out
  // at sqrt(1/2) exactly.
  const kspe::SpaceGrid g = kspe::SpaceGrid::make(1, 32);
  const auto v = kspe::ScalarField::sample(g, [](const kspe::Point& p) {
    return std::sin(pi * p[0]);
  });
  CHECK(kspe::lp_norm(v, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
}

TEST_CASE("gradient of sine reaches pi to second order") {
  const kspe::SpaceGrid g = kspe::SpaceGrid::make(1, 64);
  const auto v = kspe::ScalarField::sample(g, [](const kspe::Point& p) {
    return std::sin(pi * p[0]);
  });
  const kspe::FluxField grad = kspe::gradient(v);
  double peak = 0.0;
  for (double x : grad.axis(0)) peak = std::max(peak, std::fabs(x));
  CHECK(peak == doctest::Approx(pi).epsilon(1e-3));
}

TEST_CASE("level set measure counts nodes at or above the threshold") {
  const kspe::SpaceGrid g = kspe::SpaceGrid::make(2, 8);
  const auto v = kspe::ScalarField::sample(g, [](const kspe::Point& p) { return p[0]; });
  // columns x0 in {4/8,...,7/8}: 4 of the 7, times 7 rows, weight 1/64 each
  CHECK(kspe::level_set_measure(v, 0.5) == 28.0 / 64.0);
  CHECK(kspe::level_set_measure(v, 2.0) == 0.0);
  CHECK(kspe::level_set_measure(v, 0.0) == 49.0 / 64.0);
}

TEST_CASE("lp norms: constants, scaling, triangle inequality, bad exponents") {
  const kspe::SpaceGrid g = kspe::SpaceGrid::make(2, 8);
  const kspe::ScalarField three(g, 3.0);
  CHECK(kspe::lp_norm(three, 1.0) == doctest::Approx(3.0 * (7.0 / 8.0) * (7.0 / 8.0)).epsilon(1e-14));
  CHECK(kspe::lp_norm(three, std::numeric_limits<double>::infinity()) == 3.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pick_p(1.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double p = pick_p(rng);
    const kspe::ScalarField v = random_field(g, rng);
    const kspe::ScalarField w = random_field(g, rng);
    kspe::ScalarField sum(g), scaled(g);
    for (std::size_t i = 0; i < v.size(); ++i) {
      sum[i] = v[i] + w[i];
      scaled[i] = -2.5 * v[i];
    }
    CHECK(kspe::lp_norm(scaled, p) ==
          doctest::Approx(2.5 * kspe::lp_norm(v, p)).epsilon(1e-12));
    CHECK(kspe::lp_norm(sum, p) <= kspe::lp_norm(v, p) + kspe::lp_norm(w, p) + 1e-12);
  }

  CHECK_THROWS_AS(kspe::lp_norm(three, 0.5), kspe::invalid_input);
  CHECK_THROWS_AS(kspe::lp_norm(three, std::nan("")), kspe::invalid_input);
}

TEST_CASE("dot is the plain euclidean pairing") {
  const kspe::SpaceGrid g = kspe::SpaceGrid::make(1, 4);
  kspe::ScalarField v(g), w(g);
  v[0] = 1.0; v[1] = -2.0; v[2] = 3.0;
  w[0] = 4.0; w[1] = 0.5; w[2] = -1.0;
  CHECK(kspe::dot(v, w) == 4.0 - 1.0 - 3.0);
}

}  // TEST_SUITE
