#include <doctest.h>

#include <cmath>

#include "kspe/stepper.hpp"
#include "kspe/sweeps.hpp"
#include "kspe/truncations.hpp"

namespace {

kspe::ProblemConfig base_problem(int dim, int cells) {
  kspe::ProblemConfig p;
  p.grid = kspe::SpaceGrid::make(dim, cells);
  p.theta = 0.5;
  p.trunc_level = 64.0;
  p.dt = 2e-3;
  p.t_final = 0.02;
  p.diff = kspe::CoefficientField::identity(dim);
  p.drift = kspe::CoefficientField::identity(dim);
  p.source.kind = kspe::SourceKind::constant;
  p.source.value = 1.0;
  return p;
}

}  // namespace

TEST_SUITE("stepper") {

TEST_CASE("upwind flux carries the node the flow leaves") {
  const auto g = kspe::SpaceGrid::make(2, 4);  // 3x3 interior nodes, h = 1/4
  kspe::ScalarField u(g), psi(g);
  const auto at = [](int i0, int i1) { return static_cast<std::size_t>(i0) * 3 + i1; };
  psi[at(1, 1)] = 1.0;  // potential spike at the center
  u[at(1, 1)] = 1.0;
  u[at(2, 1)] = 0.5;  // east neighbour

  const auto flux = kspe::drift_flux(u, psi, kspe::CoefficientField::identity(2), 64.0);

  // Axis-0 faces are laid out (4 faces) x (3 rows).  The face between the
  // center and its east neighbour sees grad psi = -4, so the flow points west
  // and carries the east node.
  CHECK(flux.axis(0)[2 * 3 + 1] == -2.0);
  // The west-side face sees grad psi = +4 and carries the west node, which is
  // empty.
  CHECK(flux.axis(0)[1 * 3 + 1] == 0.0);
  double total = 0.0;
  for (int a = 0; a < 2; ++a)
    for (double f : flux.axis(a)) total += std::fabs(f);
  CHECK(total == 2.0);  // no other face moves anything

  // Clamped variant: the carried value passes through the truncation.
  const auto clamped = kspe::drift_flux(u, psi, kspe::CoefficientField::identity(2), 0.3);
  CHECK(clamped.axis(0)[2 * 3 + 1] == -4.0 * 0.3);
}

TEST_CASE("boundary faces: inflow carries nothing, outflow carries the interior") {
  const auto g = kspe::SpaceGrid::make(2, 4);
  kspe::ScalarField u(g), psi(g);
  const auto at = [](int i0, int i1) { return static_cast<std::size_t>(i0) * 3 + i1; };
  u[at(0, 1)] = 0.9;

  psi[at(0, 1)] = 1.0;  // gradient points into the domain across the left wall
  auto flux = kspe::drift_flux(u, psi, kspe::CoefficientField::identity(2), 64.0);
  CHECK(flux.axis(0)[0 * 3 + 1] == 0.0);  // inflow face reads the zero boundary

  psi[at(0, 1)] = -1.0;  // now the flow leaves through the left wall
  flux = kspe::drift_flux(u, psi, kspe::CoefficientField::identity(2), 64.0);
  CHECK(flux.axis(0)[0 * 3 + 1] == -4.0 * 0.9);
}

TEST_CASE("zero forcing keeps the trajectory identically zero") {
  auto p = base_problem(2, 8);
  p.source.value = 0.0;
  p.dt = 1e-3;
  p.t_final = 0.05;
  const auto traj = kspe::run(p);
  CHECK(traj.steps() == 50);
  CHECK(traj.times.back() == 0.05);
  for (const auto& u : traj.u)
    for (double x : u.values()) REQUIRE(x == 0.0);
  for (const auto& psi : traj.psi)
    for (double x : psi.values()) REQUIRE(x == 0.0);
}

TEST_CASE("step count covers t_final exactly") {
  auto p = base_problem(2, 4);
  p.dt = 0.002;
  p.t_final = 0.0101;  // not a multiple of dt: one short step at the end
  const auto traj = kspe::run(p);
  CHECK(traj.steps() == 6);
  CHECK(traj.times.back() == 0.0101);
  CHECK(traj.times[5] == doctest::Approx(0.01).epsilon(1e-15));

  p.t_final = 0.01;
  const auto even = kspe::run(p);
  CHECK(even.steps() == 5);
  CHECK(even.times.back() == 0.01);
}

TEST_CASE("mass stays under the integrated source budget") {
  auto p = base_problem(2, 8);
  const auto traj = kspe::run(p);
  const double area = (7.0 / 8.0) * (7.0 / 8.0);  // measure of the interior nodes
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    const double mass = kspe::lp_norm(traj.u[k], 1.0);
    REQUIRE(mass <= traj.times[k] * area + 1e-10);
    REQUIRE(mass > 0.0);
  }
}

TEST_CASE("densities stay bitwise nonnegative, singular data included") {
  auto p = base_problem(3, 8);
  p.source.kind = kspe::SourceKind::spatial_singularity;
  p.source.m_num = 2;
  p.source.m_den = 1;
  p.source.margin = 0.1;
  p.dt = 1e-3;
  p.t_final = 0.01;
  const auto traj = kspe::run(p);
  for (const auto& u : traj.u)
    for (double x : u.values()) REQUIRE(!(x < 0.0));
  // something actually flowed
  CHECK(kspe::lp_norm(traj.u.back(), 1.0) > 0.0);
}

TEST_CASE("an inactive truncation level does not change a single bit") {
  auto p = base_problem(2, 8);  // peak density stays far below 64
  const auto a = kspe::run(p);
  p.trunc_level = 128.0;
  const auto b = kspe::run(p);
  REQUIRE(a.u.size() == b.u.size());
  for (std::size_t k = 0; k < a.u.size(); ++k)
    for (std::size_t i = 0; i < a.u[k].size(); ++i)
      REQUIRE(a.u[k][i] == b.u[k][i]);
}

TEST_CASE("configuration validation") {
  auto p = base_problem(2, 8);
  p.grid = kspe::SpaceGrid::make(1, 8);
  p.diff = kspe::CoefficientField::identity(1);
  p.drift = kspe::CoefficientField::identity(1);
  CHECK_THROWS_AS(kspe::run(p), kspe::invalid_input);  // solver needs dim >= 2

  p = base_problem(3, 8);
  p.theta = 0.7;  // 2/dim = 2/3
  CHECK_THROWS_AS(kspe::run(p), kspe::invalid_input);
  p.theta = -0.1;
  CHECK_THROWS_AS(kspe::run(p), kspe::invalid_input);

  p = base_problem(2, 8);
  p.trunc_level = 0.5;
  CHECK_THROWS_AS(kspe::run(p), kspe::invalid_input);

  p = base_problem(2, 8);
  p.drift = kspe::CoefficientField::time_modulated(2, 1.0, 0.5);
  CHECK_THROWS_AS(kspe::run(p), kspe::invalid_input);
}

TEST_CASE("a starved fixed-point loop reports the failing step") {
  auto p = base_problem(2, 8);
  p.fp_max_iter = 1;
  try {
    kspe::run(p);
    FAIL("expected step_failure");
  } catch (const kspe::step_failure& e) {
    CHECK(e.step_index == 1);
    CHECK(e.gap > 0.0);
  }
  // the retry ladder halves dt three times, then gives up the same way
  CHECK_THROWS_AS(kspe::run_with_retries(p), kspe::step_failure);

  p.fp_max_iter = 50;
  const auto outcome = kspe::run_with_retries(p);
  CHECK(outcome.halvings == 0);
  CHECK(outcome.final_dt == p.dt);
}

TEST_CASE("time-modulated diffusion is accepted and stays stable") {
  auto p = base_problem(2, 8);
  p.diff = kspe::CoefficientField::time_modulated(2, 1.0, 0.5);
  const auto traj = kspe::run(p);
  for (const auto& u : traj.u)
    for (double x : u.values()) REQUIRE(!(x < 0.0));
}

}  // TEST_SUITE
