#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mcf/geometry.hpp"
#include "mcf/profile.hpp"
#include "mcf/solver.hpp"

using namespace mcf;

namespace {
const Window kWin{-2.5, 2.5};
}

TEST_CASE("initial cap construction") {
  const auto cat = SupportProfile::catenoid(1.0, kWin);
  const auto s = build_initial_cap(cat, 1.0, 100, 2);
  CHECK(s.r == doctest::Approx(1.5430806348152438).epsilon(1e-15));
  CHECK(s.u.back() == 1.0);  // boundary sits at the prescribed height
  // axis height z0 + sinh(1)cosh(1)/2 = z0 + sinh(2)/4
  CHECK(s.u.front() == doctest::Approx(1.9067151019617548).epsilon(1e-14));
  // compatible: boundary identity and Neumann condition hold exactly
  CHECK(cat.eval(s.u.back()).value == doctest::Approx(s.r).epsilon(1e-15));
  const double dy = s.r * s.ds();
  const double fd_slope = (3.0 * s.u[100] - 4.0 * s.u[99] + s.u[98]) / (2.0 * dy);
  CHECK(fd_slope == doctest::Approx(-cat.eval(1.0).d1).epsilon(1e-10));
  CHECK(s.side == Side::Right);
}

TEST_CASE("initial cap side selection and bump") {
  const auto cone = SupportProfile::cone(1.0, 0.0, kWin);
  const auto left = build_initial_cap(cone, -1.0, 50, 2);
  CHECK(left.side == Side::Left);
  CHECK(left.r == doctest::Approx(1.0).epsilon(1e-15));
  // omega_Sigma' = -1 on the left branch, so the cap opens downward
  CHECK(left.u.front() < left.u.back());

  const auto cat = SupportProfile::catenoid(1.0, kWin);
  const auto flatc = build_initial_cap(cat, 1.0, 50, 2);
  const auto bumped = build_initial_cap(cat, 1.0, 50, 2, 0.1);
  CHECK(bumped.u.front() == doctest::Approx(flatc.u.front() + 0.1).epsilon(1e-14));
  CHECK(bumped.u.back() == flatc.u.back());  // bump vanishes at the boundary
  // bump has zero slope at the boundary: Neumann residual unchanged
  const double dy = bumped.r * bumped.ds();
  const double fd = (3.0 * bumped.u[50] - 4.0 * bumped.u[49] + bumped.u[48]) / (2.0 * dy);
  CHECK(fd == doctest::Approx(-cat.eval(1.0).d1).epsilon(1e-3));
}

TEST_CASE("initial cap validation") {
  const auto cat = SupportProfile::catenoid(1.0, kWin);
  CHECK_THROWS_AS(build_initial_cap(cat, 1.0, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_initial_cap(cat, 1.0, 100, 1), std::invalid_argument);
  const auto cone = SupportProfile::cone(1.0, 0.0, kWin);
  CHECK_THROWS_AS(build_initial_cap(cone, 0.0, 100, 2), std::domain_error);
}

TEST_CASE("flat disk is an exact equilibrium") {
  const auto cyl = SupportProfile::cylinder(1.0, kWin);
  auto s = build_initial_cap(cyl, 0.7, 64, 3);
  CHECK(s.r == 1.0);
  for (double u : s.u) CHECK(u == 0.7);
  CHECK(boundary_speed(s) == 0.0);
  for (double d : spatial_rhs(s, 0.0)) CHECK(d == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  StepControl ctl;
  const auto res = step(s, ctl);
  CHECK(res.ok);
  CHECK(s.r == doctest::Approx(1.0).epsilon(1e-14));
  for (double u : s.u) CHECK(u == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("boundary speed of compatible caps") {
  const auto cat = SupportProfile::catenoid(1.0, kWin);
  // cap attached above the waist: boundary moves inward (toward the waist)
  auto up = build_initial_cap(cat, 1.0, 200, 2);
  CHECK(boundary_speed(up) < 0.0);
  // mirrored cap below the waist: also moves toward the waist
  auto down = build_initial_cap(cat, -1.0, 200, 2);
  CHECK(boundary_speed(down) < 0.0);
  CHECK(boundary_speed(up) == doctest::Approx(boundary_speed(down)).epsilon(1e-12));

  // exact value for the quadratic cap: omega' = 2cy, omega'' = 2c at y = r
  const auto pe = cat.eval(1.0);
  const double r = pe.value, c = -pe.d1 / (2.0 * r);
  const double d1 = 2 * c * r, d2 = 2 * c;
  const double v = std::sqrt(1.0 + d1 * d1);
  const double H = -d2 / (v * v * v) - d1 / (r * v);
  CHECK(boundary_speed(up) == doctest::Approx(-(H / v) * pe.d1).epsilon(1e-10));
}

TEST_CASE("interior rhs sign matches cap curvature") {
  const auto cat = SupportProfile::catenoid(1.0, kWin);
  // z0 = 1: c < 0, dome-shaped cap, H > 0, graph moves down
  auto s = build_initial_cap(cat, 1.0, 100, 2);
  const auto rhs = spatial_rhs(s, boundary_speed(s));
  for (int i = 0; i <= 60; ++i) CHECK(rhs[i] < 0.0);  // away from the advection zone
  // z0 = -1: bowl-shaped cap, graph moves up
  auto b = build_initial_cap(cat, -1.0, 100, 2);
  const auto rhs2 = spatial_rhs(b, boundary_speed(b));
  for (int i = 0; i <= 60; ++i) CHECK(rhs2[i] > 0.0);
}

TEST_CASE("projection keeps the boundary on the support curve") {
  const auto cat = SupportProfile::catenoid(1.0, kWin);
  auto s = build_initial_cap(cat, 1.0, 50, 2);
  StepControl ctl;
  for (int k = 0; k < 500; ++k) {
    const auto res = step(s, ctl);
    REQUIRE(res.ok);
    const double resid = std::abs(cat.eval(s.u.back()).value - s.r);
    CHECK(resid <= 1e-10 * std::max(1.0, s.r));
  }
}

TEST_CASE("maximum principle along the flow") {
  const auto cat = SupportProfile::catenoid(1.0, kWin);
  auto s = build_initial_cap(cat, 1.0, 80, 2);
  const double u_max0 = s.u.front();
  const double u_min0 = s.u.back();
  StepControl ctl;
  StopThresholds stops;
  stops.t_max = 0.5;
  stops.record_stride = 50;
  const auto traj = run(s, ctl, stops);
  REQUIRE(traj.event.kind == FlowEvent::Kind::MaxTime);
  double prev_max = u_max0 + 1e-12;
  const double bound = geometry::boundary_gradient_bound(graph_constant(cat));
  for (const auto& rec : traj.records) {
    CHECK(rec.u_max <= prev_max + 1e-12);       // running max never rises
    CHECK(rec.u_max <= u_max0 + 1e-12);
    CHECK(rec.u_min >= -1e-12);                 // never crosses the waist plane
    CHECK(rec.boundary_grad <= bound + 1e-6);   // uniform gradient estimate
    prev_max = rec.u_max;
  }
}

TEST_CASE("coarse catenoid run converges to the flat disk") {
  const auto cat = SupportProfile::catenoid(1.0, kWin);
  auto s = build_initial_cap(cat, 1.0, 50, 2);
  StepControl ctl;
  StopThresholds stops;
  stops.t_max = 20.0;
  stops.record_stride = 500;
  const auto traj = run(s, ctl, stops);
  REQUIRE(traj.event.kind == FlowEvent::Kind::Converged);
  CHECK(std::abs(traj.event.final_state.u.back()) <= 1e-2);
  CHECK(traj.event.final_state.r == doctest::Approx(1.0).epsilon(1e-3));
  // area decreases monotonically toward the flat disk value pi r^2
  for (size_t i = 1; i < traj.records.size(); ++i)
    CHECK(traj.records[i].area <= traj.records[i - 1].area + 1e-10);
  CHECK(traj.records.back().area == doctest::Approx(M_PI).epsilon(1e-3));
}

TEST_CASE("cone cap pinches") {
  const auto cone = SupportProfile::cone(1.0, 0.0, kWin);
  auto s = build_initial_cap(cone, 1.0, 50, 2);
  StepControl ctl;
  StopThresholds stops;
  stops.record_stride = 100;
  const auto traj = run(s, ctl, stops);
  REQUIRE(traj.event.kind == FlowEvent::Kind::Pinched);
  CHECK(traj.event.final_state.r < 1e-3 * 1.0);
  CHECK(traj.event.t_event < 1.0);
  // r is eventually strictly decreasing
  for (size_t i = traj.records.size() / 2; i < traj.records.size(); ++i)
    CHECK(traj.records[i].r < traj.records[i - 1].r);
}

TEST_CASE("time stepping refines at second order") {
  const auto cat = SupportProfile::catenoid(1.0, kWin);
  auto axis_at = [&](int m) {
    auto s = build_initial_cap(cat, 1.0, m, 2);
    StepControl ctl;
    StopThresholds stops;
    stops.t_max = 0.2;
    stops.record_stride = 1000000;
    return run(s, ctl, stops).event.final_state.u.front();
  };
  const double a1 = axis_at(40), a2 = axis_at(80), a3 = axis_at(160);
  const double order = std::log2(std::abs(a1 - a2) / std::abs(a2 - a3));
  CHECK(order >= 1.8);
  CHECK(order <= 2.6);
}

TEST_CASE("stop conditions") {
  const auto cat = SupportProfile::catenoid(1.0, kWin);
  auto s = build_initial_cap(cat, 1.0, 50, 2);
  StepControl ctl;
  StopThresholds stops;
  stops.t_max = 0.0;
  auto traj = run(s, ctl, stops);
  CHECK(traj.event.kind == FlowEvent::Kind::MaxTime);
  CHECK(traj.event.t_event == 0.0);

  ctl.max_steps = 10;
  stops.t_max = 100.0;
  traj = run(build_initial_cap(cat, 1.0, 50, 2), ctl, stops);
  CHECK(traj.event.kind == FlowEvent::Kind::MaxTime);
  CHECK(traj.event.message == "step budget exhausted");
}

TEST_CASE("records carry consistent monitors") {
  const auto cat = SupportProfile::catenoid(1.0, kWin);
  auto s = build_initial_cap(cat, 1.0, 60, 2);
  const auto rec = make_record(s);
  CHECK(rec.t == 0.0);
  CHECK(rec.r == s.r);
  CHECK(rec.u_max == s.u.front());
  CHECK(rec.u_min == s.u.back());
  CHECK(rec.sup_A2 >= 0.0);
  CHECK(rec.sup_H >= std::abs(rec.h_min));
  CHECK(rec.sup_H >= std::abs(rec.h_max));
  CHECK(rec.area > 0.0);
  CHECK(rec.dissipation >= 0.0);
  CHECK(rec.boundary_grad == doctest::Approx(cat.eval(1.0).d1).epsilon(1e-12));
}
