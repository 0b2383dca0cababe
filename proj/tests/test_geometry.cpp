#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "mcf/geometry.hpp"
#include "mcf/profile.hpp"
#include "mcf/state.hpp"

using namespace mcf;
using namespace mcf::geometry;

namespace {

// Synthetic state with u(y) = f(y) on a uniform radial grid; no profile
// attached, so the boundary slope falls back to one-sided differences.
template <class F>
FlowState synthetic_state(F f, double r, int m, int n) {
  FlowState s;
  s.n = n;
  s.r = r;
  s.u.resize(m + 1);
  for (int i = 0; i <= m; ++i) s.u[i] = f(r * i / m);
  return s;
}

}  // namespace

TEST_CASE("pointwise curvature of a sphere") {
  // omega(y) = sqrt(R^2 - y^2): H = n/R, |A|^2 = n/R^2 at every point.
  const double R = 1.7;
  for (int n : {2, 3, 4}) {
    for (double y : {0.0, 0.3, 0.9, 1.4}) {
      const double w = std::sqrt(R * R - y * y);
      GraphPoint p{y, -y / w, -R * R / (w * w * w), n};
      if (y == 0.0) p.d1 = 0.0;
      CHECK(mean_curvature(p) == doctest::Approx(n / R).epsilon(1e-12));
      CHECK(second_fundamental_norm(p) == doctest::Approx(n / (R * R)).epsilon(1e-12));
    }
  }
}

TEST_CASE("pointwise curvature of a paraboloid") {
  // omega = y^2/2 at y = 1, n = 2: v = sqrt(2), H = -3/(2 sqrt 2), |A|^2 = 5/8
  GraphPoint p{1.0, 1.0, 1.0, 2};
  CHECK(slope_factor(p) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(mean_curvature(p) == doctest::Approx(-1.0606601717798212).epsilon(1e-14));
  CHECK(second_fundamental_norm(p) == doctest::Approx(0.625).epsilon(1e-14));
}

TEST_CASE("axis limit and regularity") {
  GraphPoint p{0.0, 0.0, 0.5, 3};
  CHECK(mean_curvature(p) == doctest::Approx(-1.5).epsilon(1e-15));
  CHECK(second_fundamental_norm(p) == doctest::Approx(0.75).epsilon(1e-15));
  GraphPoint bad{0.0, 0.1, 0.0, 2};
  CHECK_THROWS_AS(mean_curvature(bad), std::domain_error);
  CHECK_THROWS_AS(second_fundamental_norm(bad), std::domain_error);
}

TEST_CASE("H^2 <= n |A|^2 pointwise") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    GraphPoint p{0.1 + std::abs(dist(rng)), dist(rng), dist(rng), 2 + k % 3};
    CHECK(mean_curvature(p) * mean_curvature(p) <=
          p.n * second_fundamental_norm(p) + 1e-13);
  }
}

TEST_CASE("neumann residual") {
  const auto cat = SupportProfile::catenoid(1.0, Window{-2.0, 2.0});
  CHECK(neumann_residual(-1.1752011936438014, cat, 1.0) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(neumann_residual(0.0, cat, 1.0) ==
        doctest::Approx(1.1752011936438014).epsilon(1e-14));
  const auto cone = SupportProfile::cone(1.0, 0.0, Window{-2.0, 2.0});
  CHECK(neumann_residual(0.0, cone, 0.0, Side::Right) == 1.0);
  CHECK(neumann_residual(0.0, cone, 0.0, Side::Left) == -1.0);
}

TEST_CASE("boundary gradient bound") {
  CHECK(boundary_gradient_bound(1.0) == 0.0);
  CHECK(boundary_gradient_bound(1.0 / std::sqrt(2.0)) == doctest::Approx(1.0).epsilon(1e-14));
  // catenoid window [-1,1]: C = 1/cosh(1), bound = sinh(1)
  CHECK(boundary_gradient_bound(0.6480542736638854) ==
        doctest::Approx(1.1752011936438014).epsilon(1e-12));
  CHECK_THROWS_AS(boundary_gradient_bound(0.0), std::domain_error);
  CHECK_THROWS_AS(boundary_gradient_bound(1.5), std::domain_error);
}

TEST_CASE("unit sphere measures") {
  CHECK(sphere_measure(1) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_measure(2) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_measure(3) == doctest::Approx(19.739208802178716).epsilon(1e-14));
}

TEST_CASE("flat disk area is exact") {
  const double r = 1.3;
  for (int n : {2, 3, 4}) {
    auto s = synthetic_state([](double) { return 0.7; }, r, 400, n);
    const double expect = sphere_measure(n - 1) * std::pow(r, n) / n;
    CHECK(area(s) == doctest::Approx(expect).epsilon(1e-10));
    CHECK(dissipation(s) == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));
  }
}

TEST_CASE("spherical cap area against closed form") {
  const double R = 2.0, r = 1.0;
  auto cap = [R](double y) { return std::sqrt(R * R - y * y); };
  auto s2 = synthetic_state(cap, r, 2000, 2);
  CHECK(area(s2) == doctest::Approx(3.3671488579077317).epsilon(1e-8));
  auto s3 = synthetic_state(cap, r, 2000, 3);
  CHECK(area(s3) == doctest::Approx(4.5533526987610088).epsilon(1e-8));
  // constant-H surface: dissipation = (n/R)^2 * area
  CHECK(dissipation(s2) == doctest::Approx((2.0 / R) * (2.0 / R) * area(s2)).epsilon(1e-4));
}

TEST_CASE("odd interval counts integrate cleanly") {
  // quartic integrand, odd M exercises the 3/8 tail block
  for (int m : {7, 101, 399}) {
    auto s = synthetic_state([](double) { return 1.0; }, 2.0, m, 4);
    const double expect = sphere_measure(3) * std::pow(2.0, 4) / 4.0;
    CHECK(area(s) == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("nodal geometry of an attached cap") {
  const auto cat = SupportProfile::catenoid(1.0, Window{-2.5, 2.5});
  // quadratic cap u = z0 + c (y^2 - r^2), compatible with the profile
  const double z0 = 1.0;
  const auto pe = cat.eval(z0);
  const double r = pe.value;
  const double c = -pe.d1 / (2.0 * r);
  const int M = 200;
  FlowState s;
  s.profile = &cat;
  s.n = 2;
  s.r = r;
  s.u.resize(M + 1);
  for (int i = 0; i <= M; ++i) {
    const double y = r * i / M;
    s.u[i] = z0 + c * (y * y - r * r);
  }
  const auto g = compute_nodal(s);
  // boundary slope comes straight from the Neumann condition
  CHECK(g.omega_y[M] == doctest::Approx(-pe.d1).epsilon(1e-14));
  CHECK(neumann_residual(g.omega_y[M], cat, s.u[M]) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  // exact curvature of the cap: omega' = 2cy, omega'' = 2c
  for (int i : {0, 50, 100, 150, 200}) {
    const double y = r * i / M;
    GraphPoint p{y, 2 * c * y, 2 * c, 2};
    CHECK(g.H[i] == doctest::Approx(mean_curvature(p)).epsilon(1e-5));
    CHECK(g.A2[i] == doctest::Approx(second_fundamental_norm(p)).epsilon(1e-5));
  }
}

TEST_CASE("nodal curvature converges at second order") {
  // smooth non-polynomial graph; compare sup-error at M and 2M
  auto f = [](double y) { return std::cos(y) + 0.1 * y * y; };
  auto exact_H = [](double y) {
    const double d1 = -std::sin(y) + 0.2 * y;
    const double d2 = -std::cos(y) + 0.2;
    GraphPoint p{y, d1, d2, 2};
    if (y == 0.0) p.d1 = 0.0;
    return mean_curvature(p);
  };
  auto sup_err = [&](int m) {
    auto s = synthetic_state(f, 1.0, m, 2);
    const auto g = compute_nodal(s);
    double worst = 0.0;
    // skip the boundary node: slope there is one-sided without a profile
    for (int i = 0; i < m; ++i)
      worst = std::max(worst, std::abs(g.H[i] - exact_H(s.y(i))));
    return worst;
  };
  const double e1 = sup_err(100), e2 = sup_err(200);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 1.8);
}
