#include "mcf/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace mcf::geometry {

double slope_factor(const GraphPoint& p) {
  return std::sqrt(1.0 + p.d1 * p.d1);
}

static void check_axis(const GraphPoint& p) {
  if (p.y == 0.0 && p.d1 != 0.0)
    throw std::domain_error("axis regularity: omega' must vanish at y = 0");
}

double mean_curvature(const GraphPoint& p) {
  check_axis(p);
  if (p.y == 0.0) return -p.n * p.d2;
  const double v = slope_factor(p);
  return -p.d2 / (v * v * v) - (p.n - 1) * p.d1 / (p.y * v);
}

double second_fundamental_norm(const GraphPoint& p) {
  check_axis(p);
  if (p.y == 0.0) return p.n * p.d2 * p.d2;
  const double v2 = 1.0 + p.d1 * p.d1;
  const double v6 = v2 * v2 * v2;
  return p.d2 * p.d2 / v6 + (p.n - 1) * p.d1 * p.d1 / (p.y * p.y * v2);
}

double neumann_residual(double omega_y_boundary, const SupportProfile& profile,
                        double z_boundary, Side side) {
  return omega_y_boundary + profile.eval(z_boundary, side).d1;
}

double boundary_gradient_bound(double c_sigma) {
  if (!(c_sigma > 0.0) || c_sigma > 1.0)
    throw std::domain_error("graph constant must lie in (0, 1]");
  return std::sqrt(1.0 / (c_sigma * c_sigma) - 1.0);
}

double sphere_measure(int n_minus_1) {
  // |S^{k}| = 2 pi^{(k+1)/2} / Gamma((k+1)/2)
  const double k1 = 0.5 * (n_minus_1 + 1);
  return 2.0 * std::pow(M_PI, k1) / std::tgamma(k1);
}

NodalGeometry compute_nodal(const FlowState& state) {
  const int M = state.grid_size();
  if (M < 3) throw std::invalid_argument("grid too coarse");
  const double dy = state.r * state.ds();
  const auto& u = state.u;
  NodalGeometry g;
  g.omega_y.resize(M + 1);
  g.omega_yy.resize(M + 1);

  g.omega_y[0] = 0.0;
  g.omega_yy[0] = 2.0 * (u[1] - u[0]) / (dy * dy);
  for (int i = 1; i < M; ++i) {
    g.omega_y[i] = (u[i + 1] - u[i - 1]) / (2.0 * dy);
    g.omega_yy[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dy * dy);
  }
  if (state.profile) {
    g.omega_y[M] = -state.profile->eval(u[M], state.side).d1;
  } else {
    g.omega_y[M] = (3.0 * u[M] - 4.0 * u[M - 1] + u[M - 2]) / (2.0 * dy);
  }
  g.omega_yy[M] =
      (2.0 * u[M] - 5.0 * u[M - 1] + 4.0 * u[M - 2] - u[M - 3]) / (dy * dy);

  g.v.resize(M + 1);
  g.H.resize(M + 1);
  g.A2.resize(M + 1);
  for (int i = 0; i <= M; ++i) {
    GraphPoint p{state.y(i), g.omega_y[i], g.omega_yy[i], state.n};
    if (i == 0) p.d1 = 0.0;
    g.v[i] = slope_factor(p);
    g.H[i] = mean_curvature(p);
    g.A2[i] = second_fundamental_norm(p);
  }
  return g;
}

// Composite Simpson over uniformly spaced nodal values; falls back to a
// 3/8 block on the last three intervals when the interval count is odd.
static double simpson(const std::vector<double>& f, double h) {
  const int m = static_cast<int>(f.size()) - 1;
  if (m < 1) return 0.0;
  if (m == 1) return 0.5 * h * (f[0] + f[1]);
  double total = 0.0;
  int even_end = (m % 2 == 0) ? m : m - 3;
  for (int i = 0; i + 2 <= even_end; i += 2)
    total += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  if (m % 2 != 0) {
    if (even_end >= 0 && m - even_end == 3) {
      total += 3.0 * h / 8.0 *
               (f[m - 3] + 3.0 * f[m - 2] + 3.0 * f[m - 1] + f[m]);
    } else {
      // m == 1 handled above; m == 3 goes through the 3/8 rule with even_end 0.
      total += 0.5 * h * (f[m - 1] + f[m]);
    }
  }
  return total;
}

double area(const FlowState& state) {
  const int M = state.grid_size();
  const auto g = compute_nodal(state);
  std::vector<double> f(M + 1);
  for (int i = 0; i <= M; ++i) f[i] = std::pow(state.y(i), state.n - 1) * g.v[i];
  return sphere_measure(state.n - 1) * simpson(f, state.r * state.ds());
}

double dissipation(const FlowState& state) {
  const int M = state.grid_size();
  const auto g = compute_nodal(state);
  std::vector<double> f(M + 1);
  for (int i = 0; i <= M; ++i)
    f[i] = g.H[i] * g.H[i] * std::pow(state.y(i), state.n - 1) * g.v[i];
  return sphere_measure(state.n - 1) * simpson(f, state.r * state.ds());
}

}  // namespace mcf::geometry
