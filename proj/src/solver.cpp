#include "mcf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mcf/geometry.hpp"

namespace mcf {

namespace {

constexpr double kProjectionTol = 1e-12;
constexpr double kProjectionAccept = 1e-8;  // fallback threshold near profile extrema

bool finite_state(const FlowState& s) {
  if (!std::isfinite(s.r) || !std::isfinite(s.t)) return false;
  for (double v : s.u)
    if (!std::isfinite(v)) return false;
  return true;
}

// Newton solve of omega_Sigma(x) = r in x, starting from the current u_M.
// Near a profile minimum the ODE value of r can undershoot the attainable
// range; in that case the boundary pair is projected the other way,
// r <- omega_Sigma(x) at the closest x found.
bool project_boundary(FlowState& s, std::string& msg) {
  const SupportProfile& prof = *s.profile;
  double x = s.u.back();
  double fx = prof.eval(x, s.side).value - s.r;
  const double scale = std::max(1.0, std::abs(s.r));
  for (int it = 0; it < 20; ++it) {
    if (std::abs(fx) <= kProjectionTol * scale) {
      s.u.back() = x;
      return true;
    }
    const double d = prof.eval(x, s.side).d1;
    if (std::abs(d) < 1e-14) break;
    double xn = x - fx / d;
    // keep the cone/power branch: never cross the apex
    if (prof.has_apex()) {
      const double apex = prof.apex();
      if (s.side == Side::Right && xn < apex) xn = 0.5 * (x + apex);
      if (s.side == Side::Left && xn > apex) xn = 0.5 * (x + apex);
    }
    const double fn = prof.eval(xn, s.side).value - s.r;
    if (!std::isfinite(fn)) break;
    x = xn;
    fx = fn;
  }
  if (std::abs(fx) <= kProjectionAccept * scale) {
    // Constraint manifold reached by moving r instead (flat extremum of the
    // profile: omega_Sigma' ~ 0 and the residual is already tiny).
    s.u.back() = x;
    s.r = prof.eval(x, s.side).value;
    return true;
  }
  msg = "boundary projection failed, residual " + std::to_string(fx);
  return false;
}

}  // namespace

FlowState build_initial_cap(const SupportProfile& profile, double z0, int grid_m,
                            int dim_n, double bump) {
  if (grid_m < 4) throw std::invalid_argument("need at least 4 grid intervals");
  if (dim_n < 2) throw std::invalid_argument("disk dimension must be >= 2");
  FlowState s;
  s.profile = &profile;
  s.n = dim_n;
  s.side = (profile.has_apex() && z0 < profile.apex()) ? Side::Left : Side::Right;
  const ProfileEval pe = profile.eval(z0, s.side);
  if (!(pe.value > 0.0))
    throw std::domain_error("initial boundary height sits at a pinch point");
  s.r = pe.value;
  const double c = -pe.d1 / (2.0 * s.r);
  s.u.resize(grid_m + 1);
  for (int i = 0; i <= grid_m; ++i) {
    const double y = s.y(i);
    const double q = 1.0 - (y / s.r) * (y / s.r);
    s.u[i] = z0 + c * (y * y - s.r * s.r) + bump * q * q;
  }
  return s;
}

double boundary_speed(const FlowState& state) {
  const int M = state.grid_size();
  const double dy = state.r * state.ds();
  const auto& u = state.u;
  const ProfileEval pe = state.profile->eval(u[M], state.side);
  const double wy = -pe.d1;
  // Compact one-sided second derivative closed with the Neumann slope
  // (same ghost closure as spatial_rhs; second order).
  const double ghost = u[M - 1] + 2.0 * dy * wy;
  const double wyy = (ghost - 2.0 * u[M] + u[M - 1]) / (dy * dy);
  const double v = std::sqrt(1.0 + wy * wy);
  const double H = -wyy / (v * v * v) - (state.n - 1) * wy / (state.r * v);
  return -(H / v) * pe.d1;
}

namespace {

// Nodal du/dt written into `ut`, working on raw value arrays so that the
// RK stages can reuse scratch storage.
void rhs_into(const SupportProfile& prof, Side side, int n, double r,
              const std::vector<double>& u, double rprime,
              std::vector<double>& ut) {
  const int M = static_cast<int>(u.size()) - 1;
  const double ds = 1.0 / M;
  ut.resize(u.size());

  // axis: u_t = n u_ss / r^2 (smooth limit of the rotational term)
  ut[0] = n * 2.0 * (u[1] - u[0]) / (ds * ds) / (r * r);

  const double adv = rprime / r;
  const double inv_2ds = 1.0 / (2.0 * ds);
  const double inv_ds2 = 1.0 / (ds * ds);
  const double inv_r = 1.0 / r;
  const double inv_r2 = inv_r * inv_r;
  for (int i = 1; i < M; ++i) {
    const double us = (u[i + 1] - u[i - 1]) * inv_2ds;
    const double uss = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_ds2;
    const double s = i * ds;
    const double wy = us * inv_r;
    const double wyy = uss * inv_r2;
    ut[i] = wyy / (1.0 + wy * wy) + (n - 1) * wy / (s * r) + s * adv * us;
  }

  // boundary: quadratic ghost enforcing u_s(1) = -r omega_Sigma'(u_M)
  {
    const double d1 = prof.eval(u[M], side).d1;
    const double ghost = u[M - 1] - 2.0 * ds * r * d1;
    const double us = (ghost - u[M - 1]) * inv_2ds;
    const double uss = (ghost - 2.0 * u[M] + u[M - 1]) * inv_ds2;
    const double wy = us * inv_r;
    const double wyy = uss * inv_r2;
    ut[M] = wyy / (1.0 + wy * wy) + (n - 1) * wy * inv_r + adv * us;
  }
}

double speed_of(const SupportProfile& prof, Side side, int n, double r,
                const std::vector<double>& u) {
  const int M = static_cast<int>(u.size()) - 1;
  const double dy = r / M;
  const ProfileEval pe = prof.eval(u[M], side);
  const double wy = -pe.d1;
  const double ghost = u[M - 1] + 2.0 * dy * wy;
  const double wyy = (ghost - 2.0 * u[M] + u[M - 1]) / (dy * dy);
  const double v = std::sqrt(1.0 + wy * wy);
  const double H = -wyy / (v * v * v) - (n - 1) * wy / (r * v);
  return -(H / v) * pe.d1;
}

struct StepScratch {
  std::vector<double> k1, k2, umid;
};

StepResult step_impl(FlowState& state, const StepControl& control, double dt_cap,
                     StepScratch& ws) {
  StepResult res;
  const double ds = state.ds();
  double dt = control.cfl_safety * (ds * state.r) * (ds * state.r) / 2.0;
  dt = std::clamp(dt, control.dt_min, control.dt_max);
  dt = std::min(dt, dt_cap);
  res.dt = dt;

  const SupportProfile& prof = *state.profile;
  const double rp1 = speed_of(prof, state.side, state.n, state.r, state.u);
  rhs_into(prof, state.side, state.n, state.r, state.u, rp1, ws.k1);

  ws.umid.resize(state.u.size());
  for (size_t i = 0; i < state.u.size(); ++i)
    ws.umid[i] = state.u[i] + dt * ws.k1[i];
  const double rmid = state.r + dt * rp1;
  if (!(rmid > 0.0) || !std::isfinite(ws.umid.back())) {
    res.ok = false;
    res.message = "non-finite intermediate state";
    return res;
  }

  const double rp2 = speed_of(prof, state.side, state.n, rmid, ws.umid);
  rhs_into(prof, state.side, state.n, rmid, ws.umid, rp2, ws.k2);

  for (size_t i = 0; i < state.u.size(); ++i)
    state.u[i] += 0.5 * dt * (ws.k1[i] + ws.k2[i]);
  state.r += 0.5 * dt * (rp1 + rp2);
  state.t += dt;

  if (!finite_state(state) || state.r <= 0.0) {
    res.ok = false;
    res.message = "non-finite state after update";
    return res;
  }
  if (!project_boundary(state, res.message)) {
    res.ok = false;
    return res;
  }
  return res;
}

}  // namespace

std::vector<double> spatial_rhs(const FlowState& state, double rprime) {
  std::vector<double> ut;
  rhs_into(*state.profile, state.side, state.n, state.r, state.u, rprime, ut);
  return ut;
}

StepResult step(FlowState& state, const StepControl& control, double dt_cap) {
  StepScratch ws;
  return step_impl(state, control, dt_cap, ws);
}

TimeSeriesRecord make_record(const FlowState& state) {
  TimeSeriesRecord rec;
  rec.t = state.t;
  rec.r = state.r;
  const auto g = geometry::compute_nodal(state);
  for (size_t i = 0; i < g.H.size(); ++i) {
    rec.sup_A2 = std::max(rec.sup_A2, g.A2[i]);
    rec.sup_H = std::max(rec.sup_H, std::abs(g.H[i]));
  }
  rec.h_min = *std::min_element(g.H.begin(), g.H.end());
  rec.h_max = *std::max_element(g.H.begin(), g.H.end());
  rec.area = geometry::area(state);
  rec.dissipation = geometry::dissipation(state);
  rec.boundary_grad = std::abs(g.omega_y.back());
  rec.u_min = *std::min_element(state.u.begin(), state.u.end());
  rec.u_max = *std::max_element(state.u.begin(), state.u.end());
  rec.rprime = boundary_speed(state);
  return rec;
}

Trajectory run(FlowState state, const StepControl& control, const StopThresholds& stops) {
  Trajectory traj;
  const double r0 = state.r;
  const double pinch_radius = stops.eps_pinch_rel * r0;
  long long steps = 0;
  double next_record_t = std::isfinite(stops.record_dt)
                             ? stops.record_dt
                             : std::numeric_limits<double>::infinity();

  auto record = [&](const FlowState& s) {
    traj.records.push_back(make_record(s));
    if (stops.keep_snapshots) traj.snapshots.push_back({s.t, s.r, s.u});
  };
  auto finish = [&](FlowEvent::Kind kind, std::string msg = {}) {
    traj.event.kind = kind;
    traj.event.t_event = state.t;
    traj.event.final_state = state;
    traj.event.message = std::move(msg);
    return traj;
  };

  record(state);

  while (true) {
    if (state.t >= stops.t_max) return finish(FlowEvent::Kind::MaxTime);
    if (steps >= control.max_steps)
      return finish(FlowEvent::Kind::MaxTime, "step budget exhausted");

    const double dt_cap = stops.t_max - state.t;
    const StepResult sr = step(state, control, dt_cap);
    ++steps;
    if (!sr.ok) {
      record(state);
      return finish(FlowEvent::Kind::StepFailure, sr.message);
    }

    const bool due_stride = (steps % stops.record_stride == 0);
    const bool due_time = state.t >= next_record_t;
    if (due_time) next_record_t += stops.record_dt;
    if (due_stride || due_time) {
      record(state);

      if (state.r < pinch_radius) return finish(FlowEvent::Kind::Pinched);

      const int W = stops.trailing_window;
      if (static_cast<int>(traj.records.size()) > W) {
        bool settled = true;
        for (size_t i = traj.records.size() - W; i < traj.records.size(); ++i) {
          const auto& rc = traj.records[i];
          if (rc.sup_H >= stops.eps_H || std::abs(rc.rprime) >= stops.eps_r) {
            settled = false;
            break;
          }
        }
        if (settled) return finish(FlowEvent::Kind::Converged);
      }
    } else if (state.r < pinch_radius) {
      record(state);
      return finish(FlowEvent::Kind::Pinched);
    }
  }
}

}  // namespace mcf
