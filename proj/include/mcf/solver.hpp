#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mcf/state.hpp"

namespace mcf {

struct StepControl {
  double cfl_safety = 0.4;   // in (0,1)
  double dt_min = 1e-15;
  double dt_max = 1e-2;
  long long max_steps = 200'000'000;
};

struct StopThresholds {
  double t_max = std::numeric_limits<double>::infinity();
  double eps_pinch_rel = 1e-3;  // pinch when r < eps_pinch_rel * r(0)
  double eps_H = 1e-5;
  double eps_r = 1e-6;
  int trailing_window = 50;     // records that must sit below the thresholds
  long long record_stride = 2000;
  double record_dt = std::numeric_limits<double>::infinity();
  bool keep_snapshots = false;
};

struct FlowEvent {
  enum class Kind { Converged, Pinched, MaxTime, StepFailure };
  Kind kind = Kind::MaxTime;
  double t_event = 0.0;
  FlowState final_state;
  std::string message;
};

struct TimeSeriesRecord {
  double t = 0.0;
  double r = 0.0;
  double sup_A2 = 0.0;
  double sup_H = 0.0;
  double area = 0.0;
  double boundary_grad = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  // extra monitors (not part of the CSV contract)
  double rprime = 0.0;
  double h_min = 0.0;  // signed min/max of nodal H
  double h_max = 0.0;
  double dissipation = 0.0;
};

struct Snapshot {
  double t = 0.0;
  double r = 0.0;
  std::vector<double> u;
};

struct Trajectory {
  std::vector<TimeSeriesRecord> records;
  std::vector<Snapshot> snapshots;
  FlowEvent event;
};

// Compatible quadratic cap u(y) = z0 + c (y^2 - r^2) + bump (1-(y/r)^2)^2
// with c = -omega_Sigma'(z0)/(2 r); satisfies the Neumann condition and the
// boundary identity exactly, and has mean curvature of sign -sign(c) when
// bump = 0.
FlowState build_initial_cap(const SupportProfile& profile, double z0, int grid_m,
                            int dim_n, double bump = 0.0);

// r' = -(H/v) omega_Sigma' at the boundary, with the boundary omega'' from a
// second-order one-sided stencil.
double boundary_speed(const FlowState& state);

// Nodal du/dt on the normalized mesh (axis limit at i = 0, Neumann ghost
// closure at i = M, moving-mesh advection term s (r'/r) u_s included).
std::vector<double> spatial_rhs(const FlowState& state, double rprime);

struct StepResult {
  bool ok = true;
  double dt = 0.0;
  std::string message;
};

// One explicit RK2 step with parabolic CFL dt, followed by Newton projection
// of u_M onto the constraint r = omega_Sigma(u_M).
StepResult step(FlowState& state, const StepControl& control,
                double dt_cap = std::numeric_limits<double>::infinity());

Trajectory run(FlowState state, const StepControl& control, const StopThresholds& stops);

TimeSeriesRecord make_record(const FlowState& state);

}  // namespace mcf
