#pragma once

#include <vector>

#include "mcf/profile.hpp"

namespace mcf {

// The evolving radial graph on a normalized moving mesh: physical radius
// y = s * r with s_i = i/M uniform on [0,1], u_i = omega(s_i r, t).
struct FlowState {
  int n = 2;          // ambient disk dimension
  double t = 0.0;
  double r = 0.0;     // boundary radius, > 0
  std::vector<double> u;
  const SupportProfile* profile = nullptr;
  Side side = Side::Right;  // branch used at a non-smooth pinch point

  int grid_size() const { return static_cast<int>(u.size()) - 1; }  // M
  double ds() const { return 1.0 / grid_size(); }
  double y(int i) const { return r * i * ds(); }
};

}  // namespace mcf
