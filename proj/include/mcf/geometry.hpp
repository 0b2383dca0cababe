#pragma once

#include <vector>

#include "mcf/profile.hpp"
#include "mcf/state.hpp"

namespace mcf::geometry {

// Pointwise data of the rotating radial graph.
struct GraphPoint {
  double y = 0.0;   // radius >= 0
  double d1 = 0.0;  // omega'
  double d2 = 0.0;  // omega''
  int n = 2;        // ambient disk dimension >= 2
};

// v = sqrt(1 + omega'^2)
double slope_factor(const GraphPoint& p);

// H = -omega''/v^3 - (n-1) omega'/(y v); at the axis H = -n omega''.
// Throws if y = 0 with omega' != 0 (axis regularity).
double mean_curvature(const GraphPoint& p);

// |A|^2 = omega''^2/v^6 + (n-1) omega'^2/(y^2 v^2); at the axis n omega''^2.
double second_fundamental_norm(const GraphPoint& p);

// omega'(boundary) + omega_Sigma'(z); zero iff the free-boundary
// perpendicularity condition holds.
double neumann_residual(double omega_y_boundary, const SupportProfile& profile,
                        double z_boundary, Side side = Side::Right);

// sqrt(1/C^2 - 1): the uniform bound on |omega'| at the Neumann boundary.
double boundary_gradient_bound(double c_sigma);

// Surface measure of the unit (n-1)-sphere in R^n.
double sphere_measure(int n_minus_1);

// Nodal slopes/curvatures of a state: interior by central differences,
// axis by the smooth limit, boundary slope from the Neumann condition.
struct NodalGeometry {
  std::vector<double> omega_y, omega_yy, v, H, A2;
};
NodalGeometry compute_nodal(const FlowState& state);

// sigma_{n-1} * integral_0^r y^{n-1} v dy (composite Simpson on the grid).
double area(const FlowState& state);

// sigma_{n-1} * integral_0^r H^2 y^{n-1} v dy.
double dissipation(const FlowState& state);

}  // namespace mcf::geometry
