#pragma once

#include <string>
#include <vector>

namespace mcf {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double z) const { return z >= lo && z <= hi; }
};

// Value of the profile curve together with its first two z-derivatives.
struct ProfileEval {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// Which one-sided derivative to use at a non-smooth pinch point (cone apex).
enum class Side { Left, Right };

// Per-end asymptotic flags: does the profile satisfy the no-limit condition
// and/or the outward-slope condition at each end of the axis.
struct AsymptoticFlags {
  bool eqcondn_neg = false;
  bool noshrink_neg = false;
  bool eqcondn_pos = false;
  bool noshrink_pos = false;
  // Tabulated profiles can only be inspected on their window; analytic
  // catalog entries carry closed-form flags.
  bool window_only = false;
};

// Generating curve of the rotationally symmetric support hypersurface.
// Immutable after construction; safe to share between concurrent runs.
class SupportProfile {
public:
  enum class Kind {
    Cylinder,
    Catenoid,
    Cosine,
    Cone,
    Power,
    ReciprocalMollified,
    GaussianBump,
    Tabulated
  };

  static SupportProfile cylinder(double radius, Window w);
  static SupportProfile catenoid(double a, Window w);
  // A + B cos(k z); A > |B| keeps the profile positive.
  static SupportProfile cosine(double a, double b, double k, Window w);
  // m |z - apex|
  static SupportProfile cone(double slope, double apex, Window w);
  // c |z - apex|^alpha
  static SupportProfile power(double coeff, double alpha, double apex, Window w);
  // 1/z for z above the knee, its tangent line below, blended C2 near the knee.
  static SupportProfile reciprocal_mollified(double knee, Window w);
  // 2 - exp(-z^2)
  static SupportProfile gaussian_bump(Window w);
  // Cubic spline through strictly increasing samples, not-a-knot ends.
  static SupportProfile tabulated(std::vector<double> z, std::vector<double> values);

  Kind kind() const { return kind_; }
  const Window& window() const { return window_; }
  std::string describe() const;

  // omega_Sigma(z) with first two derivatives. Tabulated profiles reject
  // out-of-window queries; analytic kinds evaluate anywhere. At a cone or
  // power apex the derivative is one-sided, chosen by `side`.
  ProfileEval eval(double z, Side side = Side::Right) const;

  AsymptoticFlags asymptotic_flags() const;

  // Apex of a pinching catalog profile (cone/power), if any.
  bool has_apex() const;
  double apex() const { return p3_; }

  // Exponent sigma with |omega'| ~ |omega|^sigma near the pinch point.
  // Cone: 0. Power alpha: 1 - 1/alpha. Negative return means not applicable.
  double pinch_sigma() const;

private:
  SupportProfile() = default;

  Kind kind_ = Kind::Cylinder;
  Window window_{};
  double p1_ = 0.0, p2_ = 0.0, p3_ = 0.0;
  // Tabulated data: knots, values, and spline second derivatives.
  std::vector<double> tz_, tv_, tm_;
};

struct CriticalPoint {
  enum class Kind { StrictMin, StrictMax, DegenerateFlat };
  double z = 0.0;
  Kind kind = Kind::StrictMin;
};

struct Region {
  enum class Kind { ShrinkingNeck, Belly, FlatDegenerate };
  double z1 = 0.0;
  double z2 = 0.0;
  Kind kind = Kind::ShrinkingNeck;
};

struct RegionDecomposition {
  std::vector<Region> regions;
  std::vector<CriticalPoint> critical_points;
  std::vector<double> pinch_points;
};

// inf over the window of 1/sqrt(1 + omega'^2). Throws if the infimum is
// not strictly positive (graph condition violated).
double graph_constant(const SupportProfile& profile, const Window& w);
double graph_constant(const SupportProfile& profile);

std::vector<CriticalPoint> critical_points(const SupportProfile& profile, const Window& w);

RegionDecomposition classify_regions(const SupportProfile& profile, const Window& w);

std::vector<double> pinch_points(const SupportProfile& profile, const Window& w);

// Axis coordinates where omega'/sqrt(1+omega'^2) = -cos(angle).
// Empty output signals the non-equilibrium obstruction for that angle.
std::vector<double> contact_angle_equilibria(const SupportProfile& profile,
                                             const Window& w, double angle);

}  // namespace mcf
