#include "mcf/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcf {

namespace {

constexpr int kSamplesPerWindow = 4096;
constexpr double kRootTol = 1e-10;      // bisection tolerance in z
constexpr double kFlatTol = 1e-12;      // variation threshold for degenerate flats
constexpr double kPinchValueTol = 1e-8; // omega below this counts as a pinch
constexpr double kGraphPositivityTol = 1e-12;

// Quintic smoothstep and derivatives, C2 blend weight on [0,1].
void smoothstep5(double x, double& w, double& dw, double& ddw) {
  if (x <= 0.0) { w = 0.0; dw = 0.0; ddw = 0.0; return; }
  if (x >= 1.0) { w = 1.0; dw = 0.0; ddw = 0.0; return; }
  w = x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
  dw = 30.0 * x * x * (1.0 - x) * (1.0 - x);
  ddw = 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
}

// Not-a-knot cubic spline second derivatives via the Thomas algorithm with
// the end conditions folded into the first and last interior rows.
std::vector<double> spline_second_derivatives(const std::vector<double>& x,
                                              const std::vector<double>& y) {
  const size_t n = x.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;  // linear interpolant
  if (n == 3) {
    // Single parabola through three points: constant second derivative.
    const double h0 = x[1] - x[0], h1 = x[2] - x[1];
    const double d = 2.0 * ((y[2] - y[1]) / h1 - (y[1] - y[0]) / h0) / (h0 + h1);
    m.assign(n, d);
    return m;
  }

  const size_t k = n - 2;  // unknowns m[1..n-2]
  std::vector<double> a(k), b(k), c(k), r(k);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double hl = x[i] - x[i - 1];
    const double hr = x[i + 1] - x[i];
    a[i - 1] = hl;
    b[i - 1] = 2.0 * (hl + hr);
    c[i - 1] = hr;
    r[i - 1] = 6.0 * ((y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl);
  }
  // Not-a-knot left: m0 = m1 - h0 (m2 - m1)/h1.
  {
    const double h0 = x[1] - x[0], h1 = x[2] - x[1];
    b[0] += a[0] * (1.0 + h0 / h1);
    c[0] -= a[0] * h0 / h1;
    a[0] = 0.0;
  }
  // Not-a-knot right: m_{n-1} = m_{n-2} + h_{n-2} (m_{n-2} - m_{n-3})/h_{n-3}.
  {
    const double hm = x[n - 1] - x[n - 2], hp = x[n - 2] - x[n - 3];
    b[k - 1] += c[k - 1] * (1.0 + hm / hp);
    a[k - 1] -= c[k - 1] * hm / hp;
    c[k - 1] = 0.0;
  }
  // Thomas sweep.
  for (size_t i = 1; i < k; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    r[i] -= w * r[i - 1];
  }
  std::vector<double> sol(k);
  sol[k - 1] = r[k - 1] / b[k - 1];
  for (size_t i = k - 1; i-- > 0;) sol[i] = (r[i] - c[i] * sol[i + 1]) / b[i];
  for (size_t i = 0; i < k; ++i) m[i + 1] = sol[i];
  {
    const double h0 = x[1] - x[0], h1 = x[2] - x[1];
    m[0] = m[1] - h0 * (m[2] - m[1]) / h1;
    const double hm = x[n - 1] - x[n - 2], hp = x[n - 2] - x[n - 3];
    m[n - 1] = m[n - 2] + hm * (m[n - 2] - m[n - 3]) / hp;
  }
  return m;
}

}  // namespace

SupportProfile SupportProfile::cylinder(double radius, Window w) {
  if (radius <= 0.0) throw std::invalid_argument("cylinder radius must be positive");
  SupportProfile p;
  p.kind_ = Kind::Cylinder;
  p.p1_ = radius;
  p.window_ = w;
  return p;
}

SupportProfile SupportProfile::catenoid(double a, Window w) {
  if (a <= 0.0) throw std::invalid_argument("catenoid parameter must be positive");
  SupportProfile p;
  p.kind_ = Kind::Catenoid;
  p.p1_ = a;
  p.window_ = w;
  return p;
}

SupportProfile SupportProfile::cosine(double a, double b, double k, Window w) {
  if (a - std::abs(b) < 0.0) throw std::invalid_argument("cosine profile must stay nonnegative");
  SupportProfile p;
  p.kind_ = Kind::Cosine;
  p.p1_ = a;
  p.p2_ = b;
  p.p3_ = k;
  p.window_ = w;
  return p;
}

SupportProfile SupportProfile::cone(double slope, double apex, Window w) {
  if (slope <= 0.0) throw std::invalid_argument("cone slope must be positive");
  SupportProfile p;
  p.kind_ = Kind::Cone;
  p.p1_ = slope;
  p.p3_ = apex;
  p.window_ = w;
  return p;
}

SupportProfile SupportProfile::power(double coeff, double alpha, double apex, Window w) {
  if (coeff <= 0.0 || alpha <= 0.0)
    throw std::invalid_argument("power profile needs positive coefficient and exponent");
  SupportProfile p;
  p.kind_ = Kind::Power;
  p.p1_ = coeff;
  p.p2_ = alpha;
  p.p3_ = apex;
  p.window_ = w;
  return p;
}

SupportProfile SupportProfile::reciprocal_mollified(double knee, Window w) {
  if (knee <= 0.0) throw std::invalid_argument("knee must be positive");
  SupportProfile p;
  p.kind_ = Kind::ReciprocalMollified;
  p.p1_ = knee;
  p.window_ = w;
  return p;
}

SupportProfile SupportProfile::gaussian_bump(Window w) {
  SupportProfile p;
  p.kind_ = Kind::GaussianBump;
  p.window_ = w;
  return p;
}

SupportProfile SupportProfile::tabulated(std::vector<double> z, std::vector<double> values) {
  if (z.size() != values.size() || z.size() < 2)
    throw std::invalid_argument("tabulated profile needs >= 2 matching samples");
  for (size_t i = 1; i < z.size(); ++i)
    if (!(z[i] > z[i - 1]))
      throw std::invalid_argument("tabulated samples must be strictly increasing in z");
  for (double v : values)
    if (v < 0.0) throw std::invalid_argument("tabulated profile values must be nonnegative");
  SupportProfile p;
  p.kind_ = Kind::Tabulated;
  p.window_ = Window{z.front(), z.back()};
  p.tm_ = spline_second_derivatives(z, values);
  p.tz_ = std::move(z);
  p.tv_ = std::move(values);
  return p;
}

std::string SupportProfile::describe() const {
  switch (kind_) {
    case Kind::Cylinder: return "cylinder(R=" + std::to_string(p1_) + ")";
    case Kind::Catenoid: return "catenoid(a=" + std::to_string(p1_) + ")";
    case Kind::Cosine:
      return "cosine(A=" + std::to_string(p1_) + ",B=" + std::to_string(p2_) +
             ",k=" + std::to_string(p3_) + ")";
    case Kind::Cone:
      return "cone(m=" + std::to_string(p1_) + ",z*=" + std::to_string(p3_) + ")";
    case Kind::Power:
      return "power(c=" + std::to_string(p1_) + ",alpha=" + std::to_string(p2_) +
             ",z*=" + std::to_string(p3_) + ")";
    case Kind::ReciprocalMollified:
      return "reciprocal-mollified(knee=" + std::to_string(p1_) + ")";
    case Kind::GaussianBump: return "gaussian-bump";
    case Kind::Tabulated: return "tabulated(" + std::to_string(tz_.size()) + " samples)";
  }
  return "?";
}

bool SupportProfile::has_apex() const {
  return kind_ == Kind::Cone || kind_ == Kind::Power;
}

double SupportProfile::pinch_sigma() const {
  if (kind_ == Kind::Cone) return 0.0;
  if (kind_ == Kind::Power) return 1.0 - 1.0 / p2_;
  return -1.0;
}

ProfileEval SupportProfile::eval(double z, Side side) const {
  ProfileEval e;
  switch (kind_) {
    case Kind::Cylinder:
      e.value = p1_;
      return e;
    case Kind::Catenoid: {
      const double a = p1_;
      e.value = a * std::cosh(z / a);
      e.d1 = std::sinh(z / a);
      e.d2 = std::cosh(z / a) / a;
      return e;
    }
    case Kind::Cosine: {
      const double k = p3_;
      e.value = p1_ + p2_ * std::cos(k * z);
      e.d1 = -p2_ * k * std::sin(k * z);
      e.d2 = -p2_ * k * k * std::cos(k * z);
      return e;
    }
    case Kind::Cone: {
      const double d = z - p3_;
      if (d > 0.0 || (d == 0.0 && side == Side::Right)) {
        e.value = p1_ * d;
        e.d1 = p1_;
      } else {
        e.value = -p1_ * d;
        e.d1 = -p1_;
      }
      return e;
    }
    case Kind::Power: {
      const double d = z - p3_;
      const double ad = std::abs(d);
      const double sgn = (d > 0.0 || (d == 0.0 && side == Side::Right)) ? 1.0 : -1.0;
      e.value = p1_ * std::pow(ad, p2_);
      if (ad > 0.0) {
        e.d1 = sgn * p1_ * p2_ * std::pow(ad, p2_ - 1.0);
        e.d2 = p1_ * p2_ * (p2_ - 1.0) * std::pow(ad, p2_ - 2.0);
      } else {
        // One-sided values at the apex.
        if (p2_ > 1.0)
          e.d1 = 0.0;
        else if (p2_ == 1.0)
          e.d1 = sgn * p1_;
        else
          e.d1 = sgn * std::numeric_limits<double>::infinity();  // cusp
        e.d2 = (p2_ == 2.0) ? 2.0 * p1_ : 0.0;
      }
      return e;
    }
    case Kind::ReciprocalMollified: {
      const double zk = p1_;
      const double delta = 0.1 * zk;
      const double lin_v = (2.0 * zk - z) / (zk * zk);
      const double lin_d1 = -1.0 / (zk * zk);
      if (z <= zk - delta) {
        e.value = lin_v;
        e.d1 = lin_d1;
        return e;
      }
      const double rec_v = 1.0 / z;
      const double rec_d1 = -1.0 / (z * z);
      const double rec_d2 = 2.0 / (z * z * z);
      if (z >= zk + delta) {
        e.value = rec_v;
        e.d1 = rec_d1;
        e.d2 = rec_d2;
        return e;
      }
      double w, dw, ddw;
      const double span = 2.0 * delta;
      smoothstep5((z - (zk - delta)) / span, w, dw, ddw);
      dw /= span;
      ddw /= span * span;
      const double g = rec_v - lin_v;
      const double g1 = rec_d1 - lin_d1;
      const double g2 = rec_d2;
      e.value = lin_v + w * g;
      e.d1 = lin_d1 + dw * g + w * g1;
      e.d2 = ddw * g + 2.0 * dw * g1 + w * g2;
      return e;
    }
    case Kind::GaussianBump: {
      const double ex = std::exp(-z * z);
      e.value = 2.0 - ex;
      e.d1 = 2.0 * z * ex;
      e.d2 = (2.0 - 4.0 * z * z) * ex;
      return e;
    }
    case Kind::Tabulated: {
      if (z < tz_.front() || z > tz_.back())
        throw std::domain_error("tabulated profile queried outside its window");
      size_t j = std::upper_bound(tz_.begin(), tz_.end(), z) - tz_.begin();
      if (j == 0) j = 1;
      if (j == tz_.size()) j = tz_.size() - 1;
      const double h = tz_[j] - tz_[j - 1];
      const double A = (tz_[j] - z) / h;
      const double B = (z - tz_[j - 1]) / h;
      e.value = A * tv_[j - 1] + B * tv_[j] +
                ((A * A * A - A) * tm_[j - 1] + (B * B * B - B) * tm_[j]) * h * h / 6.0;
      e.d1 = (tv_[j] - tv_[j - 1]) / h +
             ((1.0 - 3.0 * A * A) * tm_[j - 1] + (3.0 * B * B - 1.0) * tm_[j]) * h / 6.0;
      e.d2 = A * tm_[j - 1] + B * tm_[j];
      return e;
    }
  }
  return e;
}

AsymptoticFlags SupportProfile::asymptotic_flags() const {
  AsymptoticFlags f;
  switch (kind_) {
    case Kind::Cylinder:
      // Constant profile: limit exists, slope vanishes.
      break;
    case Kind::Catenoid:
      f = {true, true, true, true, false};
      break;
    case Kind::Cosine:
      if (p2_ != 0.0) f = {true, false, true, false, false};
      break;
    case Kind::Cone:
    case Kind::Power:
      f = {true, true, true, true, false};
      break;
    case Kind::ReciprocalMollified:
      // Linear growth to the left; decays to zero on the right.
      f = {true, true, false, false, false};
      break;
    case Kind::GaussianBump:
      f = {false, true, false, true, false};
      break;
    case Kind::Tabulated: {
      f.window_only = true;
      // Best effort on the window: slope direction at the ends, value trend.
      const double zl = tz_.front(), zr = tz_.back();
      f.noshrink_neg = zl < 0.0 && eval(zl).d1 < 0.0;
      f.noshrink_pos = zr > 0.0 && eval(zr).d1 > 0.0;
      f.eqcondn_neg = false;
      f.eqcondn_pos = false;
      break;
    }
  }
  return f;
}

namespace {

double profile_d1(const SupportProfile& p, double z) { return p.eval(z).d1; }

// Bisect a sign change of omega' inside [a,b] down to kRootTol.
double bisect_d1(const SupportProfile& p, double a, double b, double fa) {
  for (int it = 0; it < 200 && (b - a) > kRootTol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = profile_d1(p, m);
    if (fm == 0.0) return m;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double graph_constant(const SupportProfile& profile, const Window& w) {
  if (!(w.width() > 0.0)) throw std::invalid_argument("degenerate window");
  const int n = 2 * kSamplesPerWindow;
  double max_abs_d1 = 0.0;
  double argmax = w.lo;
  for (int i = 0; i <= n; ++i) {
    const double z = w.lo + w.width() * i / n;
    const double d = std::abs(profile.eval(z).d1);
    if (d > max_abs_d1) {
      max_abs_d1 = d;
      argmax = z;
    }
  }
  // Ternary refinement of the interior maximum of |omega'|.
  double a = std::max(w.lo, argmax - w.width() / n);
  double b = std::min(w.hi, argmax + w.width() / n);
  for (int it = 0; it < 200 && (b - a) > kRootTol; ++it) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (std::abs(profile.eval(m1).d1) < std::abs(profile.eval(m2).d1))
      a = m1;
    else
      b = m2;
  }
  max_abs_d1 = std::max(max_abs_d1, std::abs(profile.eval(0.5 * (a + b)).d1));
  const double c = 1.0 / std::sqrt(1.0 + max_abs_d1 * max_abs_d1);
  if (c < kGraphPositivityTol)
    throw std::domain_error("graph condition violated: infimum of <nu,e1> not positive");
  return c;
}

double graph_constant(const SupportProfile& profile) {
  return graph_constant(profile, profile.window());
}

std::vector<CriticalPoint> critical_points(const SupportProfile& profile, const Window& w) {
  std::vector<CriticalPoint> out;
  if (!(w.width() > 0.0)) return out;
  const int n = kSamplesPerWindow;
  const double h = w.width() / n;
  double prev_z = w.lo;
  double prev_d = profile_d1(profile, prev_z);
  for (int i = 1; i <= n; ++i) {
    const double z = w.lo + i * h;
    const double d = profile_d1(profile, z);
    if (prev_d == 0.0 || (prev_d < 0.0) != (d < 0.0)) {
      const double root = (prev_d == 0.0) ? prev_z : bisect_d1(profile, prev_z, z, prev_d);
      if (out.empty() || root - out.back().z > 10.0 * kRootTol) {
        CriticalPoint cp;
        cp.z = root;
        const double dz = std::max(h, 1e-6 * std::max(1.0, std::abs(root)));
        const double v0 = profile.eval(root).value;
        const double vl = profile.eval(std::max(w.lo, root - dz)).value;
        const double vr = profile.eval(std::min(w.hi, root + dz)).value;
        if (std::abs(vl - v0) < kFlatTol && std::abs(vr - v0) < kFlatTol)
          cp.kind = CriticalPoint::Kind::DegenerateFlat;
        else if (vl >= v0 && vr >= v0)
          cp.kind = CriticalPoint::Kind::StrictMin;
        else if (vl <= v0 && vr <= v0)
          cp.kind = CriticalPoint::Kind::StrictMax;
        else
          cp.kind = CriticalPoint::Kind::DegenerateFlat;
        out.push_back(cp);
      }
    }
    prev_z = z;
    prev_d = d;
  }
  return out;
}

RegionDecomposition classify_regions(const SupportProfile& profile, const Window& w) {
  RegionDecomposition dec;
  dec.critical_points = critical_points(profile, w);
  dec.pinch_points = pinch_points(profile, w);

  // A profile that is constant on the window is one flat-degenerate region.
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -vmin;
  for (int i = 0; i <= kSamplesPerWindow; ++i) {
    const double v = profile.eval(w.lo + w.width() * i / kSamplesPerWindow).value;
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  if (vmax - vmin < kFlatTol) {
    dec.regions.push_back({w.lo, w.hi, Region::Kind::FlatDegenerate});
    return dec;
  }

  std::vector<CriticalPoint> cps;
  for (const auto& cp : dec.critical_points)
    if (cp.kind != CriticalPoint::Kind::DegenerateFlat) cps.push_back(cp);

  if (cps.empty()) {
    // Monotone window: vacuously a neck (no interior critical points).
    dec.regions.push_back({w.lo, w.hi, Region::Kind::ShrinkingNeck});
    return dec;
  }

  // Boundaries at midpoints between adjacent critical points of opposite
  // kind, so every critical point sits in the interior of a region of the
  // matching kind.
  auto kind_of = [](const CriticalPoint& cp) {
    return cp.kind == CriticalPoint::Kind::StrictMin ? Region::Kind::ShrinkingNeck
                                                     : Region::Kind::Belly;
  };
  double left = w.lo;
  Region::Kind cur = kind_of(cps.front());
  for (size_t i = 1; i < cps.size(); ++i) {
    const Region::Kind k = kind_of(cps[i]);
    if (k != cur) {
      const double split = 0.5 * (cps[i - 1].z + cps[i].z);
      dec.regions.push_back({left, split, cur});
      left = split;
      cur = k;
    }
  }
  dec.regions.push_back({left, w.hi, cur});
  return dec;
}

std::vector<double> pinch_points(const SupportProfile& profile, const Window& w) {
  std::vector<double> out;
  if (!(w.width() > 0.0)) return out;
  const int n = kSamplesPerWindow;
  const double h = w.width() / n;
  auto push_if_pinch = [&](double z) {
    if (profile.eval(z).value <= kPinchValueTol) {
      if (out.empty() || z - out.back() > 10.0 * kRootTol) out.push_back(z);
    }
  };
  // Endpoints can pinch without an interior derivative sign change.
  push_if_pinch(w.lo);
  double prev_z = w.lo;
  double prev_d = profile_d1(profile, prev_z);
  for (int i = 1; i <= n; ++i) {
    const double z = w.lo + i * h;
    const double d = profile_d1(profile, z);
    // omega >= 0, so zeros are minima: locate derivative sign changes - to +.
    if (prev_d < 0.0 && d >= 0.0) {
      const double root = bisect_d1(profile, prev_z, z, prev_d);
      push_if_pinch(root);
    }
    prev_z = z;
    prev_d = d;
  }
  push_if_pinch(w.hi);
  return out;
}

std::vector<double> contact_angle_equilibria(const SupportProfile& profile,
                                             const Window& w, double angle) {
  if (!(angle > 0.0) || !(angle < M_PI))
    throw std::invalid_argument("contact angle must lie in (0, pi)");
  const double target = -std::cos(angle);
  auto g = [&](double z) {
    const double d = profile.eval(z).d1;
    return d / std::sqrt(1.0 + d * d) - target;
  };
  std::vector<double> out;
  const int n = kSamplesPerWindow;
  const double h = w.width() / n;
  double prev_z = w.lo;
  double prev_g = g(prev_z);
  for (int i = 1; i <= n; ++i) {
    const double z = w.lo + i * h;
    const double gz = g(z);
    if (prev_g == 0.0 || (prev_g < 0.0) != (gz < 0.0)) {
      double a = prev_z, b = z, fa = prev_g;
      for (int it = 0; it < 200 && (b - a) > kRootTol; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = g(m);
        if (fm == 0.0) { a = b = m; break; }
        if ((fa < 0.0) == (fm < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const double root = 0.5 * (a + b);
      if (out.empty() || root - out.back() > 10.0 * kRootTol) out.push_back(root);
    }
    prev_z = z;
    prev_g = gz;
  }
  return out;
}

}  // namespace mcf
