#include "mcf/analysis.hpp"

#include "mcf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcf::analysis {

namespace {

// Longest suffix of records with strictly decreasing r, capped in length.
std::vector<const TimeSeriesRecord*> trailing_decreasing(
    const std::vector<TimeSeriesRecord>& series, size_t max_window) {
  std::vector<const TimeSeriesRecord*> out;
  if (series.empty()) return out;
  size_t begin = series.size() - 1;
  while (begin > 0 && series[begin - 1].r > series[begin].r &&
         series.size() - begin < max_window)
    --begin;
  for (size_t i = begin; i < series.size(); ++i) out.push_back(&series[i]);
  return out;
}

struct LinFit {
  double b0 = 0.0, b1 = 0.0, rms = 0.0, stderr_b1 = 0.0;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinFit f;
  f.b1 = sxy / sxx;
  f.b0 = my - f.b1 * mx;
  double ss = 0;
  for (size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.b0 + f.b1 * x[i]);
    ss += e * e;
  }
  f.rms = std::sqrt(ss / n);
  f.stderr_b1 = (n > 2) ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
  return f;
}

}  // namespace

BlowupFit estimate_blowup_time(const std::vector<TimeSeriesRecord>& series,
                               std::vector<double> p_candidates,
                               size_t max_window) {
  const auto win = trailing_decreasing(series, max_window);
  if (win.size() < 8)
    throw std::runtime_error("not pinching: fewer than 8 trailing records with decreasing r");
  std::vector<double> t(win.size());
  for (size_t i = 0; i < win.size(); ++i) t[i] = win[i]->t;

  BlowupFit best;
  bool have = false;
  for (double p : p_candidates) {
    std::vector<double> rp(win.size());
    for (size_t i = 0; i < win.size(); ++i) rp[i] = std::pow(win[i]->r, p);
    const LinFit f = linear_fit(t, rp);
    if (!(f.b1 < 0.0)) continue;
    BlowupFit cand;
    cand.t_blowup = -f.b0 / f.b1;
    cand.p = p;
    cand.rms_residual = f.rms / std::abs(rp.front());  // relative to window start
    cand.window = win.size();
    if (cand.t_blowup <= t.back()) continue;
    if (!have || cand.rms_residual < best.rms_residual) {
      best = cand;
      have = true;
    }
  }
  if (!have) throw std::runtime_error("not pinching: no candidate fit with shrinking r");
  return best;
}

ExponentFit fit_blowup_exponent(const std::vector<TimeSeriesRecord>& series,
                                double t_est, size_t max_window) {
  const auto win = trailing_decreasing(series, max_window);
  std::vector<double> x, y;
  for (const auto* rec : win) {
    if (t_est - rec->t > 0.0 && rec->sup_A2 > 0.0) {
      x.push_back(std::log(t_est - rec->t));
      y.push_back(std::log(rec->sup_A2));
    }
  }
  if (x.size() < 8) throw std::runtime_error("insufficient data for exponent fit");
  const LinFit f = linear_fit(x, y);
  ExponentFit e;
  e.beta = f.b1;
  e.half_width = f.stderr_b1;
  e.window = x.size();
  return e;
}

SingularityReport classify_singularity(const FlowEvent& event,
                                       const std::vector<TimeSeriesRecord>& series,
                                       std::vector<double> p_candidates) {
  SingularityReport rep;
  if (event.kind == FlowEvent::Kind::Converged) {
    rep.kind = SingularityReport::Kind::NoSingularity;
    return rep;
  }

  const size_t nvar = std::min<size_t>(100, series.size());
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (size_t i = series.size() - nvar; i < series.size(); ++i) {
    lo = std::min(lo, series[i].sup_A2);
    hi = std::max(hi, series[i].sup_A2);
  }
  rep.trailing_variation = (hi > 0.0) ? (hi - lo) / hi : 0.0;

  bool have_beta = false;
  try {
    const BlowupFit bf = estimate_blowup_time(series, p_candidates);
    rep.t_est = bf.t_blowup;
    rep.fit_p = bf.p;
    rep.fit_residual = bf.rms_residual;
    rep.fit_window = bf.window;
    const ExponentFit ef = fit_blowup_exponent(series, bf.t_blowup);
    rep.beta = ef.beta;
    rep.beta_half_width = ef.half_width;
    have_beta = true;
  } catch (const std::exception& e) {
    rep.note = e.what();
  }

  if (!have_beta) {
    // No usable blow-up model: bounded curvature is all we can certify.
    rep.kind = SingularityReport::Kind::Type0;
    return rep;
  }
  if (rep.trailing_variation < 0.10 && rep.beta > -0.25)
    rep.kind = SingularityReport::Kind::Type0;
  else if (rep.beta > -0.25)
    rep.kind = SingularityReport::Kind::Type0;  // bounded but still drifting
  else if (rep.beta >= -1.25)
    rep.kind = SingularityReport::Kind::TypeI;
  else
    rep.kind = SingularityReport::Kind::TypeII;
  return rep;
}

std::pair<double, double> typeI_sandwich_check(
    const std::vector<TimeSeriesRecord>& series, double t_est, size_t max_window) {
  const auto win = trailing_decreasing(series, max_window);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto* rec : win) {
    if (t_est - rec->t <= 0.0) continue;
    const double prod = rec->sup_A2 * (t_est - rec->t);
    lo = std::min(lo, prod);
    hi = std::max(hi, prod);
  }
  return {lo, hi};
}

LimitPrediction predict_limit_disk(const SupportProfile& profile,
                                   const RegionDecomposition& dec,
                                   const FlowState& initial) {
  LimitPrediction pred;
  const Window& w = profile.window();

  // Cone-like pinching cylinder: z omega' > 0 away from the single pinch.
  if (dec.pinch_points.size() == 1) {
    const double zs = dec.pinch_points.front();
    bool conelike = true;
    const int samples = 256;
    for (int i = 0; i <= samples && conelike; ++i) {
      const double z = w.lo + w.width() * i / samples;
      if (std::abs(z - zs) < 1e-6) continue;
      const Side side = z > zs ? Side::Right : Side::Left;
      if (!((z - zs) * profile.eval(z, side).d1 > 0.0)) conelike = false;
    }
    if (conelike) {
      pred.kind = LimitPrediction::Kind::Pinch;
      pred.z = zs;
      return pred;
    }
  }

  const double umin = *std::min_element(initial.u.begin(), initial.u.end());
  const double umax = *std::max_element(initial.u.begin(), initial.u.end());
  const Region* reg = nullptr;
  for (const auto& rg : dec.regions) {
    if (umin >= rg.z1 - 1e-9 && umax <= rg.z2 + 1e-9) {
      reg = &rg;
      break;
    }
  }
  if (!reg) {
    pred.reason = "initial height range not contained in a single region";
    return pred;
  }

  auto mins_in = [&](double a, double b) {
    std::vector<double> out;
    for (const auto& cp : dec.critical_points)
      if (cp.kind == CriticalPoint::Kind::StrictMin && cp.z > a && cp.z < b)
        out.push_back(cp.z);
    return out;
  };

  if (reg->kind == Region::Kind::ShrinkingNeck) {
    const auto mins = mins_in(reg->z1, reg->z2);
    if (mins.size() == 1) {
      pred.kind = LimitPrediction::Kind::Disk;
      pred.z = mins.front();
      return pred;
    }
    pred.reason = mins.empty() ? "neck region has no interior minimum"
                               : "multiple minima in the neck region";
    return pred;
  }

  if (reg->kind == Region::Kind::Belly) {
    const auto g = geometry::compute_nodal(initial);
    const bool all_neg = std::all_of(g.H.begin(), g.H.end(), [](double h) { return h < 0.0; });
    const bool all_pos = std::all_of(g.H.begin(), g.H.end(), [](double h) { return h > 0.0; });
    std::vector<double> disks;  // maxima of the profile inside the belly
    for (const auto& cp : dec.critical_points)
      if (cp.kind == CriticalPoint::Kind::StrictMax && cp.z > reg->z1 && cp.z < reg->z2)
        disks.push_back(cp.z);
    if (disks.empty()) {
      pred.reason = "belly region contains no flat disk";
      return pred;
    }
    const double boundary_height = initial.u.back();
    if (all_neg && boundary_height > disks.back()) {
      // case (a): ascend to the neck minimum above the belly
      const auto above = mins_in(disks.back(), w.hi);
      if (!above.empty()) {
        pred.kind = LimitPrediction::Kind::Disk;
        pred.z = above.front();
        return pred;
      }
      pred.reason = "no minimum above the belly inside the window";
      return pred;
    }
    if (all_pos && boundary_height < disks.front()) {
      // case (b): descend to the neck minimum below the belly
      const auto below = mins_in(w.lo, disks.front());
      if (!below.empty()) {
        pred.kind = LimitPrediction::Kind::Disk;
        pred.z = below.back();
        return pred;
      }
      pred.reason = "no minimum below the belly inside the window";
      return pred;
    }
    pred.reason = "initial data does not satisfy the sign-definite H hypotheses";
    return pred;
  }

  pred.reason = "flat-degenerate region: every height is stationary";
  return pred;
}

DissipationCheck verify_dissipation(const std::vector<TimeSeriesRecord>& series,
                                    double floor) {
  if (series.size() < 2) throw std::invalid_argument("need at least two records");
  DissipationCheck chk;
  for (size_t i = 0; i + 1 < series.size(); ++i) {
    const auto& a = series[i];
    const auto& b = series[i + 1];
    const double dt = b.t - a.t;
    if (!(dt > 0.0)) continue;
    const double rate = (b.area - a.area) / dt;
    const double diss = 0.5 * (a.dissipation + b.dissipation);
    const double defect = std::abs(rate + diss) / std::max(diss, floor);
    chk.max_defect = std::max(chk.max_defect, defect);
    const double inc = b.area - a.area;
    if (inc > 1e-10) {
      chk.area_nonincreasing = false;
      chk.max_area_increase = std::max(chk.max_area_increase, inc);
    }
  }
  return chk;
}

double pchip_eval(const std::vector<double>& xs, const std::vector<double>& ys,
                  double x) {
  const size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw std::invalid_argument("pchip needs >= 2 points");
  x = std::clamp(x, xs.front(), xs.back());
  size_t j = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
  if (j == 0) j = 1;
  if (j == n) j = n - 1;

  auto secant = [&](size_t i) { return (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]); };
  auto tangent = [&](size_t i) -> double {
    if (i == 0) {
      const double d = secant(0);
      if (n == 2) return d;
      const double h0 = xs[1] - xs[0], h1 = xs[2] - xs[1];
      double t = ((2.0 * h0 + h1) * secant(0) - h0 * secant(1)) / (h0 + h1);
      if (t * d <= 0.0) t = 0.0;
      else if (std::abs(t) > 3.0 * std::abs(d)) t = 3.0 * d;
      return t;
    }
    if (i == n - 1) {
      const double d = secant(n - 2);
      if (n == 2) return d;
      const double h0 = xs[n - 1] - xs[n - 2], h1 = xs[n - 2] - xs[n - 3];
      double t = ((2.0 * h0 + h1) * secant(n - 2) - h0 * secant(n - 3)) / (h0 + h1);
      if (t * d <= 0.0) t = 0.0;
      else if (std::abs(t) > 3.0 * std::abs(d)) t = 3.0 * d;
      return t;
    }
    const double d0 = secant(i - 1), d1 = secant(i);
    if (d0 * d1 <= 0.0) return 0.0;
    const double h0 = xs[i] - xs[i - 1], h1 = xs[i + 1] - xs[i];
    const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
    return (w1 + w2) / (w1 / d0 + w2 / d1);
  };

  const size_t i = j - 1;
  const double h = xs[i + 1] - xs[i];
  const double s = (x - xs[i]) / h;
  const double m0 = tangent(i) * h;
  const double m1 = tangent(i + 1) * h;
  const double s2 = s * s, s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * ys[i] + (s3 - 2.0 * s2 + s) * m0 +
         (-2.0 * s3 + 3.0 * s2) * ys[i + 1] + (s3 - s2) * m1;
}

SweepReport foliation_sweep(const SupportProfile& profile, double z0_lower,
                            double z0_upper, int grid_m, int dim_n,
                            const StepControl& control, const StopThresholds& stops) {
  if (!(z0_lower < z0_upper))
    throw std::invalid_argument("foliation sweep needs two distinct ordered caps");

  FlowState lower = build_initial_cap(profile, z0_lower, grid_m, dim_n);
  FlowState upper = build_initial_cap(profile, z0_upper, grid_m, dim_n);

  StopThresholds st = stops;
  st.keep_snapshots = true;
  const Trajectory lo_traj = run(lower, control, st);
  const Trajectory up_traj = run(upper, control, st);

  SweepReport rep;
  rep.lower_event = lo_traj.event.kind;
  rep.upper_event = up_traj.event.kind;
  rep.min_gap = std::numeric_limits<double>::infinity();
  rep.swept_lo = std::numeric_limits<double>::infinity();
  rep.swept_hi = -rep.swept_lo;

  const size_t common = std::min(lo_traj.snapshots.size(), up_traj.snapshots.size());
  const int K = 64;
  for (size_t j = 0; j < common; ++j) {
    const Snapshot& a = lo_traj.snapshots[j];
    const Snapshot& b = up_traj.snapshots[j];
    std::vector<double> ya(a.u.size()), yb(b.u.size());
    for (size_t i = 0; i < a.u.size(); ++i) ya[i] = a.r * i / (a.u.size() - 1);
    for (size_t i = 0; i < b.u.size(); ++i) yb[i] = b.r * i / (b.u.size() - 1);
    const double rm = std::min(a.r, b.r);
    for (int k = 0; k <= K; ++k) {
      const double y = rm * k / K;
      const double ua = pchip_eval(ya, a.u, y);
      const double ub = pchip_eval(yb, b.u, y);
      rep.min_gap = std::min(rep.min_gap, ub - ua);
    }
    rep.swept_lo = std::min(rep.swept_lo, *std::min_element(a.u.begin(), a.u.end()));
    rep.swept_hi = std::max(rep.swept_hi, *std::max_element(b.u.begin(), b.u.end()));
  }
  rep.ordering_ok = rep.min_gap > -1e-8;
  if (!rep.ordering_ok)
    throw std::runtime_error("comparison failure: flows crossed (gap " +
                             std::to_string(rep.min_gap) + ")");

  const bool both_pinched = lo_traj.event.kind == FlowEvent::Kind::Pinched &&
                            up_traj.event.kind == FlowEvent::Kind::Pinched;
  if (both_pinched) {
    rep.residual_empty = true;
  } else {
    rep.residual_lo = lo_traj.event.final_state.u.back();
    rep.residual_hi = up_traj.event.final_state.u.back();
  }
  return rep;
}

}  // namespace mcf::analysis
