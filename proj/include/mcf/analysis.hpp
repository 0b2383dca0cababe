#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mcf/profile.hpp"
#include "mcf/solver.hpp"

namespace mcf::analysis {

// Least-squares fit of r^p(t) = a (T - t) over the trailing window of
// records with strictly decreasing r; p picked from the candidates by best
// residual.
struct BlowupFit {
  double t_blowup = 0.0;
  double p = 2.0;
  double rms_residual = 0.0;
  size_t window = 0;
};
BlowupFit estimate_blowup_time(const std::vector<TimeSeriesRecord>& series,
                               std::vector<double> p_candidates = {2.0},
                               size_t max_window = 400);

// Slope of log sup|A|^2 against log(T_est - t) over the trailing window.
struct ExponentFit {
  double beta = 0.0;
  double half_width = 0.0;  // standard error of the slope
  size_t window = 0;
};
ExponentFit fit_blowup_exponent(const std::vector<TimeSeriesRecord>& series,
                                double t_est, size_t max_window = 400);

struct SingularityReport {
  enum class Kind { Type0, TypeI, TypeII, NoSingularity };
  Kind kind = Kind::NoSingularity;
  double beta = 0.0;
  double beta_half_width = 0.0;
  double t_est = 0.0;
  double fit_p = 0.0;
  double fit_residual = 0.0;
  double trailing_variation = 0.0;  // relative sup|A|^2 span over trailing records
  size_t fit_window = 0;
  std::string note;
};

// Thresholds: Type0 when sup|A|^2 stays bounded over the trailing window
// (variation < 10% and beta > -0.25); TypeI for beta in [-1.25, -0.25];
// TypeII for beta < -1.25; NoSingularity when the flow converged.
SingularityReport classify_singularity(const FlowEvent& event,
                                       const std::vector<TimeSeriesRecord>& series,
                                       std::vector<double> p_candidates = {2.0});

// min and max over the trailing window of sup|A|^2 * (T_est - t); both
// finite and positive certifies the two-sided Type I estimate.
std::pair<double, double> typeI_sandwich_check(
    const std::vector<TimeSeriesRecord>& series, double t_est,
    size_t max_window = 400);

struct LimitPrediction {
  enum class Kind { Disk, Pinch, Unavailable };
  Kind kind = Kind::Unavailable;
  double z = 0.0;
  std::string reason;
};
LimitPrediction predict_limit_disk(const SupportProfile& profile,
                                   const RegionDecomposition& decomposition,
                                   const FlowState& initial);

struct DissipationCheck {
  double max_defect = 0.0;        // max |dA/dt + dissipation| / max(dissipation, floor)
  bool area_nonincreasing = true;
  double max_area_increase = 0.0;
};
DissipationCheck verify_dissipation(const std::vector<TimeSeriesRecord>& series,
                                    double floor = 1e-12);

struct SweepReport {
  bool ordering_ok = true;
  double min_gap = 0.0;           // min over compared points of (upper - lower)
  double swept_lo = 0.0;
  double swept_hi = 0.0;
  bool residual_empty = false;
  double residual_lo = 0.0;
  double residual_hi = 0.0;
  FlowEvent::Kind lower_event = FlowEvent::Kind::MaxTime;
  FlowEvent::Kind upper_event = FlowEvent::Kind::MaxTime;
};

// Runs the flows from the two caps, verifies vertical-line ordering at all
// common record times, and reports the swept and residual height bands.
// Throws std::runtime_error on an ordering violation (scheme defect).
SweepReport foliation_sweep(const SupportProfile& profile, double z0_lower,
                            double z0_upper, int grid_m, int dim_n,
                            const StepControl& control, const StopThresholds& stops);

// Shape-preserving cubic interpolation (Fritsch-Carlson tangents).
double pchip_eval(const std::vector<double>& xs, const std::vector<double>& ys,
                  double x);

}  // namespace mcf::analysis
