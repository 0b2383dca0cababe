#include "mcf/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "mcf/analysis.hpp"
#include "mcf/config.hpp"
#include "mcf/geometry.hpp"
#include "mcf/profile.hpp"
#include "mcf/solver.hpp"

namespace mcf::cli {

namespace {

namespace fs = std::filesystem;

// Full round-trip precision so regression fixtures compare byte-stably.
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* event_name(FlowEvent::Kind k) {
  switch (k) {
    case FlowEvent::Kind::Converged: return "Converged";
    case FlowEvent::Kind::Pinched: return "Pinched";
    case FlowEvent::Kind::MaxTime: return "MaxTime";
    case FlowEvent::Kind::StepFailure: return "StepFailure";
  }
  return "?";
}

const char* region_name(Region::Kind k) {
  switch (k) {
    case Region::Kind::ShrinkingNeck: return "shrinking-neck";
    case Region::Kind::Belly: return "belly";
    case Region::Kind::FlatDegenerate: return "flat-degenerate";
  }
  return "?";
}

const char* cp_name(CriticalPoint::Kind k) {
  switch (k) {
    case CriticalPoint::Kind::StrictMin: return "strict-min";
    case CriticalPoint::Kind::StrictMax: return "strict-max";
    case CriticalPoint::Kind::DegenerateFlat: return "degenerate-flat";
  }
  return "?";
}

const char* sing_name(analysis::SingularityReport::Kind k) {
  using K = analysis::SingularityReport::Kind;
  switch (k) {
    case K::Type0: return "Type0";
    case K::TypeI: return "TypeI";
    case K::TypeII: return "TypeII";
    case K::NoSingularity: return "NoSingularity";
  }
  return "?";
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  long long stride = 0;  // 0: keep config value
  bool quiet = false;
};

RunConfig load_config(const CommonOpts& opts) {
  RunConfig cfg = parse_config_file(opts.config_path);
  if (opts.stride > 0) cfg.stops.record_stride = opts.stride;
  validate(cfg);
  return cfg;
}

std::ofstream open_out(const CommonOpts& opts, const std::string& name) {
  fs::create_directories(opts.out_dir);
  std::ofstream f(fs::path(opts.out_dir) / name);
  if (!f) throw std::runtime_error("cannot write " + name + " in " + opts.out_dir);
  return f;
}

void write_trajectory_csv(std::ofstream& f, const std::vector<TimeSeriesRecord>& recs) {
  f << "t,r,sup_A2,sup_H,area,boundary_grad,u_min,u_max\n";
  for (const auto& r : recs) {
    f << fmt17(r.t) << ',' << fmt17(r.r) << ',' << fmt17(r.sup_A2) << ','
      << fmt17(r.sup_H) << ',' << fmt17(r.area) << ',' << fmt17(r.boundary_grad)
      << ',' << fmt17(r.u_min) << ',' << fmt17(r.u_max) << '\n';
  }
}

std::vector<double> blowup_candidates(const SupportProfile& prof) {
  std::vector<double> p = {2.0};
  const double sigma = prof.pinch_sigma();
  if (sigma > 0.0 && sigma < 1.0) p.push_back(2.0 - 2.0 * sigma);
  return p;
}

int cmd_classify(const CommonOpts& opts) {
  const RunConfig cfg = load_config(opts);
  const SupportProfile prof = cfg.make_profile();
  const RegionDecomposition dec = classify_regions(prof, cfg.window);

  auto f = open_out(opts, "regions.txt");
  f << "profile " << prof.describe() << "\n";
  f << "window " << fmt17(cfg.window.lo) << ' ' << fmt17(cfg.window.hi) << "\n";
  try {
    f << "graph_constant " << fmt17(graph_constant(prof, cfg.window)) << "\n";
  } catch (const std::exception& e) {
    f << "graph_constant violated: " << e.what() << "\n";
  }
  const AsymptoticFlags flags = prof.asymptotic_flags();
  f << "asymptotics neg eqcondn=" << flags.eqcondn_neg << " noshrink=" << flags.noshrink_neg
    << " pos eqcondn=" << flags.eqcondn_pos << " noshrink=" << flags.noshrink_pos
    << (flags.window_only ? " (window-only)" : "") << "\n";
  for (const auto& cp : dec.critical_points)
    f << "critical_point " << fmt17(cp.z) << ' ' << cp_name(cp.kind) << "\n";
  for (double z : dec.pinch_points) f << "pinch_point " << fmt17(z) << "\n";
  for (const auto& rg : dec.regions)
    f << "region " << fmt17(rg.z1) << ' ' << fmt17(rg.z2) << ' '
      << region_name(rg.kind) << "\n";
  if (!opts.quiet)
    std::cout << "classify: " << dec.regions.size() << " regions, "
              << dec.critical_points.size() << " critical points, "
              << dec.pinch_points.size() << " pinch points\n";
  return 0;
}

Trajectory evolve_from_config(const RunConfig& cfg, const SupportProfile& prof,
                              bool keep_snapshots) {
  FlowState state = build_initial_cap(prof, cfg.z0, cfg.grid_m, cfg.n, cfg.bump);
  StopThresholds stops = cfg.stops;
  stops.keep_snapshots = keep_snapshots;
  return run(std::move(state), cfg.control, stops);
}

int cmd_evolve(const CommonOpts& opts) {
  const RunConfig cfg = load_config(opts);
  const SupportProfile prof = cfg.make_profile();
  const Trajectory traj = evolve_from_config(cfg, prof, true);

  {
    auto f = open_out(opts, "trajectory.csv");
    write_trajectory_csv(f, traj.records);
  }
  // Snapshot files at evenly spaced record times.
  if (!traj.snapshots.empty() && cfg.snapshot_count > 0) {
    const size_t count = std::min<size_t>(cfg.snapshot_count, traj.snapshots.size());
    for (size_t k = 0; k < count; ++k) {
      const size_t idx = (count == 1) ? 0 : k * (traj.snapshots.size() - 1) / (count - 1);
      const Snapshot& s = traj.snapshots[idx];
      char name[48];
      std::snprintf(name, sizeof(name), "snapshot_%04zu.dat", k);
      auto f = open_out(opts, name);
      f << "# t " << fmt17(s.t) << "\n";
      const size_t m = s.u.size() - 1;
      for (size_t i = 0; i < s.u.size(); ++i)
        f << fmt17(s.r * i / m) << ' ' << fmt17(s.u[i]) << "\n";
    }
  }
  {
    auto f = open_out(opts, "summary.txt");
    f << "event " << event_name(traj.event.kind) << "\n";
    f << "t_event " << fmt17(traj.event.t_event) << "\n";
    f << "final_r " << fmt17(traj.event.final_state.r) << "\n";
    f << "final_boundary_height " << fmt17(traj.event.final_state.u.back()) << "\n";
    f << "records " << traj.records.size() << "\n";
    if (!traj.event.message.empty()) f << "message " << traj.event.message << "\n";
  }
  if (!opts.quiet)
    std::cout << "evolve: " << event_name(traj.event.kind) << " at t="
              << fmt17(traj.event.t_event) << "\n";
  return traj.event.kind == FlowEvent::Kind::StepFailure ? 3 : 0;
}

int cmd_singularity(const CommonOpts& opts) {
  const RunConfig cfg = load_config(opts);
  const SupportProfile prof = cfg.make_profile();
  const Trajectory traj = evolve_from_config(cfg, prof, false);
  if (traj.event.kind == FlowEvent::Kind::StepFailure) {
    std::cerr << "evolve failed: " << traj.event.message << "\n";
    return 3;
  }

  auto f = open_out(opts, "singularity.txt");
  f << "event " << event_name(traj.event.kind) << "\n";
  try {
    const auto rep =
        analysis::classify_singularity(traj.event, traj.records, blowup_candidates(prof));
    f << "kind " << sing_name(rep.kind) << "\n";
    f << "beta " << fmt17(rep.beta) << " +- " << fmt17(rep.beta_half_width) << "\n";
    f << "T_est " << fmt17(rep.t_est) << "\n";
    f << "fit_p " << fmt17(rep.fit_p) << "\n";
    f << "fit_residual " << fmt17(rep.fit_residual) << "\n";
    f << "trailing_variation " << fmt17(rep.trailing_variation) << "\n";
    if (rep.kind == analysis::SingularityReport::Kind::TypeI) {
      const auto [lo, hi] = analysis::typeI_sandwich_check(traj.records, rep.t_est);
      f << "sandwich " << fmt17(lo) << ' ' << fmt17(hi) << "\n";
    }
    if (!rep.note.empty()) f << "note " << rep.note << "\n";
    if (!opts.quiet) std::cout << "singularity: " << sing_name(rep.kind) << "\n";
  } catch (const std::exception& e) {
    f << "status insufficient data: " << e.what() << "\n";
    if (!opts.quiet) std::cout << "singularity: insufficient data\n";
  }
  return 0;
}

int cmd_foliate(const CommonOpts& opts) {
  const RunConfig cfg = load_config(opts);
  if (!cfg.z0_lower || !cfg.z0_upper)
    throw std::invalid_argument("foliate needs z0_lower and z0_upper");
  const SupportProfile prof = cfg.make_profile();

  auto f = open_out(opts, "foliation.txt");
  try {
    const auto rep = analysis::foliation_sweep(prof, *cfg.z0_lower, *cfg.z0_upper,
                                               cfg.grid_m, cfg.n, cfg.control, cfg.stops);
    f << "ordering ok\n";
    f << "min_gap " << fmt17(rep.min_gap) << "\n";
    f << "lower_event " << event_name(rep.lower_event) << "\n";
    f << "upper_event " << event_name(rep.upper_event) << "\n";
    f << "swept_band " << fmt17(rep.swept_lo) << ' ' << fmt17(rep.swept_hi) << "\n";
    if (rep.residual_empty)
      f << "residual_band empty\n";
    else
      f << "residual_band " << fmt17(rep.residual_lo) << ' ' << fmt17(rep.residual_hi)
        << "\n";
    if (!opts.quiet) std::cout << "foliate: ordering maintained\n";
    return 0;
  } catch (const std::runtime_error& e) {
    f << "ordering violated: " << e.what() << "\n";
    std::cerr << e.what() << "\n";
    return 3;
  }
}

// Built-in oracle table: closed-form surfaces vs the curvature formulas and
// the finite-difference pipeline's refinement order.
int cmd_geometry_check(const CommonOpts& opts, bool quiet) {
  (void)opts;
  bool all_ok = true;
  auto report = [&](const std::string& name, bool ok, double value) {
    all_ok = all_ok && ok;
    if (!quiet)
      std::cout << (ok ? "pass " : "FAIL ") << name << " (" << fmt17(value) << ")\n";
  };

  for (int n : {2, 3}) {
    for (double R : {1.0, 2.0}) {
      const double y = 0.6 * R;
      const double w1 = -y / std::sqrt(R * R - y * y);
      const double w2 = -R * R / std::pow(R * R - y * y, 1.5);
      const geometry::GraphPoint p{y, w1, w2, n};
      const double H = geometry::mean_curvature(p);
      const double A2 = geometry::second_fundamental_norm(p);
      report("sphere H n=" + std::to_string(n) + " R=" + fmt17(R),
             std::abs(H - n / R) <= 1e-10 * (n / R), H);
      report("sphere |A|2 n=" + std::to_string(n) + " R=" + fmt17(R),
             std::abs(A2 - n / (R * R)) <= 1e-10 * (n / (R * R)), A2);
    }
  }
  {
    const geometry::GraphPoint p{0.5, 0.0, 0.0, 2};
    report("flat disk H", geometry::mean_curvature(p) == 0.0, 0.0);
  }
  // Refinement order of the finite-difference curvature pipeline on a
  // sphere cap sampled as a grid function.
  {
    auto sup_err = [&](int m) {
      const double R = 2.0, r = 1.2;
      FlowState s;
      s.n = 2;
      s.r = r;
      s.u.resize(m + 1);
      for (int i = 0; i <= m; ++i) {
        const double y = r * i / m;
        s.u[i] = std::sqrt(R * R - y * y);
      }
      const auto g = geometry::compute_nodal(s);
      double err = 0.0;
      for (int i = 0; i <= m; ++i) err = std::max(err, std::abs(g.H[i] - 2.0 / R));
      return err;
    };
    const double e1 = sup_err(128), e2 = sup_err(256);
    const double order = std::log2(e1 / e2);
    report("fd refinement order", order >= 1.8, order);
  }
  return all_ok ? 0 : 3;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"rotationally symmetric graphical mean curvature flow with free boundary"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    auto* c = sub->add_option("--config", opts.config_path, "run configuration file");
    if (needs_config) c->required();
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--stride", opts.stride, "record every N steps");
    sub->add_flag("--quiet", opts.quiet, "suppress progress output");
  };

  auto* classify = app.add_subcommand("classify", "region/critical-point report");
  add_common(classify);
  auto* evolve = app.add_subcommand("evolve", "run the flow, write trajectory CSV");
  add_common(evolve);
  auto* singularity = app.add_subcommand("singularity", "run the flow and classify the singularity");
  add_common(singularity);
  auto* foliate = app.add_subcommand("foliate", "two-cap foliation sweep");
  add_common(foliate);
  auto* geom = app.add_subcommand("geometry-check", "run the curvature oracles");
  add_common(geom, false);

  std::vector<std::string> rargs(args.rbegin(), args.rend());
  try {
    app.parse(rargs);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (classify->parsed()) return cmd_classify(opts);
    if (evolve->parsed()) return cmd_evolve(opts);
    if (singularity->parsed()) return cmd_singularity(opts);
    if (foliate->parsed()) return cmd_foliate(opts);
    if (geom->parsed()) return cmd_geometry_check(opts, opts.quiet);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace mcf::cli
