#include "mcf/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mcf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': not a number: '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': not an integer: '" + v + "'");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "profile.kind") cfg.profile_kind = val;
    else if (key == "profile.file") cfg.profile_file = val;
    else if (key.rfind("profile.", 0) == 0) cfg.profile_params[key.substr(8)] = to_double(key, val);
    else if (key == "window.lo") cfg.window.lo = to_double(key, val);
    else if (key == "window.hi") cfg.window.hi = to_double(key, val);
    else if (key == "n") cfg.n = static_cast<int>(to_int(key, val));
    else if (key == "M") cfg.grid_m = static_cast<int>(to_int(key, val));
    else if (key == "z0") cfg.z0 = to_double(key, val);
    else if (key == "bump") cfg.bump = to_double(key, val);
    else if (key == "z0_lower") cfg.z0_lower = to_double(key, val);
    else if (key == "z0_upper") cfg.z0_upper = to_double(key, val);
    else if (key == "cfl") cfg.control.cfl_safety = to_double(key, val);
    else if (key == "dt_min") cfg.control.dt_min = to_double(key, val);
    else if (key == "dt_max") cfg.control.dt_max = to_double(key, val);
    else if (key == "max_steps") cfg.control.max_steps = to_int(key, val);
    else if (key == "t_max") cfg.stops.t_max = to_double(key, val);
    else if (key == "eps_pinch_rel") cfg.stops.eps_pinch_rel = to_double(key, val);
    else if (key == "eps_H") cfg.stops.eps_H = to_double(key, val);
    else if (key == "eps_r") cfg.stops.eps_r = to_double(key, val);
    else if (key == "trailing_window") cfg.stops.trailing_window = static_cast<int>(to_int(key, val));
    else if (key == "record_stride") cfg.stops.record_stride = to_int(key, val);
    else if (key == "record_dt") cfg.stops.record_dt = to_double(key, val);
    else if (key == "snapshot_count") cfg.snapshot_count = static_cast<int>(to_int(key, val));
    else if (key == "seed") cfg.seed = static_cast<unsigned long>(to_int(key, val));
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

SupportProfile RunConfig::make_profile() const {
  auto param = [&](const std::string& name, std::optional<double> fallback =
                                                std::nullopt) -> double {
    const auto it = profile_params.find(name);
    if (it != profile_params.end()) return it->second;
    if (fallback) return *fallback;
    throw std::invalid_argument("profile." + name + " is required for kind '" +
                                profile_kind + "'");
  };

  if (profile_kind == "cylinder") return SupportProfile::cylinder(param("R"), window);
  if (profile_kind == "catenoid") return SupportProfile::catenoid(param("a", 1.0), window);
  if (profile_kind == "cosine")
    return SupportProfile::cosine(param("A"), param("B"), param("k", 1.0), window);
  if (profile_kind == "cone")
    return SupportProfile::cone(param("m"), param("zstar", 0.0), window);
  if (profile_kind == "power")
    return SupportProfile::power(param("c"), param("alpha"), param("zstar", 0.0), window);
  if (profile_kind == "reciprocal-mollified")
    return SupportProfile::reciprocal_mollified(param("zknee", 1.0), window);
  if (profile_kind == "gaussian-bump") return SupportProfile::gaussian_bump(window);
  if (profile_kind == "tabulated") {
    if (profile_file.empty())
      throw std::invalid_argument("profile.file is required for tabulated profiles");
    std::ifstream f(profile_file);
    if (!f) throw std::invalid_argument("cannot open profile file: " + profile_file);
    std::vector<double> z, w;
    double a, b;
    while (f >> a >> b) {
      z.push_back(a);
      w.push_back(b);
    }
    return SupportProfile::tabulated(std::move(z), std::move(w));
  }
  throw std::invalid_argument("unknown profile.kind '" + profile_kind + "'");
}

void validate(const RunConfig& cfg) {
  if (cfg.profile_kind.empty()) throw std::invalid_argument("profile.kind is required");
  if (!(cfg.window.width() > 0.0)) throw std::invalid_argument("window must have positive width");
  if (cfg.n < 2) throw std::invalid_argument("n must be >= 2");
  if (cfg.grid_m < 4) throw std::invalid_argument("M must be >= 4");
  if (!(cfg.control.cfl_safety > 0.0) || cfg.control.cfl_safety >= 1.0)
    throw std::invalid_argument("cfl must lie in (0, 1)");
  if (!(cfg.control.dt_min > 0.0) || cfg.control.dt_min > cfg.control.dt_max)
    throw std::invalid_argument("need 0 < dt_min <= dt_max");
  if (cfg.control.max_steps < 0) throw std::invalid_argument("max_steps must be >= 0");
  if (cfg.stops.t_max < 0.0) throw std::invalid_argument("t_max must be >= 0");
  if (!(cfg.stops.eps_pinch_rel > 0.0) || cfg.stops.eps_pinch_rel >= 1.0)
    throw std::invalid_argument("eps_pinch_rel must lie in (0, 1)");
  if (!(cfg.stops.eps_H > 0.0) || !(cfg.stops.eps_r > 0.0))
    throw std::invalid_argument("convergence thresholds must be positive");
  if (cfg.stops.trailing_window < 2)
    throw std::invalid_argument("trailing_window must be >= 2");
  if (cfg.stops.record_stride < 1)
    throw std::invalid_argument("record_stride must be >= 1");
  if (cfg.z0_lower && cfg.z0_upper && !(*cfg.z0_lower < *cfg.z0_upper))
    throw std::invalid_argument("z0_lower must be below z0_upper");
  // Profile construction validates its own parameters.
  const SupportProfile prof = cfg.make_profile();
  (void)prof;
}

}  // namespace mcf
