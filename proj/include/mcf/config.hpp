#pragma once

#include <map>
#include <optional>
#include <string>

#include "mcf/profile.hpp"
#include "mcf/solver.hpp"

namespace mcf {

// Flat key = value run configuration; see README for the key list.
struct RunConfig {
  // profile
  std::string profile_kind;
  std::map<std::string, double> profile_params;
  std::string profile_file;  // tabulated samples (two columns: z omega)
  Window window{-2.0, 2.0};

  // discretization / initial data
  int n = 2;
  int grid_m = 200;
  double z0 = 1.0;
  double bump = 0.0;
  std::optional<double> z0_lower, z0_upper;  // foliate

  StepControl control;
  StopThresholds stops;
  int snapshot_count = 5;
  unsigned long seed = 0;  // reserved; runs are deterministic

  SupportProfile make_profile() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Throws std::invalid_argument with a message naming the offending key.
void validate(const RunConfig& cfg);

}  // namespace mcf
