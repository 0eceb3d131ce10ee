// Copyright 2026 The Offroad Planner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OFFROAD_TOOLS_CLI_RUN_CONFIG_H_
#define OFFROAD_TOOLS_CLI_RUN_CONFIG_H_

#include <optional>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "offroad/elevation_grid.h"
#include "offroad/simulation.h"
#include "offroad/tpsm.h"
#include "offroad/tracking_controller.h"
#include "offroad/traversability.h"
#include "offroad/vehicle_model.h"

namespace offroad::cli {

// Parsed `simulate` configuration. Paths are resolved against the directory
// of the config file.
struct RunConfig {
  std::string source;

  // terrain
  std::string grid_path;
  std::string water_path;    // empty when absent
  std::string foliage_path;  // empty when absent

  // weather
  WeatherKind weather = WeatherKind::kDry;
  std::optional<double> slope_limit;
  std::optional<double> steep_limit;

  // Exactly one of route (start + goal) or waypoints is set.
  std::optional<GridNode> start;
  std::optional<GridNode> goal;
  std::vector<Eigen::Vector2d> waypoints;

  TpsmConfig path;
  GainConfig gains;
  VehicleParams vehicle;

  // simulation
  double dt = 0.01;
  double duration = 0.0;
  std::optional<double> initial_speed;  // default: first segment command
  Eigen::Vector2d initial_offset = Eigen::Vector2d::Zero();
  ViolationPolicy violation_policy = ViolationPolicy::kHalt;
  int log_decimation = 1;

  // output file names, relative to --out-dir
  std::string trajectory_file = "trajectory.csv";
  std::string log_file = "log.csv";
  std::string route_file = "route.csv";

  WeatherCondition Weather() const;
};

// InvalidArgument / NotFound with "source:line: message" diagnostics. Unknown
// keys, wrong types, non-positive physical parameters and missing referenced
// files are all rejected.
absl::StatusOr<RunConfig> ParseRunConfig(const std::string& text,
                                         const std::string& source,
                                         const std::string& base_dir);
absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path);

}  // namespace offroad::cli

#endif  // OFFROAD_TOOLS_CLI_RUN_CONFIG_H_
