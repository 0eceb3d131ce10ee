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

#ifndef OFFROAD_TOOLS_CLI_COMMANDS_H_
#define OFFROAD_TOOLS_CLI_COMMANDS_H_

#include <optional>
#include <ostream>
#include <string>

#include "absl/status/statusor.h"
#include "offroad/elevation_grid.h"
#include "offroad/global_route.h"
#include "offroad/traversability.h"

namespace offroad::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUnreachable = 2,
  kExitNormalForce = 3,
  kExitInputError = 4,
  kExitSimulationAborted = 5,  // left the grid or speed fell below v_min_ctrl
};

// Terrain layers plus weather to a planned route. An unreachable start gives
// result.reachable == false; bad start/goal nodes are InvalidArgument.
struct RoutePlan {
  ObstacleMask mask;
  RouteResult result;
};

absl::StatusOr<RoutePlan> PlanGlobalRoute(const ElevationGrid& grid,
                                          const BinaryMask* water,
                                          const BinaryMask* foliage,
                                          const WeatherCondition& weather,
                                          std::optional<double> steep_limit,
                                          const GridNode& start,
                                          const GridNode& goal);

// "R,C" to a grid node.
absl::StatusOr<GridNode> ParseNodeArg(const std::string& text);

struct RouteOptions {
  std::string grid;
  std::string water;
  std::string foliage;
  std::string start;
  std::string goal;
  std::string weather = "dry";
  std::optional<double> slope_limit;
  std::optional<double> steep_limit;
  std::string out;
};

struct RenderOptions {
  std::string grid;
  std::string water;
  std::string foliage;
  std::string route;
  std::string log;
  std::string weather = "dry";
  std::optional<double> slope_limit;
  std::string out;
};

int RunRouteCommand(const RouteOptions& options, std::ostream& out,
                    std::ostream& err);
int RunSimulateCommand(const std::string& config_path,
                       const std::string& out_dir, std::ostream& out,
                       std::ostream& err);
int RunRenderCommand(const RenderOptions& options, std::ostream& out,
                     std::ostream& err);

// Full command line, argv[0] included.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace offroad::cli

#endif  // OFFROAD_TOOLS_CLI_COMMANDS_H_
