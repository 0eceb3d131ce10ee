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

#ifndef OFFROAD_TOOLS_CLI_SVG_RENDER_H_
#define OFFROAD_TOOLS_CLI_SVG_RENDER_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "offroad/elevation_grid.h"
#include "offroad/route_io.h"
#include "offroad/traversability.h"

namespace offroad::cli {

// Planar traces read back from a simulation log CSV.
struct LogTraces {
  std::vector<Eigen::Vector2d> actual;
  std::vector<Eigen::Vector2d> desired;
};

absl::StatusOr<LogTraces> ParseLogTraces(std::istream& in,
                                         const std::string& source);
absl::StatusOr<LogTraces> LoadLogTraces(const std::string& path);

struct Scene {
  const ElevationGrid* grid = nullptr;  // required
  const ObstacleMask* obstacles = nullptr;
  const RouteTable* route = nullptr;
  const LogTraces* log = nullptr;
};

// Banded elevation shading, obstacle overlay, route polyline, desired
// (dashed) and actual (solid) traces and a legend. Output depends only on
// the inputs. InvalidArgument when a layer does not fit the grid.
absl::Status RenderSvg(const Scene& scene, std::ostream& out);

}  // namespace offroad::cli

#endif  // OFFROAD_TOOLS_CLI_SVG_RENDER_H_
