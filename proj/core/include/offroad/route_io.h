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

#ifndef OFFROAD_ROUTE_IO_H_
#define OFFROAD_ROUTE_IO_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "offroad/elevation_grid.h"
#include "offroad/global_route.h"

namespace offroad {

// One row of a route CSV.
struct RoutePoint {
  GridNode node;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double hop_slope_deg = 0.0;
  double cum_dist_m = 0.0;
};

struct RouteTable {
  PlannedRoute route;
  std::vector<RoutePoint> points;
};

RouteTable MakeRouteTable(const ElevationGrid& grid, const PlannedRoute& route);

// Writes
//   # total_cost=...,total_dist_m=...,mean_slope_deg=...,max_slope_deg=...
//   idx,node_row,node_col,x_m,y_m,z_m,hop_slope_deg,cum_dist_m
// followed by one row per waypoint. Numbers use 17 significant digits so the
// file parses back into an identical route.
absl::Status WriteRouteCsv(const ElevationGrid& grid, const PlannedRoute& route,
                           std::ostream& out);

absl::StatusOr<RouteTable> ParseRouteCsv(std::istream& in,
                                         const std::string& source);
absl::StatusOr<RouteTable> LoadRouteCsv(const std::string& path);

}  // namespace offroad

#endif  // OFFROAD_ROUTE_IO_H_
