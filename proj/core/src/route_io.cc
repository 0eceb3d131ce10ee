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

#include "offroad/route_io.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "offroad/traversability.h"

namespace offroad {
namespace {

constexpr absl::string_view kColumns =
    "idx,node_row,node_col,x_m,y_m,z_m,hop_slope_deg,cum_dist_m";

absl::Status LineError(absl::string_view source, int line,
                       absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat(source, ":", line, ": ", what));
}

}  // namespace

RouteTable MakeRouteTable(const ElevationGrid& grid,
                          const PlannedRoute& route) {
  RouteTable table;
  table.route = route;
  double cumulative = 0.0;
  for (size_t i = 0; i < route.waypoints.size(); ++i) {
    RoutePoint point;
    point.node = route.waypoints[i];
    const Eigen::Vector2d xy = grid.NodePosition(point.node);
    point.position = {xy.x(), xy.y(), grid.height(point.node)};
    if (i > 0) {
      const GridNode& prev = route.waypoints[i - 1];
      const double distance = NodeDistance(grid, prev, point.node);
      cumulative += distance;
      const double slope =
          std::abs(grid.height(point.node) - grid.height(prev)) / distance;
      point.hop_slope_deg = std::atan(slope) * 180.0 / std::numbers::pi;
    }
    point.cum_dist_m = cumulative;
    table.points.push_back(point);
  }
  return table;
}

absl::Status WriteRouteCsv(const ElevationGrid& grid, const PlannedRoute& route,
                           std::ostream& out) {
  const RouteTable table = MakeRouteTable(grid, route);
  out << absl::StrFormat(
      "# total_cost=%.17g,total_dist_m=%.17g,mean_slope_deg=%.17g,"
      "max_slope_deg=%.17g\n",
      route.total_cost, route.total_distance, route.mean_slope_deg,
      route.max_slope_deg);
  out << kColumns << "\n";
  for (size_t i = 0; i < table.points.size(); ++i) {
    const RoutePoint& p = table.points[i];
    out << absl::StrFormat("%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", i,
                           p.node.row, p.node.col, p.position.x(),
                           p.position.y(), p.position.z(), p.hop_slope_deg,
                           p.cum_dist_m);
  }
  return out ? absl::OkStatus() : absl::InternalError("failed writing route");
}

absl::StatusOr<RouteTable> ParseRouteCsv(std::istream& in,
                                         const std::string& source) {
  RouteTable table;
  std::string line;
  int line_number = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line() || !absl::StartsWith(line, "#")) {
    return LineError(source, 1, "missing '# total_cost=...' summary line");
  }
  {
    absl::string_view summary = absl::StripAsciiWhitespace(
        absl::StripPrefix(absl::string_view(line), "#"));
    struct Field {
      absl::string_view key;
      double* target;
      bool seen = false;
    };
    Field fields[] = {{"total_cost", &table.route.total_cost},
                      {"total_dist_m", &table.route.total_distance},
                      {"mean_slope_deg", &table.route.mean_slope_deg},
                      {"max_slope_deg", &table.route.max_slope_deg}};
    for (absl::string_view item : absl::StrSplit(summary, ',')) {
      std::pair<absl::string_view, absl::string_view> kv =
          absl::StrSplit(item, absl::MaxSplits('=', 1));
      bool matched = false;
      for (Field& field : fields) {
        if (field.key != absl::StripAsciiWhitespace(kv.first)) continue;
        if (!absl::SimpleAtod(absl::StripAsciiWhitespace(kv.second),
                              field.target)) {
          return LineError(source, line_number,
                           absl::StrCat("bad value for ", field.key));
        }
        field.seen = matched = true;
      }
      if (!matched) {
        return LineError(source, line_number,
                         absl::StrCat("unknown summary key '", kv.first, "'"));
      }
    }
    for (const Field& field : fields) {
      if (!field.seen) {
        return LineError(source, line_number,
                         absl::StrCat("summary lacks ", field.key));
      }
    }
  }

  if (!next_line() || absl::StripAsciiWhitespace(line) != kColumns) {
    return LineError(source, line_number,
                     absl::StrCat("expected column header '", kColumns, "'"));
  }

  while (next_line()) {
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    std::vector<absl::string_view> cells = absl::StrSplit(line, ',');
    if (cells.size() != 8) {
      return LineError(source, line_number, "expected 8 columns");
    }
    int idx = 0;
    RoutePoint p;
    double x = 0, y = 0, z = 0;
    if (!absl::SimpleAtoi(cells[0], &idx) ||
        !absl::SimpleAtoi(cells[1], &p.node.row) ||
        !absl::SimpleAtoi(cells[2], &p.node.col) ||
        !absl::SimpleAtod(cells[3], &x) || !absl::SimpleAtod(cells[4], &y) ||
        !absl::SimpleAtod(cells[5], &z) ||
        !absl::SimpleAtod(cells[6], &p.hop_slope_deg) ||
        !absl::SimpleAtod(cells[7], &p.cum_dist_m)) {
      return LineError(source, line_number, "malformed route row");
    }
    if (idx != static_cast<int>(table.points.size())) {
      return LineError(source, line_number,
                       absl::StrCat("expected idx ", table.points.size()));
    }
    if (!table.points.empty() &&
        !AreEightAdjacent(table.points.back().node, p.node)) {
      return LineError(source, line_number,
                       "waypoint is not 8-adjacent to its predecessor");
    }
    p.position = {x, y, z};
    table.points.push_back(p);
    table.route.waypoints.push_back(p.node);
  }
  if (table.points.empty()) {
    return LineError(source, line_number, "route has no waypoints");
  }
  return table;
}

absl::StatusOr<RouteTable> LoadRouteCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ParseRouteCsv(in, path);
}

}  // namespace offroad
