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

#include "offroad/traversability.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace offroad {

const char* WeatherName(WeatherKind kind) {
  return kind == WeatherKind::kDry ? "dry" : "wet";
}

absl::Status ValidateWeather(const WeatherCondition& weather,
                             std::optional<double> dry_limit) {
  if (!(weather.slope_limit > 0.0) || !std::isfinite(weather.slope_limit)) {
    return absl::InvalidArgumentError("slope limit must be positive");
  }
  if (weather.kind == WeatherKind::kWet && dry_limit.has_value() &&
      weather.slope_limit > *dry_limit) {
    return absl::InvalidArgumentError(
        absl::StrCat("wet slope limit ", weather.slope_limit,
                     " exceeds dry slope limit ", *dry_limit));
  }
  return absl::OkStatus();
}

const char* ObstacleReasonName(ObstacleReason reason) {
  switch (reason) {
    case ObstacleReason::kClear:
      return "clear";
    case ObstacleReason::kWater:
      return "water";
    case ObstacleReason::kFoliageOrBuilding:
      return "foliage_or_building";
    case ObstacleReason::kSteep:
      return "steep";
  }
  return "unknown";
}

int ObstacleMask::BlockedCount() const {
  return static_cast<int>(
      std::count_if(reasons_.begin(), reasons_.end(), [](ObstacleReason r) {
        return r != ObstacleReason::kClear;
      }));
}

bool AreEightAdjacent(const GridNode& a, const GridNode& b) {
  const int dr = std::abs(a.row - b.row);
  const int dc = std::abs(a.col - b.col);
  return dr <= 1 && dc <= 1 && (dr + dc) > 0;
}

double NodeDistance(const ElevationGrid& grid, const GridNode& a,
                    const GridNode& b) {
  return (grid.NodePosition(a) - grid.NodePosition(b)).norm();
}

absl::StatusOr<double> SlopeBetween(const ElevationGrid& grid,
                                    const GridNode& a, const GridNode& b) {
  if (!grid.Contains(a) || !grid.Contains(b)) {
    return absl::OutOfRangeError("node outside grid");
  }
  if (!AreEightAdjacent(a, b)) {
    return absl::InvalidArgumentError("nodes are not 8-adjacent");
  }
  return std::abs(grid.height(b) - grid.height(a)) / NodeDistance(grid, a, b);
}

double SteepestDescentSlope(const ElevationGrid& grid, const GridNode& node) {
  const double h = grid.height(node);
  double steepest = 0.0;
  for (const auto& offset : kNeighbourOffsets) {
    const GridNode other{node.row + offset[0], node.col + offset[1]};
    if (!grid.Contains(other)) continue;
    const double drop = (h - grid.height(other)) / NodeDistance(grid, node, other);
    steepest = std::max(steepest, drop);
  }
  return steepest;
}

absl::StatusOr<ObstacleMask> BuildObstacleMask(const ElevationGrid& grid,
                                               const BinaryMask* water_mask,
                                               const BinaryMask* foliage_mask,
                                               double steep_limit) {
  if (!(steep_limit > 0.0)) {
    return absl::InvalidArgumentError("steep limit must be positive");
  }
  for (const BinaryMask* mask : {water_mask, foliage_mask}) {
    if (mask != nullptr && !mask->header.SameShape(grid.header())) {
      return absl::InvalidArgumentError(absl::StrCat(
          "mask shape ", mask->header.n_cols, "x", mask->header.n_rows,
          " does not match grid ", grid.n_cols(), "x", grid.n_rows()));
    }
  }
  ObstacleMask out = ObstacleMask::Clear(grid);
  for (int row = 0; row < grid.n_rows(); ++row) {
    for (int col = 0; col < grid.n_cols(); ++col) {
      const GridNode node{row, col};
      if (water_mask != nullptr && water_mask->at(node)) {
        out.Set(node, ObstacleReason::kWater);
      } else if (foliage_mask != nullptr && foliage_mask->at(node)) {
        out.Set(node, ObstacleReason::kFoliageOrBuilding);
      } else if (SteepestDescentSlope(grid, node) > steep_limit) {
        out.Set(node, ObstacleReason::kSteep);
      }
    }
  }
  return out;
}

}  // namespace offroad
