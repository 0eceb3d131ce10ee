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

#ifndef OFFROAD_TRAVERSABILITY_H_
#define OFFROAD_TRAVERSABILITY_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "offroad/elevation_grid.h"

namespace offroad {

// Slope limits (rise over run) for the two weather regimes.
inline constexpr double kDrySlopeLimit = 0.12101329676510730;  // tan(6.90 deg)
inline constexpr double kWetSlopeLimit = 0.04838332158497369;  // tan(2.77 deg)

enum class WeatherKind { kDry, kWet };

struct WeatherCondition {
  WeatherKind kind = WeatherKind::kDry;
  double slope_limit = kDrySlopeLimit;

  static WeatherCondition Dry(double limit = kDrySlopeLimit) {
    return {WeatherKind::kDry, limit};
  }
  static WeatherCondition Wet(double limit = kWetSlopeLimit) {
    return {WeatherKind::kWet, limit};
  }
};

const char* WeatherName(WeatherKind kind);

// Checks slope_limit > 0 and, when `dry_limit` is given for a wet condition,
// that the wet limit does not exceed it.
absl::Status ValidateWeather(const WeatherCondition& weather,
                             std::optional<double> dry_limit = std::nullopt);

enum class ObstacleReason : std::uint8_t {
  kClear,
  kWater,
  kFoliageOrBuilding,
  kSteep,
};

const char* ObstacleReasonName(ObstacleReason reason);

// Per-node obstacle classification. blocked(i) <=> reason(i) != kClear.
class ObstacleMask {
 public:
  ObstacleMask() = default;
  ObstacleMask(int n_cols, int n_rows)
      : n_cols_(n_cols),
        n_rows_(n_rows),
        reasons_(static_cast<size_t>(n_cols) * n_rows, ObstacleReason::kClear) {}

  // All-clear mask matching `grid`.
  static ObstacleMask Clear(const ElevationGrid& grid) {
    return ObstacleMask(grid.n_cols(), grid.n_rows());
  }

  int n_cols() const { return n_cols_; }
  int n_rows() const { return n_rows_; }
  ObstacleReason reason(const GridNode& node) const {
    return reasons_[node.row * n_cols_ + node.col];
  }
  bool blocked(const GridNode& node) const {
    return reason(node) != ObstacleReason::kClear;
  }
  void Set(const GridNode& node, ObstacleReason reason) {
    reasons_[node.row * n_cols_ + node.col] = reason;
  }
  int BlockedCount() const;

 private:
  int n_cols_ = 0;
  int n_rows_ = 0;
  std::vector<ObstacleReason> reasons_;
};

// The eight compass neighbours in action order: E, NE, N, NW, W, SW, S, SE.
// Offsets are (d_row, d_col); north is row - 1.
inline constexpr int kNeighbourOffsets[8][2] = {
    {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}};

bool AreEightAdjacent(const GridNode& a, const GridNode& b);

// Planar distance between two nodes.
double NodeDistance(const ElevationGrid& grid, const GridNode& a,
                    const GridNode& b);

// |h_b - h_a| / planar distance between 8-adjacent nodes.
absl::StatusOr<double> SlopeBetween(const ElevationGrid& grid,
                                    const GridNode& a, const GridNode& b);

// Steepest-descent (D8) slope at a node: the largest drop to any
// 8-neighbour divided by the distance to it, or 0 for local minima.
double SteepestDescentSlope(const ElevationGrid& grid, const GridNode& node);

// Marks a node blocked when it is water, foliage/building, or its
// steepest-descent slope exceeds `steep_limit`; the first matching reason in
// that order is recorded. Absent masks contribute nothing. InvalidArgument
// when a mask's dimensions differ from the grid.
absl::StatusOr<ObstacleMask> BuildObstacleMask(
    const ElevationGrid& grid, const BinaryMask* water_mask,
    const BinaryMask* foliage_mask, double steep_limit);

}  // namespace offroad

#endif  // OFFROAD_TRAVERSABILITY_H_
