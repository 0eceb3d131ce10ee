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

#ifndef OFFROAD_GLOBAL_ROUTE_H_
#define OFFROAD_GLOBAL_ROUTE_H_

#include <limits>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "offroad/elevation_grid.h"
#include "offroad/traversability.h"

namespace offroad {

// Actions 1..8 move to the E, NE, N, NW, W, SW, S, SE neighbour; 9 stays.
inline constexpr int kNumMoves = 8;
inline constexpr int kStayAction = 9;
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Weights of the hop cost alpha_m * slope + alpha_d * distance.
struct ScalingFactors {
  double alpha_m = 0.0;
  double alpha_d = 0.0;
};

// Solves [[mean_slope, mean_distance], [1, 1]] * [alpha_m, alpha_d] = [1, 1].
// FailedPrecondition when the system is singular (mean_slope equal to
// mean_distance); callers then have to supply the weights.
absl::StatusOr<ScalingFactors> SolveScalingFactors(double mean_slope,
                                                   double mean_distance);

// Averages slope and distance over every admissible move of every
// non-obstacle node under `weather`, then solves for the weights.
absl::StatusOr<ScalingFactors> ComputeScalingFactors(
    const ElevationGrid& grid, const ObstacleMask& mask,
    const WeatherCondition& weather);

// Deterministic shortest-path problem over the non-obstacle grid nodes.
//
// States are numbered densely in row-major node order. A move is admissible
// iff its target is inside the grid, not an obstacle, and the hop slope does
// not exceed the active weather's limit. Stay is admissible everywhere and
// costs 0 at the goal and +inf elsewhere.
class DpProblem {
 public:
  int num_states() const { return static_cast<int>(nodes_.size()); }
  int goal() const { return goal_; }
  GridNode node(int state) const { return nodes_[state]; }
  // State id of a grid node, or nullopt for obstacles / outside the grid.
  std::optional<int> StateOf(const GridNode& node) const;

  // `action` in 1..9.
  bool Admissible(int state, int action) const;
  // Successor state; the state itself for Stay. Requires Admissible().
  int Successor(int state, int action) const;
  double Cost(int state, int action) const;
  // Hop slope (rise over run) of a move action. Requires Admissible().
  double HopSlope(int state, int action) const;

  const ScalingFactors& scaling() const { return scaling_; }
  const WeatherCondition& weather() const { return weather_; }
  const ElevationGrid& grid() const { return *grid_; }

 private:
  friend absl::StatusOr<DpProblem> BuildDpProblem(
      const ElevationGrid&, const ObstacleMask&, const WeatherCondition&,
      const GridNode&, std::optional<ScalingFactors>);

  const ElevationGrid* grid_ = nullptr;
  WeatherCondition weather_;
  ScalingFactors scaling_;
  int goal_ = 0;
  std::vector<GridNode> nodes_;
  std::vector<int> state_of_node_;  // -1 for obstacles.
  // Per (state, move) tables, index state * 8 + (action - 1). Successor is -1
  // for inadmissible moves.
  std::vector<int> successor_;
  std::vector<double> cost_;
  std::vector<double> slope_;
};

// `grid` must outlive the returned problem. When `scaling` is absent the
// weights come from ComputeScalingFactors(). InvalidArgument if the goal is
// outside the grid or an obstacle, or if any hop cost is not positive.
absl::StatusOr<DpProblem> BuildDpProblem(
    const ElevationGrid& grid, const ObstacleMask& mask,
    const WeatherCondition& weather, const GridNode& goal,
    std::optional<ScalingFactors> scaling = std::nullopt);

struct ValueFunction {
  std::vector<double> value;  // kUnreachable for states that cannot reach goal.
  std::vector<int> policy;    // Optimal action 1..9, 0 when unreachable.
  bool converged = false;
  int sweeps = 0;

  bool reachable(int state) const { return value[state] != kUnreachable; }
};

struct ValueIterationOptions {
  double tolerance = 1e-9;
  // 0 selects 4 * (n_rows + n_cols).
  int max_sweeps = 0;
};

// Synchronous (Jacobi) value iteration on the undiscounted Bellman equation.
// Values start at +inf with the goal at 0. Ties in the policy go to the
// lowest action id. A result that hit max_sweeps is returned with
// converged == false.
absl::StatusOr<ValueFunction> ValueIteration(
    const DpProblem& problem, const ValueIterationOptions& options = {});

struct PlannedRoute {
  std::vector<GridNode> waypoints;  // start ... goal
  double total_cost = 0.0;
  double total_distance = 0.0;  // meters
  double mean_slope_deg = 0.0;
  double max_slope_deg = 0.0;
};

struct RouteResult {
  bool reachable = false;
  PlannedRoute route;  // Empty when unreachable.
};

// Follows the policy from `start` to the goal. An unreachable start yields
// reachable == false rather than an error.
absl::StatusOr<RouteResult> ExtractRoute(const ValueFunction& values,
                                         const DpProblem& problem,
                                         const GridNode& start);

}  // namespace offroad

#endif  // OFFROAD_GLOBAL_ROUTE_H_
