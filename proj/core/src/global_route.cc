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

#include "offroad/global_route.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace offroad {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

int TableIndex(int state, int action) {
  return state * kNumMoves + (action - 1);
}

// Calls visit(node, target, slope, distance) for every admissible move out of
// every non-obstacle node.
template <typename Visitor>
void ForEachAdmissibleMove(const ElevationGrid& grid, const ObstacleMask& mask,
                           double slope_limit, Visitor&& visit) {
  for (int row = 0; row < grid.n_rows(); ++row) {
    for (int col = 0; col < grid.n_cols(); ++col) {
      const GridNode node{row, col};
      if (mask.blocked(node)) continue;
      for (int a = 0; a < kNumMoves; ++a) {
        const GridNode target{row + kNeighbourOffsets[a][0],
                              col + kNeighbourOffsets[a][1]};
        if (!grid.Contains(target) || mask.blocked(target)) continue;
        const double distance = NodeDistance(grid, node, target);
        const double slope =
            std::abs(grid.height(target) - grid.height(node)) / distance;
        if (slope > slope_limit) continue;
        visit(node, a + 1, target, slope, distance);
      }
    }
  }
}

absl::Status CheckMaskShape(const ElevationGrid& grid,
                            const ObstacleMask& mask) {
  if (mask.n_cols() != grid.n_cols() || mask.n_rows() != grid.n_rows()) {
    return absl::InvalidArgumentError("obstacle mask shape does not match grid");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<ScalingFactors> SolveScalingFactors(double mean_slope,
                                                   double mean_distance) {
  const double det = mean_slope - mean_distance;
  if (std::abs(det) <= 1e-12 * std::max(1.0, std::abs(mean_distance))) {
    return absl::FailedPreconditionError(absl::StrCat(
        "scaling system is singular (mean slope ", mean_slope,
        " equals mean distance ", mean_distance,
        "); supply alpha_m and alpha_d manually"));
  }
  // Cramer's rule on [[m, d], [1, 1]].
  ScalingFactors out;
  out.alpha_m = (1.0 - mean_distance) / det;
  out.alpha_d = (mean_slope - 1.0) / det;
  return out;
}

absl::StatusOr<ScalingFactors> ComputeScalingFactors(
    const ElevationGrid& grid, const ObstacleMask& mask,
    const WeatherCondition& weather) {
  if (absl::Status s = CheckMaskShape(grid, mask); !s.ok()) return s;
  if (absl::Status s = ValidateWeather(weather); !s.ok()) return s;
  double slope_sum = 0.0;
  double distance_sum = 0.0;
  long count = 0;
  ForEachAdmissibleMove(grid, mask, weather.slope_limit,
                        [&](const GridNode&, int, const GridNode&,
                            double slope, double distance) {
                          slope_sum += slope;
                          distance_sum += distance;
                          ++count;
                        });
  if (count == 0) {
    return absl::FailedPreconditionError(
        "no admissible transition exists under the active slope limit");
  }
  return SolveScalingFactors(slope_sum / count, distance_sum / count);
}

std::optional<int> DpProblem::StateOf(const GridNode& node) const {
  if (!grid_->Contains(node)) return std::nullopt;
  const int state = state_of_node_[grid_->Index(node)];
  if (state < 0) return std::nullopt;
  return state;
}

bool DpProblem::Admissible(int state, int action) const {
  if (action == kStayAction) return true;
  if (action < 1 || action > kNumMoves) return false;
  return successor_[TableIndex(state, action)] >= 0;
}

int DpProblem::Successor(int state, int action) const {
  if (action == kStayAction) return state;
  return successor_[TableIndex(state, action)];
}

double DpProblem::Cost(int state, int action) const {
  if (action == kStayAction) return state == goal_ ? 0.0 : kUnreachable;
  return cost_[TableIndex(state, action)];
}

double DpProblem::HopSlope(int state, int action) const {
  if (action == kStayAction) return 0.0;
  return slope_[TableIndex(state, action)];
}

absl::StatusOr<DpProblem> BuildDpProblem(const ElevationGrid& grid,
                                         const ObstacleMask& mask,
                                         const WeatherCondition& weather,
                                         const GridNode& goal,
                                         std::optional<ScalingFactors> scaling) {
  if (absl::Status s = CheckMaskShape(grid, mask); !s.ok()) return s;
  if (absl::Status s = ValidateWeather(weather); !s.ok()) return s;
  if (!grid.Contains(goal)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "goal (", goal.row, ",", goal.col, ") is outside the grid"));
  }
  if (mask.blocked(goal)) {
    return absl::InvalidArgumentError(
        absl::StrCat("goal (", goal.row, ",", goal.col, ") is an obstacle (",
                     ObstacleReasonName(mask.reason(goal)), ")"));
  }
  if (!scaling.has_value()) {
    absl::StatusOr<ScalingFactors> computed =
        ComputeScalingFactors(grid, mask, weather);
    if (!computed.ok()) return computed.status();
    scaling = *computed;
  }

  DpProblem problem;
  problem.grid_ = &grid;
  problem.weather_ = weather;
  problem.scaling_ = *scaling;
  problem.state_of_node_.assign(grid.size(), -1);
  for (int index = 0; index < grid.size(); ++index) {
    const GridNode node = grid.NodeAt(index);
    if (mask.blocked(node)) continue;
    problem.state_of_node_[index] = static_cast<int>(problem.nodes_.size());
    problem.nodes_.push_back(node);
  }
  problem.goal_ = problem.state_of_node_[grid.Index(goal)];

  const size_t table_size = problem.nodes_.size() * kNumMoves;
  problem.successor_.assign(table_size, -1);
  problem.cost_.assign(table_size, kUnreachable);
  problem.slope_.assign(table_size, 0.0);

  absl::Status status = absl::OkStatus();
  ForEachAdmissibleMove(
      grid, mask, weather.slope_limit,
      [&](const GridNode& node, int action, const GridNode& target,
          double slope, double distance) {
        const int state = problem.state_of_node_[grid.Index(node)];
        const int index = TableIndex(state, action);
        // The hop's mean slope is its endpoint slope: adjacent nodes have no
        // interior samples.
        const double cost =
            scaling->alpha_m * slope + scaling->alpha_d * distance;
        if (!(cost > 0.0) && status.ok()) {
          status = absl::FailedPreconditionError(absl::StrCat(
              "non-positive hop cost ", cost, " with alpha_m=",
              scaling->alpha_m, ", alpha_d=", scaling->alpha_d,
              "; supply scaling factors manually"));
        }
        problem.successor_[index] = problem.state_of_node_[grid.Index(target)];
        problem.cost_[index] = cost;
        problem.slope_[index] = slope;
      });
  if (!status.ok()) return status;
  return problem;
}

absl::StatusOr<ValueFunction> ValueIteration(
    const DpProblem& problem, const ValueIterationOptions& options) {
  if (!(options.tolerance > 0.0)) {
    return absl::InvalidArgumentError("tolerance must be positive");
  }
  const int max_sweeps =
      options.max_sweeps > 0
          ? options.max_sweeps
          : 4 * (problem.grid().n_rows() + problem.grid().n_cols());
  const int n = problem.num_states();

  ValueFunction out;
  out.value.assign(n, kUnreachable);
  out.value[problem.goal()] = 0.0;
  std::vector<double> next(n);

  auto backup = [&problem](const std::vector<double>& values, int s,
                           int* best_action) {
    double best = kUnreachable;
    int arg = 0;
    for (int a = 1; a <= kStayAction; ++a) {
      if (!problem.Admissible(s, a)) continue;
      const double candidate =
          problem.Cost(s, a) + values[problem.Successor(s, a)];
      if (candidate < best) {
        best = candidate;
        arg = a;
      }
    }
    if (best_action != nullptr) *best_action = arg;
    return best;
  };

  while (out.sweeps < max_sweeps) {
    double max_change = 0.0;
    for (int s = 0; s < n; ++s) {
      next[s] = backup(out.value, s, nullptr);
      const double old = out.value[s];
      if (next[s] != old) {
        const double change = (next[s] == kUnreachable || old == kUnreachable)
                                  ? kUnreachable
                                  : std::abs(next[s] - old);
        max_change = std::max(max_change, change);
      }
    }
    out.value.swap(next);
    ++out.sweeps;
    if (max_change < options.tolerance) {
      out.converged = true;
      break;
    }
  }

  out.policy.assign(n, 0);
  for (int s = 0; s < n; ++s) {
    if (!out.reachable(s)) continue;
    backup(out.value, s, &out.policy[s]);
  }
  return out;
}

absl::StatusOr<RouteResult> ExtractRoute(const ValueFunction& values,
                                         const DpProblem& problem,
                                         const GridNode& start) {
  std::optional<int> start_state = problem.StateOf(start);
  if (!start_state.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("start (", start.row, ",", start.col,
                     ") is outside the grid or an obstacle"));
  }
  RouteResult result;
  if (!values.reachable(*start_state)) return result;

  PlannedRoute& route = result.route;
  int state = *start_state;
  route.waypoints.push_back(problem.node(state));
  double slope_deg_sum = 0.0;
  int hops = 0;
  while (state != problem.goal()) {
    const int action = values.policy[state];
    if (action == 0 || action == kStayAction || hops > problem.num_states()) {
      return absl::InternalError("policy does not lead to the goal");
    }
    const int next = problem.Successor(state, action);
    route.total_cost += problem.Cost(state, action);
    route.total_distance +=
        NodeDistance(problem.grid(), problem.node(state), problem.node(next));
    const double slope_deg = std::atan(problem.HopSlope(state, action)) * kRadToDeg;
    slope_deg_sum += slope_deg;
    route.max_slope_deg = std::max(route.max_slope_deg, slope_deg);
    ++hops;
    state = next;
    route.waypoints.push_back(problem.node(state));
  }
  route.mean_slope_deg = hops > 0 ? slope_deg_sum / hops : 0.0;
  result.reachable = true;
  return result;
}

}  // namespace offroad
