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

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "offroad/global_route.h"
#include "offroad/route_io.h"
#include "offroad/traversability.h"
#include "test_util.h"

namespace offroad {
namespace {

using ::offroad::testing::DijkstraCostToGoal;
using ::offroad::testing::FromRows;
using ::offroad::testing::MakeGrid;
using ::offroad::testing::MakeRandomWorld;
using ::offroad::testing::RandomWorld;

ElevationGrid Flat(int n_cols, int n_rows, double cell) {
  return MakeGrid(n_cols, n_rows, cell, [](double, double) { return 0.0; });
}

struct Solved {
  DpProblem problem;
  ValueFunction values;
};

Solved Solve(const ElevationGrid& grid, const ObstacleMask& mask,
             const WeatherCondition& weather, const GridNode& goal,
             std::optional<ScalingFactors> scaling = std::nullopt) {
  absl::StatusOr<DpProblem> problem =
      BuildDpProblem(grid, mask, weather, goal, scaling);
  EXPECT_TRUE(problem.ok()) << problem.status();
  ValueIterationOptions options;
  options.max_sweeps = problem->num_states() + 1;
  absl::StatusOr<ValueFunction> values = ValueIteration(*problem, options);
  EXPECT_TRUE(values.ok()) << values.status();
  EXPECT_TRUE(values->converged);
  return {*std::move(problem), *std::move(values)};
}

// ---- scaling factors --------------------------------------------------------

TEST(ScalingFactorsTest, FlatTerrain) {
  const ScalingFactors s = *SolveScalingFactors(0.0, 10.0);
  EXPECT_NEAR(s.alpha_d, 0.1, 1e-15);
  EXPECT_NEAR(s.alpha_m, 0.9, 1e-15);
}

TEST(ScalingFactorsTest, SingularSystem) {
  absl::StatusOr<ScalingFactors> s = SolveScalingFactors(1.0, 1.0);
  ASSERT_FALSE(s.ok());
  EXPECT_NE(s.status().message().find("manual"), absl::string_view::npos)
      << s.status();
}

TEST(ScalingFactorsTest, ResidualOfLinearSolve) {
  const ScalingFactors s = *SolveScalingFactors(0.05, 12.0);
  EXPECT_LT(std::abs(0.05 * s.alpha_m + 12.0 * s.alpha_d - 1.0), 1e-12);
  EXPECT_LT(std::abs(s.alpha_m + s.alpha_d - 1.0), 1e-12);
}

TEST(ScalingFactorsTest, AveragesOverAdmissibleMoves) {
  // Flat 2x1 grid: two admissible moves of length 10, slope 0.
  ElevationGrid grid = Flat(2, 1 + 1, 10.0);
  ObstacleMask mask = ObstacleMask::Clear(grid);
  mask.Set({1, 0}, ObstacleReason::kWater);
  mask.Set({1, 1}, ObstacleReason::kWater);
  const ScalingFactors s =
      *ComputeScalingFactors(grid, mask, WeatherCondition::Dry());
  EXPECT_NEAR(s.alpha_d, 0.1, 1e-15);
  EXPECT_NEAR(s.alpha_m, 0.9, 1e-15);
}

TEST(ScalingFactorsTest, NoAdmissibleMoveIsAnError) {
  ElevationGrid grid = Flat(2, 2, 1.0);
  ObstacleMask mask = ObstacleMask::Clear(grid);
  for (int i = 1; i < 4; ++i) mask.Set(grid.NodeAt(i), ObstacleReason::kWater);
  EXPECT_FALSE(ComputeScalingFactors(grid, mask, WeatherCondition::Dry()).ok());
}

// ---- problem construction ------------------------------------------------------

TEST(BuildDpProblemTest, InteriorNodeHasAllMoves) {
  ElevationGrid grid = Flat(3, 3, 1.0);
  DpProblem p = *BuildDpProblem(grid, ObstacleMask::Clear(grid),
                                WeatherCondition::Dry(), {0, 0});
  const int centre = *p.StateOf({1, 1});
  for (int a = 1; a <= kStayAction; ++a) EXPECT_TRUE(p.Admissible(centre, a)) << a;
  EXPECT_EQ(p.Successor(centre, kStayAction), centre);
  EXPECT_EQ(p.Cost(centre, kStayAction), kUnreachable);
  EXPECT_EQ(p.Cost(p.goal(), kStayAction), 0.0);
  // Actions 1..8: E, NE, N, NW, W, SW, S, SE.
  const GridNode expected[8] = {{1, 2}, {0, 2}, {0, 1}, {0, 0},
                                {1, 0}, {2, 0}, {2, 1}, {2, 2}};
  for (int a = 1; a <= kNumMoves; ++a) {
    const GridNode n = p.node(p.Successor(centre, a));
    EXPECT_EQ(n.row, expected[a - 1].row) << a;
    EXPECT_EQ(n.col, expected[a - 1].col) << a;
  }
  const int corner = *p.StateOf({2, 2});
  int moves = 0;
  for (int a = 1; a <= kNumMoves; ++a) moves += p.Admissible(corner, a);
  EXPECT_EQ(moves, 3);
}

TEST(BuildDpProblemTest, SteepMoveRejectedUnderBothLimits) {
  ElevationGrid grid = FromRows({{0.0, 2.0}, {0.0, 2.0}}, 10.0);
  for (const WeatherCondition& w :
       {WeatherCondition::Wet(), WeatherCondition::Dry()}) {
    DpProblem p = *BuildDpProblem(grid, ObstacleMask::Clear(grid), w, {0, 1},
                                  ScalingFactors{0.5, 0.5});
    EXPECT_FALSE(p.Admissible(*p.StateOf({0, 0}), 1));
    EXPECT_FALSE(p.Admissible(*p.StateOf({0, 1}), 5));
  }
  ElevationGrid gentle = FromRows({{0.0, 1.0}, {0.0, 1.0}}, 10.0);
  DpProblem dry = *BuildDpProblem(gentle, ObstacleMask::Clear(gentle),
                                  WeatherCondition::Dry(), {0, 1},
                                  ScalingFactors{0.5, 0.5});
  EXPECT_TRUE(dry.Admissible(*dry.StateOf({0, 0}), 1));
  EXPECT_NEAR(dry.HopSlope(*dry.StateOf({0, 0}), 1), 0.1, 1e-15);
  EXPECT_NEAR(dry.Cost(*dry.StateOf({0, 0}), 1), 0.5 * 0.1 + 0.5 * 10, 1e-12);
  DpProblem wet = *BuildDpProblem(gentle, ObstacleMask::Clear(gentle),
                                  WeatherCondition::Wet(), {0, 1},
                                  ScalingFactors{0.5, 0.5});
  EXPECT_FALSE(wet.Admissible(*wet.StateOf({0, 0}), 1));
}

TEST(BuildDpProblemTest, ObstaclesAreNotStates) {
  ElevationGrid grid = Flat(3, 3, 1.0);
  ObstacleMask mask = ObstacleMask::Clear(grid);
  mask.Set({1, 2}, ObstacleReason::kWater);
  DpProblem p = *BuildDpProblem(grid, mask, WeatherCondition::Dry(), {0, 0});
  EXPECT_EQ(p.num_states(), 8);
  EXPECT_FALSE(p.StateOf({1, 2}).has_value());
  EXPECT_FALSE(p.Admissible(*p.StateOf({1, 1}), 1));
}

TEST(BuildDpProblemTest, RejectsBadGoal) {
  ElevationGrid grid = Flat(3, 3, 1.0);
  ObstacleMask mask = ObstacleMask::Clear(grid);
  mask.Set({1, 1}, ObstacleReason::kWater);
  EXPECT_FALSE(BuildDpProblem(grid, mask, WeatherCondition::Dry(), {1, 1}).ok());
  EXPECT_FALSE(BuildDpProblem(grid, mask, WeatherCondition::Dry(), {3, 0}).ok());
}

TEST(BuildDpProblemTest, CostsPositiveAndTransitionsInside) {
  std::mt19937_64 rng(21);
  RandomWorld w = MakeRandomWorld(rng, 12);
  DpProblem p = *BuildDpProblem(w.grid, w.mask, WeatherCondition::Dry(), w.goal);
  for (int s = 0; s < p.num_states(); ++s) {
    for (int a = 1; a <= kNumMoves; ++a) {
      if (!p.Admissible(s, a)) continue;
      const int next = p.Successor(s, a);
      ASSERT_GE(next, 0);
      ASSERT_LT(next, p.num_states());
      EXPECT_GT(p.Cost(s, a), 0.0);
      EXPECT_LE(p.HopSlope(s, a), kDrySlopeLimit);
    }
  }
}

// ---- value iteration --------------------------------------------------------------

TEST(ValueIterationTest, GoalIsZeroWithStay) {
  ElevationGrid grid = Flat(4, 4, 2.0);
  Solved s = Solve(grid, ObstacleMask::Clear(grid), WeatherCondition::Dry(), {2, 1});
  EXPECT_EQ(s.values.value[s.problem.goal()], 0.0);
  EXPECT_EQ(s.values.policy[s.problem.goal()], kStayAction);
}

TEST(ValueIterationTest, SingleStep) {
  ElevationGrid grid = Flat(2, 1 + 1, 1.0);
  ObstacleMask mask = ObstacleMask::Clear(grid);
  mask.Set({1, 0}, ObstacleReason::kWater);
  mask.Set({1, 1}, ObstacleReason::kWater);
  const ScalingFactors scaling{0.3, 0.7};
  Solved s = Solve(grid, mask, WeatherCondition::Dry(), {0, 1}, scaling);
  const int left = *s.problem.StateOf({0, 0});
  EXPECT_DOUBLE_EQ(s.values.value[left], 0.7 * 1.0);
  EXPECT_EQ(s.values.policy[left], 1);
}

TEST(ValueIterationTest, RejectsBadTolerance) {
  ElevationGrid grid = Flat(2, 2, 1.0);
  DpProblem p = *BuildDpProblem(grid, ObstacleMask::Clear(grid),
                                WeatherCondition::Dry(), {0, 0});
  ValueIterationOptions options;
  options.tolerance = 0.0;
  EXPECT_FALSE(ValueIteration(p, options).ok());
}

TEST(ValueIterationTest, FlagsNonConvergence) {
  ElevationGrid grid = Flat(20, 1 + 1, 1.0);
  DpProblem p = *BuildDpProblem(grid, ObstacleMask::Clear(grid),
                                WeatherCondition::Dry(), {0, 0});
  ValueIterationOptions options;
  options.max_sweeps = 3;
  absl::StatusOr<ValueFunction> v = ValueIteration(p, options);
  ASSERT_TRUE(v.ok());
  EXPECT_FALSE(v->converged);
  EXPECT_EQ(v->sweeps, 3);
}

TEST(ValueIterationTest, UnreachableStatesHaveNoPolicy) {
  // Middle column of water splits the grid.
  ElevationGrid grid = Flat(5, 3, 1.0);
  ObstacleMask mask = ObstacleMask::Clear(grid);
  for (int r = 0; r < 3; ++r) mask.Set({r, 2}, ObstacleReason::kWater);
  Solved s = Solve(grid, mask, WeatherCondition::Dry(), {1, 0});
  const int far = *s.problem.StateOf({1, 4});
  EXPECT_FALSE(s.values.reachable(far));
  EXPECT_EQ(s.values.policy[far], 0);
  EXPECT_TRUE(s.values.reachable(*s.problem.StateOf({2, 1})));
}

TEST(ValueIterationTest, MatchesDijkstraOnRandomGrids) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    RandomWorld w = MakeRandomWorld(rng, 50);
    for (const WeatherCondition& weather :
         {WeatherCondition::Dry(), WeatherCondition::Wet()}) {
      Solved s = Solve(w.grid, w.mask, weather, w.goal);
      const std::vector<double> oracle = DijkstraCostToGoal(
          w.grid, w.mask, weather.slope_limit, s.problem.scaling(), w.goal);
      for (int st = 0; st < s.problem.num_states(); ++st) {
        const double expected = oracle[w.grid.Index(s.problem.node(st))];
        const double got = s.values.value[st];
        if (std::isinf(expected)) {
          EXPECT_TRUE(std::isinf(got));
        } else {
          EXPECT_NEAR(got, expected, 1e-9 * std::max(1.0, expected));
        }
      }
    }
  }
}

TEST(ValueIterationTest, BellmanResidualAtFixedPoint) {
  std::mt19937_64 rng(99);
  RandomWorld w = MakeRandomWorld(rng, 30);
  Solved s = Solve(w.grid, w.mask, WeatherCondition::Dry(), w.goal);
  for (int st = 0; st < s.problem.num_states(); ++st) {
    if (!s.values.reachable(st)) continue;
    double best = kUnreachable;
    for (int a = 1; a <= kStayAction; ++a) {
      if (!s.problem.Admissible(st, a)) continue;
      best = std::min(best, s.problem.Cost(st, a) +
                                s.values.value[s.problem.Successor(st, a)]);
    }
    EXPECT_NEAR(best, s.values.value[st], 1e-9);
    const int a = s.values.policy[st];
    EXPECT_NEAR(s.problem.Cost(st, a) + s.values.value[s.problem.Successor(st, a)],
                s.values.value[st], 1e-9);
  }
}

TEST(ValueIterationTest, TighterLimitNeverHelps) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    RandomWorld w = MakeRandomWorld(rng, 25);
    const ScalingFactors scaling{0.4, 0.6};
    Solved dry = Solve(w.grid, w.mask, WeatherCondition::Dry(), w.goal, scaling);
    Solved wet = Solve(w.grid, w.mask, WeatherCondition::Wet(), w.goal, scaling);
    for (int st = 0; st < dry.problem.num_states(); ++st) {
      EXPECT_GE(wet.values.value[st], dry.values.value[st] - 1e-12);
    }
  }
}

// ---- route extraction ----------------------------------------------------------------

TEST(ExtractRouteTest, StartEqualsGoal) {
  ElevationGrid grid = Flat(3, 3, 1.0);
  Solved s = Solve(grid, ObstacleMask::Clear(grid), WeatherCondition::Dry(), {1, 1});
  RouteResult r = *ExtractRoute(s.values, s.problem, {1, 1});
  ASSERT_TRUE(r.reachable);
  EXPECT_EQ(r.route.waypoints.size(), 1u);
  EXPECT_EQ(r.route.total_cost, 0.0);
  EXPECT_EQ(r.route.total_distance, 0.0);
}

TEST(ExtractRouteTest, FlatDiagonal) {
  ElevationGrid grid = Flat(5, 5, 3.0);
  Solved s = Solve(grid, ObstacleMask::Clear(grid), WeatherCondition::Dry(), {0, 4});
  RouteResult r = *ExtractRoute(s.values, s.problem, {4, 0});
  ASSERT_TRUE(r.reachable);
  ASSERT_EQ(r.route.waypoints.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(r.route.waypoints[i].row, 4 - i);
    EXPECT_EQ(r.route.waypoints[i].col, i);
  }
  EXPECT_NEAR(r.route.total_distance, 4 * 3.0 * std::numbers::sqrt2, 1e-12);
  EXPECT_EQ(r.route.max_slope_deg, 0.0);
}

TEST(ExtractRouteTest, RidgeFlipsWithWeather) {
  // Flank slope 0.08 between the two limits.
  std::vector<std::vector<double>> rows(5, std::vector<double>(9));
  for (auto& row : rows) {
    for (int c = 0; c < 9; ++c) row[c] = 0.8 * (4 - std::abs(c - 4));
  }
  ElevationGrid grid = FromRows(rows, 10.0);
  ObstacleMask clear = ObstacleMask::Clear(grid);
  Solved dry = Solve(grid, clear, WeatherCondition::Dry(), {2, 8});
  RouteResult r = *ExtractRoute(dry.values, dry.problem, {2, 0});
  ASSERT_TRUE(r.reachable);
  EXPECT_LE(r.route.max_slope_deg, std::atan(kDrySlopeLimit) * 180 / std::numbers::pi);
  Solved wet = Solve(grid, clear, WeatherCondition::Wet(), {2, 8});
  RouteResult u = *ExtractRoute(wet.values, wet.problem, {2, 0});
  EXPECT_FALSE(u.reachable);
  EXPECT_TRUE(u.route.waypoints.empty());
}

TEST(ExtractRouteTest, ObstacleStartIsAnError) {
  ElevationGrid grid = Flat(3, 3, 1.0);
  ObstacleMask mask = ObstacleMask::Clear(grid);
  mask.Set({2, 2}, ObstacleReason::kWater);
  Solved s = Solve(grid, mask, WeatherCondition::Dry(), {0, 0});
  EXPECT_FALSE(ExtractRoute(s.values, s.problem, {2, 2}).ok());
}

TEST(ExtractRouteTest, RoutesRespectLimitAndAdjacency) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    RandomWorld w = MakeRandomWorld(rng, 30);
    for (const WeatherCondition& weather :
         {WeatherCondition::Dry(), WeatherCondition::Wet()}) {
      Solved s = Solve(w.grid, w.mask, weather, w.goal);
      for (int st = 0; st < s.problem.num_states(); st += 7) {
        RouteResult r = *ExtractRoute(s.values, s.problem, s.problem.node(st));
        EXPECT_EQ(r.reachable, s.values.reachable(st));
        if (!r.reachable) continue;
        EXPECT_NEAR(r.route.total_cost, s.values.value[st], 1e-9);
        const auto& wp = r.route.waypoints;
        for (size_t i = 1; i < wp.size(); ++i) {
          ASSERT_TRUE(AreEightAdjacent(wp[i - 1], wp[i]));
          EXPECT_LE(*SlopeBetween(w.grid, wp[i - 1], wp[i]), weather.slope_limit);
        }
        EXPECT_LE(r.route.max_slope_deg,
                  std::atan(weather.slope_limit) * 180 / std::numbers::pi + 1e-12);
      }
    }
  }
}

TEST(ExtractRouteTest, Deterministic) {
  std::mt19937_64 rng(8);
  RandomWorld w = MakeRandomWorld(rng, 20);
  Solved a = Solve(w.grid, w.mask, WeatherCondition::Dry(), w.goal);
  Solved b = Solve(w.grid, w.mask, WeatherCondition::Dry(), w.goal);
  EXPECT_EQ(a.values.policy, b.values.policy);
  EXPECT_EQ(a.values.value, b.values.value);
}

// ---- route csv -------------------------------------------------------------------------

TEST(RouteCsvTest, RoundTrip) {
  ElevationGrid grid = MakeGrid(6, 6, 5.0, [](double x, double y) {
    return 0.01 * x + 0.02 * y;
  }, {100.0, 200.0});
  Solved s = Solve(grid, ObstacleMask::Clear(grid), WeatherCondition::Dry(), {0, 5});
  RouteResult r = *ExtractRoute(s.values, s.problem, {5, 0});
  std::ostringstream out;
  ASSERT_TRUE(WriteRouteCsv(grid, r.route, out).ok());
  EXPECT_EQ(out.str().rfind("# total_cost=", 0), 0u);
  std::istringstream in(out.str());
  absl::StatusOr<RouteTable> table = ParseRouteCsv(in, "route.csv");
  ASSERT_TRUE(table.ok()) << table.status();
  ASSERT_EQ(table->points.size(), r.route.waypoints.size());
  EXPECT_EQ(table->route.total_cost, r.route.total_cost);
  EXPECT_EQ(table->route.total_distance, r.route.total_distance);
  for (size_t i = 0; i < table->points.size(); ++i) {
    EXPECT_EQ(table->points[i].node.row, r.route.waypoints[i].row);
    EXPECT_EQ(table->points[i].node.col, r.route.waypoints[i].col);
    const Eigen::Vector2d p = grid.NodePosition(r.route.waypoints[i]);
    EXPECT_EQ(table->points[i].position.x(), p.x());
    EXPECT_EQ(table->points[i].position.z(), grid.height(r.route.waypoints[i]));
  }
  EXPECT_NEAR(table->points.back().cum_dist_m, r.route.total_distance, 1e-12);
}

TEST(RouteCsvTest, RejectsMalformed) {
  const char* cases[] = {
      "",
      "idx,node_row,node_col,x_m,y_m,z_m,hop_slope_deg,cum_dist_m\n",
      "# total_cost=1,total_dist_m=1,mean_slope_deg=0,max_slope_deg=0\n"
      "idx,node_row,node_col,x_m,y_m,z_m,hop_slope_deg,cum_dist_m\n"
      "0,0,0,1,2\n",
      "# total_cost=1,total_dist_m=1,mean_slope_deg=0,max_slope_deg=0\n"
      "idx,node_row,node_col,x_m,y_m,z_m,hop_slope_deg,cum_dist_m\n"
      "0,0,0,1,2,x,0,0\n",
  };
  for (const char* text : cases) {
    std::istringstream in(text);
    EXPECT_FALSE(ParseRouteCsv(in, "r.csv").ok()) << text;
  }
}

}  // namespace
}  // namespace offroad
