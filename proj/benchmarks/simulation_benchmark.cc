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
#include <memory>
#include <vector>

#include "benchmark/benchmark.h"
#include "offroad/desired_trajectory.h"
#include "offroad/elevation_grid.h"
#include "offroad/simulation.h"
#include "offroad/surface_model.h"

namespace offroad {
namespace {

std::shared_ptr<const SurfaceModel> Terrain() {
  RasterHeader header;
  header.n_cols = 36;
  header.n_rows = 31;
  header.cell_size = 1.0;
  header.origin = {870.0, 395.0};
  std::vector<double> heights(static_cast<size_t>(header.n_cols) * header.n_rows);
  for (int r = 0; r < header.n_rows; ++r) {
    for (int c = 0; c < header.n_cols; ++c) {
      heights[r * header.n_cols + c] = 0.01 * c + 0.02 * std::sin(0.5 * c + 0.3 * r);
    }
  }
  return std::make_shared<const SurfaceModel>(*ElevationGrid::Create(header, heights));
}

Scenario Tracking(double dt) {
  const std::vector<Eigen::Vector2d> waypoints = {
      {885.0, 418.5}, {892.5, 411.0}, {885.0, 403.5}};
  Scenario sc;
  sc.surface = Terrain();
  sc.desired = std::make_shared<const DesiredTrajectory>(
      *PlanTrajectory(waypoints, TpsmConfig{}, 2.0, sc.surface));
  sc.initial = *InitialStateOnTrajectory(*sc.desired, *sc.surface);
  sc.dt = dt;
  return sc;
}

void BM_RunSimulation(benchmark::State& state) {
  const Scenario sc = Tracking(1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunSimulation(sc));
  }
}
BENCHMARK(BM_RunSimulation)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_StepDynamics(benchmark::State& state) {
  const Scenario sc = Tracking(0.01);
  VehicleState s = sc.initial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        StepDynamics(s, ControlInput{0.1, 0.05}, *sc.surface, sc.params, 0.01));
  }
}
BENCHMARK(BM_StepDynamics);

}  // namespace
}  // namespace offroad
