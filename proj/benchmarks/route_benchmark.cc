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

#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "offroad/elevation_grid.h"
#include "offroad/global_route.h"
#include "offroad/traversability.h"

namespace offroad {
namespace {

ElevationGrid RandomTerrain(int n, std::mt19937_64& rng) {
  RasterHeader header;
  header.n_cols = n;
  header.n_rows = n;
  header.cell_size = 10.0;
  std::uniform_real_distribution<double> step(-0.8, 0.8);
  std::vector<double> heights(static_cast<size_t>(n) * n);
  for (double& h : heights) h = 100.0 + step(rng);
  return *ElevationGrid::Create(header, std::move(heights));
}

void BM_ValueIteration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  const ElevationGrid grid = RandomTerrain(n, rng);
  const GridNode goal{n / 2, n / 2};
  const DpProblem problem = *BuildDpProblem(grid, ObstacleMask::Clear(grid),
                                            WeatherCondition::Dry(), goal);
  ValueIterationOptions options;
  options.max_sweeps = problem.num_states() + 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ValueIteration(problem, options));
  }
  state.counters["states"] = problem.num_states();
}
BENCHMARK(BM_ValueIteration)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_BuildDpProblem(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(9);
  const ElevationGrid grid = RandomTerrain(n, rng);
  const ObstacleMask mask = ObstacleMask::Clear(grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        BuildDpProblem(grid, mask, WeatherCondition::Wet(), {0, 0}));
  }
}
BENCHMARK(BM_BuildDpProblem)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace offroad
