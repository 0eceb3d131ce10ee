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
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "offroad/elevation_grid.h"
#include "offroad/surface_model.h"

namespace offroad {
namespace {

ElevationGrid Waves(int n) {
  RasterHeader header;
  header.n_cols = n;
  header.n_rows = n;
  header.cell_size = 1.0;
  std::vector<double> heights(static_cast<size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      heights[r * n + c] = std::sin(0.3 * c) * std::cos(0.2 * r);
    }
  }
  return *ElevationGrid::Create(header, std::move(heights));
}

void BM_SurfaceBuild(benchmark::State& state) {
  const ElevationGrid grid = Waves(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    SurfaceModel model(grid);
    benchmark::DoNotOptimize(model);
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_SurfaceBuild)->Arg(64)->Arg(256);

void BM_SurfaceEvaluate(benchmark::State& state) {
  const SurfaceModel model(Waves(128));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 127.0);
  std::vector<std::pair<double, double>> points(4096);
  for (auto& p : points) p = {u(rng), u(rng)};
  size_t i = 0;
  for (auto _ : state) {
    const auto& [x, y] = points[i++ & 4095];
    benchmark::DoNotOptimize(model.Evaluate(x, y));
  }
}
BENCHMARK(BM_SurfaceEvaluate);

void BM_EulerRates(benchmark::State& state) {
  const SurfaceModel model(Waves(128));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeEulerRates(model, 40.3, 71.9, 1.5, -0.7));
  }
}
BENCHMARK(BM_EulerRates);

}  // namespace
}  // namespace offroad
