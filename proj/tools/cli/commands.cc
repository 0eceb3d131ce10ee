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

#include "cli/commands.h"

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "cli/run_config.h"
#include "cli/svg_render.h"
#include "offroad/desired_trajectory.h"
#include "offroad/route_io.h"
#include "offroad/simulation.h"
#include "offroad/surface_model.h"

namespace offroad::cli {
namespace {

namespace fs = std::filesystem;

int InputError(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return kExitInputError;
}

// Writes through a buffer so a failed run never leaves a partial file.
absl::Status WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot open %s for writing", path));
  }
  file << contents;
  file.close();
  if (!file) return absl::InternalError(absl::StrFormat("failed writing %s", path));
  return absl::OkStatus();
}

absl::StatusOr<WeatherCondition> WeatherFromArgs(const std::string& kind,
                                                 std::optional<double> limit) {
  WeatherCondition weather;
  if (kind == "dry") {
    weather = WeatherCondition::Dry();
  } else if (kind == "wet") {
    weather = WeatherCondition::Wet();
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("--weather must be dry or wet (got '%s')", kind));
  }
  if (limit.has_value()) weather.slope_limit = *limit;
  if (absl::Status s = ValidateWeather(weather); !s.ok()) return s;
  return weather;
}

struct Layers {
  std::optional<BinaryMask> water;
  std::optional<BinaryMask> foliage;
};

absl::StatusOr<Layers> LoadLayers(const std::string& water,
                                  const std::string& foliage) {
  Layers layers;
  if (!water.empty()) {
    absl::StatusOr<BinaryMask> m = LoadBinaryMask(water);
    if (!m.ok()) return m.status();
    layers.water = *std::move(m);
  }
  if (!foliage.empty()) {
    absl::StatusOr<BinaryMask> m = LoadBinaryMask(foliage);
    if (!m.ok()) return m.status();
    layers.foliage = *std::move(m);
  }
  return layers;
}

const BinaryMask* Ptr(const std::optional<BinaryMask>& m) {
  return m.has_value() ? &*m : nullptr;
}

void PrintRouteSummary(const PlannedRoute& route, std::ostream& out) {
  out << absl::StrFormat(
      "route: reachable waypoints=%d total_cost=%.6f total_dist_m=%.3f "
      "mean_slope_deg=%.4f max_slope_deg=%.4f\n",
      route.waypoints.size(), route.total_cost, route.total_distance,
      route.mean_slope_deg, route.max_slope_deg);
}

}  // namespace

absl::StatusOr<RoutePlan> PlanGlobalRoute(const ElevationGrid& grid,
                                          const BinaryMask* water,
                                          const BinaryMask* foliage,
                                          const WeatherCondition& weather,
                                          std::optional<double> steep_limit,
                                          const GridNode& start,
                                          const GridNode& goal) {
  for (const auto& [name, node] : {std::pair{"start", start}, std::pair{"goal", goal}}) {
    if (!grid.Contains(node)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s (%d,%d) lies outside the %dx%d grid", name, node.row, node.col,
          grid.n_rows(), grid.n_cols()));
    }
  }
  absl::StatusOr<ObstacleMask> mask = BuildObstacleMask(
      grid, water, foliage, steep_limit.value_or(weather.slope_limit));
  if (!mask.ok()) return mask.status();
  for (const auto& [name, node] : {std::pair{"start", start}, std::pair{"goal", goal}}) {
    if (mask->blocked(node)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s (%d,%d) is an obstacle (%s)", name, node.row, node.col,
          ObstacleReasonName(mask->reason(node))));
    }
  }
  absl::StatusOr<DpProblem> problem = BuildDpProblem(grid, *mask, weather, goal);
  if (!problem.ok()) return problem.status();
  ValueIterationOptions options;
  options.max_sweeps = problem->num_states() + 1;
  absl::StatusOr<ValueFunction> values = ValueIteration(*problem, options);
  if (!values.ok()) return values.status();
  if (!values->converged) {
    return absl::InternalError("value iteration did not converge");
  }
  absl::StatusOr<RouteResult> result = ExtractRoute(*values, *problem, start);
  if (!result.ok()) return result.status();
  RoutePlan plan;
  plan.mask = *std::move(mask);
  plan.result = *std::move(result);
  return plan;
}

absl::StatusOr<GridNode> ParseNodeArg(const std::string& text) {
  std::vector<std::string> parts = absl::StrSplit(text, ',');
  GridNode node;
  if (parts.size() != 2 || !absl::SimpleAtoi(parts[0], &node.row) ||
      !absl::SimpleAtoi(parts[1], &node.col)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("expected R,C grid node, got '%s'", text));
  }
  return node;
}

int RunRouteCommand(const RouteOptions& options, std::ostream& out,
                    std::ostream& err) {
  absl::StatusOr<GridNode> start = ParseNodeArg(options.start);
  if (!start.ok()) return InputError(err, start.status());
  absl::StatusOr<GridNode> goal = ParseNodeArg(options.goal);
  if (!goal.ok()) return InputError(err, goal.status());
  absl::StatusOr<WeatherCondition> weather =
      WeatherFromArgs(options.weather, options.slope_limit);
  if (!weather.ok()) return InputError(err, weather.status());
  absl::StatusOr<ElevationGrid> grid = LoadElevationGrid(options.grid);
  if (!grid.ok()) return InputError(err, grid.status());
  absl::StatusOr<Layers> layers = LoadLayers(options.water, options.foliage);
  if (!layers.ok()) return InputError(err, layers.status());

  absl::StatusOr<RoutePlan> plan =
      PlanGlobalRoute(*grid, Ptr(layers->water), Ptr(layers->foliage), *weather,
                      options.steep_limit, *start, *goal);
  if (!plan.ok()) return InputError(err, plan.status());
  if (!plan->result.reachable) {
    err << absl::StrFormat(
        "UNREACHABLE: goal (%d,%d) cannot be reached from (%d,%d) under %s "
        "weather (slope limit %.6f)\n",
        goal->row, goal->col, start->row, start->col,
        WeatherName(weather->kind), weather->slope_limit);
    return kExitUnreachable;
  }
  std::ostringstream csv;
  if (absl::Status s = WriteRouteCsv(*grid, plan->result.route, csv); !s.ok()) {
    return InputError(err, s);
  }
  if (absl::Status s = WriteFile(options.out, csv.str()); !s.ok()) {
    return InputError(err, s);
  }
  PrintRouteSummary(plan->result.route, out);
  return kExitOk;
}

int RunSimulateCommand(const std::string& config_path, const std::string& out_dir,
                       std::ostream& out, std::ostream& err) {
  absl::StatusOr<RunConfig> config = LoadRunConfig(config_path);
  if (!config.ok()) return InputError(err, config.status());
  absl::StatusOr<ElevationGrid> grid = LoadElevationGrid(config->grid_path);
  if (!grid.ok()) return InputError(err, grid.status());

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    return InputError(err, absl::PermissionDeniedError(absl::StrFormat(
                               "cannot create %s: %s", out_dir, ec.message())));
  }
  const fs::path dir(out_dir);

  std::vector<Eigen::Vector2d> waypoints = config->waypoints;
  if (config->start.has_value()) {
    absl::StatusOr<Layers> layers =
        LoadLayers(config->water_path, config->foliage_path);
    if (!layers.ok()) return InputError(err, layers.status());
    absl::StatusOr<RoutePlan> plan = PlanGlobalRoute(
        *grid, Ptr(layers->water), Ptr(layers->foliage), config->Weather(),
        config->steep_limit, *config->start, *config->goal);
    if (!plan.ok()) return InputError(err, plan.status());
    if (!plan->result.reachable) {
      err << "UNREACHABLE: the configured goal cannot be reached\n";
      return kExitUnreachable;
    }
    std::ostringstream csv;
    if (absl::Status s = WriteRouteCsv(*grid, plan->result.route, csv); !s.ok()) {
      return InputError(err, s);
    }
    if (absl::Status s = WriteFile((dir / config->route_file).string(), csv.str());
        !s.ok()) {
      return InputError(err, s);
    }
    PrintRouteSummary(plan->result.route, out);
    waypoints.clear();
    for (const GridNode& node : plan->result.route.waypoints) {
      waypoints.push_back(grid->NodePosition(node));
    }
    if (waypoints.size() < 2) {
      return InputError(err, absl::InvalidArgumentError(
                                 "route has a single node; nothing to simulate"));
    }
  }

  auto surface = std::make_shared<const SurfaceModel>(*std::move(grid));
  double initial_speed = config->initial_speed.value_or(0.0);
  if (!config->initial_speed.has_value()) {
    // Start at the first segment's command.
    absl::StatusOr<DesiredTrajectory> probe =
        PlanTrajectory(waypoints, config->path, 0.0, surface);
    if (!probe.ok()) return InputError(err, probe.status());
    initial_speed = probe->profile().segment_commands().front();
  }
  absl::StatusOr<DesiredTrajectory> trajectory =
      PlanTrajectory(waypoints, config->path, initial_speed, surface);
  if (!trajectory.ok()) return InputError(err, trajectory.status());

  Scenario scenario;
  scenario.surface = surface;
  scenario.desired = std::make_shared<const DesiredTrajectory>(*std::move(trajectory));
  absl::StatusOr<VehicleState> initial =
      InitialStateOnTrajectory(*scenario.desired, *surface);
  if (!initial.ok()) return InputError(err, initial.status());
  initial->x += config->initial_offset.x();
  initial->y += config->initial_offset.y();
  scenario.initial = *initial;
  scenario.gains = config->gains;
  scenario.params = config->vehicle;
  scenario.dt = config->dt;
  scenario.duration = config->duration;
  scenario.violation_policy = config->violation_policy;

  absl::StatusOr<TrajectoryLog> log = RunSimulation(scenario);
  if (!log.ok()) return InputError(err, log.status());

  std::ostringstream trajectory_csv;
  if (absl::Status s =
          WriteTrajectoryCsv(*scenario.desired, config->dt, trajectory_csv);
      !s.ok()) {
    return InputError(err, s);
  }
  std::ostringstream log_csv;
  if (absl::Status s = WriteLogCsv(*log, log_csv, config->log_decimation); !s.ok()) {
    return InputError(err, s);
  }
  for (const auto& [name, text] :
       {std::pair{config->trajectory_file, trajectory_csv.str()},
        std::pair{config->log_file, log_csv.str()}}) {
    if (absl::Status s = WriteFile((dir / name).string(), text); !s.ok()) {
      return InputError(err, s);
    }
  }

  if (log->records.empty()) {
    err << "error: simulation produced no records: " << log->message << "\n";
    return kExitSimulationAborted;
  }
  absl::StatusOr<TrackingMetrics> metrics = ComputeTrackingMetrics(*log);
  if (!metrics.ok()) return InputError(err, metrics.status());
  out << absl::StrFormat(
      "simulate: status=%s steps=%d duration_s=%.3f max_error_m=%.6f "
      "time_of_max_s=%.3f mean_error_m=%.6f min_normal_force_N=%.3f "
      "clamped_steps=%d\n",
      RunStatusName(log->status), metrics->samples, log->records.back().t,
      metrics->max_error, metrics->time_of_max, metrics->mean_error,
      metrics->min_normal_force, metrics->clamped_steps);

  if (log->normal_force_violated) {
    err << "constraint violation: " << log->message << "\n";
    return kExitNormalForce;
  }
  if (log->status != RunStatus::kCompleted) {
    err << "simulation aborted (" << RunStatusName(log->status)
        << "): " << log->message << "\n";
    return kExitSimulationAborted;
  }
  return kExitOk;
}

int RunRenderCommand(const RenderOptions& options, std::ostream& out,
                     std::ostream& err) {
  absl::StatusOr<ElevationGrid> grid = LoadElevationGrid(options.grid);
  if (!grid.ok()) return InputError(err, grid.status());
  Scene scene;
  scene.grid = &*grid;

  std::optional<ObstacleMask> mask;
  if (!options.water.empty() || !options.foliage.empty() ||
      options.slope_limit.has_value()) {
    absl::StatusOr<WeatherCondition> weather =
        WeatherFromArgs(options.weather, options.slope_limit);
    if (!weather.ok()) return InputError(err, weather.status());
    absl::StatusOr<Layers> layers = LoadLayers(options.water, options.foliage);
    if (!layers.ok()) return InputError(err, layers.status());
    absl::StatusOr<ObstacleMask> built =
        BuildObstacleMask(*grid, Ptr(layers->water), Ptr(layers->foliage),
                          weather->slope_limit);
    if (!built.ok()) return InputError(err, built.status());
    mask = *std::move(built);
    scene.obstacles = &*mask;
  }
  std::optional<RouteTable> route;
  if (!options.route.empty()) {
    absl::StatusOr<RouteTable> table = LoadRouteCsv(options.route);
    if (!table.ok()) return InputError(err, table.status());
    route = *std::move(table);
    scene.route = &*route;
  }
  std::optional<LogTraces> traces;
  if (!options.log.empty()) {
    absl::StatusOr<LogTraces> loaded = LoadLogTraces(options.log);
    if (!loaded.ok()) return InputError(err, loaded.status());
    traces = *std::move(loaded);
    scene.log = &*traces;
  }
  std::ostringstream svg;
  if (absl::Status s = RenderSvg(scene, svg); !s.ok()) return InputError(err, s);
  if (absl::Status s = WriteFile(options.out, svg.str()); !s.ok()) {
    return InputError(err, s);
  }
  out << "render: wrote " << options.out << "\n";
  return kExitOk;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Off-road route planning, trajectory tracking and rendering"};
  app.require_subcommand(1);

  RouteOptions route;
  CLI::App* route_cmd = app.add_subcommand("route", "Plan a global route on a grid");
  route_cmd->add_option("--grid", route.grid, "Elevation grid CSV")->required();
  route_cmd->add_option("--water", route.water, "Water mask CSV");
  route_cmd->add_option("--foliage", route.foliage, "Foliage/building mask CSV");
  route_cmd->add_option("--start", route.start, "Start node R,C")->required();
  route_cmd->add_option("--goal", route.goal, "Goal node R,C")->required();
  route_cmd->add_option("--weather", route.weather, "dry or wet")
      ->check(CLI::IsMember({"dry", "wet"}));
  route_cmd->add_option("--slope-limit", route.slope_limit,
                        "Override the weather slope limit (rise over run)");
  route_cmd->add_option("--steep-limit", route.steep_limit,
                        "Steep-node limit (default: the slope limit)");
  route_cmd->add_option("--out", route.out, "Route CSV to write")->required();

  std::string config_path, out_dir;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Plan and simulate a tracking run");
  sim_cmd->add_option("--config", config_path, "Run config (YAML)")->required();
  sim_cmd->add_option("--out-dir", out_dir, "Output directory")->required();

  RenderOptions render;
  CLI::App* render_cmd = app.add_subcommand("render", "Render a scene to SVG");
  render_cmd->add_option("--grid", render.grid, "Elevation grid CSV")->required();
  render_cmd->add_option("--water", render.water, "Water mask CSV");
  render_cmd->add_option("--foliage", render.foliage, "Foliage/building mask CSV");
  render_cmd->add_option("--weather", render.weather,
                         "Weather for the steep overlay (dry or wet)")
      ->check(CLI::IsMember({"dry", "wet"}));
  render_cmd->add_option("--slope-limit", render.slope_limit,
                         "Steep overlay limit");
  render_cmd->add_option("--route", render.route, "Route CSV");
  render_cmd->add_option("--log", render.log, "Simulation log CSV");
  render_cmd->add_option("--out", render.out, "SVG to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (route_cmd->parsed()) return RunRouteCommand(route, out, err);
  if (sim_cmd->parsed()) return RunSimulateCommand(config_path, out_dir, out, err);
  if (render_cmd->parsed()) return RunRenderCommand(render, out, err);
  return kExitInputError;
}

}  // namespace offroad::cli
