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

#include "cli/run_config.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "yaml-cpp/yaml.h"

namespace offroad::cli {
namespace {

namespace fs = std::filesystem;

enum class Bound { kAny, kPositive, kNonNegative };

class ConfigReader {
 public:
  ConfigReader(std::string source, std::string base_dir)
      : source_(std::move(source)), base_dir_(std::move(base_dir)) {}

  absl::Status Error(const YAML::Mark& mark, const std::string& message) const {
    if (mark.line < 0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("%s: %s", source_, message));
    }
    return absl::InvalidArgumentError(
        absl::StrFormat("%s:%d: %s", source_, mark.line + 1, message));
  }

  // `node` must be a map whose keys are unique and drawn from `allowed`.
  absl::Status CheckMap(const YAML::Node& node, const std::string& section,
                        const std::set<std::string>& allowed) const {
    if (!node.IsMap()) {
      return Error(node.Mark(), absl::StrFormat("'%s' must be a mapping",
                                                section.empty() ? "document" : section));
    }
    std::set<std::string> seen;
    for (const auto& item : node) {
      if (!item.first.IsScalar()) {
        return Error(item.first.Mark(), "keys must be plain names");
      }
      const std::string key = item.first.Scalar();
      const std::string qualified = Qualify(section, key);
      if (allowed.count(key) == 0) {
        return Error(item.first.Mark(),
                     absl::StrFormat("unknown key '%s' (allowed: %s)", qualified,
                                     absl::StrJoin(allowed, ", ")));
      }
      if (!seen.insert(key).second) {
        return Error(item.first.Mark(),
                     absl::StrFormat("duplicate key '%s'", qualified));
      }
    }
    return absl::OkStatus();
  }

  // Leaves `*out` untouched when the key is absent.
  absl::Status Double(const YAML::Node& map, const std::string& section,
                      const std::string& key, Bound bound, double* out) const {
    const YAML::Node node = map[key];
    if (!node) return absl::OkStatus();
    const std::string name = Qualify(section, key);
    double value = 0.0;
    if (absl::Status s = ScalarDouble(node, name, &value); !s.ok()) return s;
    if (bound == Bound::kPositive && !(value > 0.0)) {
      return Error(node.Mark(), absl::StrFormat("%s must be positive (got %s)",
                                                name, node.Scalar()));
    }
    if (bound == Bound::kNonNegative && !(value >= 0.0)) {
      return Error(node.Mark(), absl::StrFormat("%s must be >= 0 (got %s)", name,
                                                node.Scalar()));
    }
    *out = value;
    return absl::OkStatus();
  }

  absl::Status OptionalDouble(const YAML::Node& map, const std::string& section,
                              const std::string& key, Bound bound,
                              std::optional<double>* out) const {
    if (!map[key]) return absl::OkStatus();
    double value = 0.0;
    if (absl::Status s = Double(map, section, key, bound, &value); !s.ok()) {
      return s;
    }
    *out = value;
    return absl::OkStatus();
  }

  absl::Status String(const YAML::Node& map, const std::string& section,
                      const std::string& key, std::string* out) const {
    const YAML::Node node = map[key];
    if (!node) return absl::OkStatus();
    if (!node.IsScalar() || node.Scalar().empty()) {
      return Error(node.Mark(), absl::StrFormat("%s must be a non-empty string",
                                                Qualify(section, key)));
    }
    *out = node.Scalar();
    return absl::OkStatus();
  }

  // Resolves and checks an input file reference.
  absl::Status InputFile(const YAML::Node& map, const std::string& section,
                         const std::string& key, bool required,
                         std::string* out) const {
    const YAML::Node node = map[key];
    const std::string name = Qualify(section, key);
    if (!node) {
      if (required) {
        return Error(map.Mark(), absl::StrFormat("missing required key '%s'", name));
      }
      return absl::OkStatus();
    }
    std::string value;
    if (absl::Status s = String(map, section, key, &value); !s.ok()) return s;
    fs::path path(value);
    if (path.is_relative() && !base_dir_.empty()) path = fs::path(base_dir_) / path;
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
      return absl::NotFoundError(absl::StrFormat(
          "%s:%d: %s file '%s' does not exist", source_, node.Mark().line + 1,
          name, path.string()));
    }
    *out = path.string();
    return absl::OkStatus();
  }

  // [a, b] of doubles.
  absl::Status Pair(const YAML::Node& node, const std::string& name,
                    double* a, double* b) const {
    if (!node.IsSequence() || node.size() != 2) {
      return Error(node.Mark(),
                   absl::StrFormat("%s must be a two-element list [a, b]", name));
    }
    if (absl::Status s = ScalarDouble(node[0], name, a); !s.ok()) return s;
    return ScalarDouble(node[1], name, b);
  }

  absl::Status Node(const YAML::Node& map, const std::string& section,
                    const std::string& key, std::optional<GridNode>* out) const {
    const YAML::Node node = map[key];
    const std::string name = Qualify(section, key);
    if (!node) {
      return Error(map.Mark(), absl::StrFormat("missing required key '%s'", name));
    }
    if (!node.IsSequence() || node.size() != 2) {
      return Error(node.Mark(),
                   absl::StrFormat("%s must be [row, col]", name));
    }
    GridNode value;
    for (int i = 0; i < 2; ++i) {
      int v = 0;
      try {
        if (!node[i].IsScalar()) throw YAML::Exception(node[i].Mark(), "");
        v = node[i].as<int>();
      } catch (const YAML::Exception&) {
        return Error(node[i].Mark(),
                     absl::StrFormat("%s entries must be integers", name));
      }
      if (v < 0) {
        return Error(node[i].Mark(),
                     absl::StrFormat("%s entries must be non-negative", name));
      }
      (i == 0 ? value.row : value.col) = v;
    }
    *out = value;
    return absl::OkStatus();
  }

  absl::Status Int(const YAML::Node& map, const std::string& section,
                   const std::string& key, int min_value, int* out) const {
    const YAML::Node node = map[key];
    if (!node) return absl::OkStatus();
    const std::string name = Qualify(section, key);
    int value = 0;
    try {
      if (!node.IsScalar()) throw YAML::Exception(node.Mark(), "");
      value = node.as<int>();
    } catch (const YAML::Exception&) {
      return Error(node.Mark(), absl::StrFormat("%s must be an integer", name));
    }
    if (value < min_value) {
      return Error(node.Mark(),
                   absl::StrFormat("%s must be >= %d", name, min_value));
    }
    *out = value;
    return absl::OkStatus();
  }

 private:
  static std::string Qualify(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
  }

  absl::Status ScalarDouble(const YAML::Node& node, const std::string& name,
                            double* out) const {
    double value = 0.0;
    try {
      if (!node.IsScalar()) throw YAML::Exception(node.Mark(), "");
      value = node.as<double>();
    } catch (const YAML::Exception&) {
      return Error(node.Mark(), absl::StrFormat("%s must be a number", name));
    }
    if (!std::isfinite(value)) {
      return Error(node.Mark(), absl::StrFormat("%s must be finite", name));
    }
    *out = value;
    return absl::OkStatus();
  }

  std::string source_;
  std::string base_dir_;
};

absl::Status ParseDocument(const ConfigReader& r, const YAML::Node& root,
                           RunConfig& c) {
  if (absl::Status s = r.CheckMap(root, "",
                                  {"terrain", "weather", "route", "waypoints",
                                   "path", "controller", "vehicle", "simulation",
                                   "output"});
      !s.ok()) {
    return s;
  }

  const YAML::Node terrain = root["terrain"];
  if (!terrain) return r.Error(root.Mark(), "missing required section 'terrain'");
  if (absl::Status s = r.CheckMap(terrain, "terrain", {"grid", "water", "foliage"});
      !s.ok()) {
    return s;
  }
  if (absl::Status s = r.InputFile(terrain, "terrain", "grid", true, &c.grid_path);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = r.InputFile(terrain, "terrain", "water", false, &c.water_path);
      !s.ok()) {
    return s;
  }
  if (absl::Status s =
          r.InputFile(terrain, "terrain", "foliage", false, &c.foliage_path);
      !s.ok()) {
    return s;
  }

  if (const YAML::Node weather = root["weather"]) {
    if (absl::Status s =
            r.CheckMap(weather, "weather", {"kind", "slope_limit", "steep_limit"});
        !s.ok()) {
      return s;
    }
    std::string kind = "dry";
    if (absl::Status s = r.String(weather, "weather", "kind", &kind); !s.ok()) {
      return s;
    }
    if (kind == "dry") {
      c.weather = WeatherKind::kDry;
    } else if (kind == "wet") {
      c.weather = WeatherKind::kWet;
    } else {
      return r.Error(weather["kind"].Mark(),
                     absl::StrFormat("weather.kind must be dry or wet (got '%s')",
                                     kind));
    }
    if (absl::Status s = r.OptionalDouble(weather, "weather", "slope_limit",
                                          Bound::kPositive, &c.slope_limit);
        !s.ok()) {
      return s;
    }
    if (absl::Status s = r.OptionalDouble(weather, "weather", "steep_limit",
                                          Bound::kPositive, &c.steep_limit);
        !s.ok()) {
      return s;
    }
  }

  const YAML::Node route = root["route"];
  const YAML::Node waypoints = root["waypoints"];
  if (route && waypoints) {
    return r.Error(waypoints.Mark(),
                   "give either 'route' or 'waypoints', not both");
  }
  if (!route && !waypoints) {
    return r.Error(root.Mark(), "missing 'route' or 'waypoints' section");
  }
  if (route) {
    if (absl::Status s = r.CheckMap(route, "route", {"start", "goal"}); !s.ok()) {
      return s;
    }
    if (absl::Status s = r.Node(route, "route", "start", &c.start); !s.ok()) return s;
    if (absl::Status s = r.Node(route, "route", "goal", &c.goal); !s.ok()) return s;
  } else {
    if (!waypoints.IsSequence() || waypoints.size() < 2) {
      return r.Error(waypoints.Mark(),
                     "waypoints must be a list of at least two [x, y] points");
    }
    for (size_t i = 0; i < waypoints.size(); ++i) {
      double x = 0.0, y = 0.0;
      if (absl::Status s = r.Pair(waypoints[i],
                                  absl::StrFormat("waypoints[%d]", i), &x, &y);
          !s.ok()) {
        return s;
      }
      c.waypoints.emplace_back(x, y);
    }
  }

  if (const YAML::Node path = root["path"]) {
    if (absl::Status s = r.CheckMap(path, "path",
                                    {"rho", "v0", "psi_dot_max", "accel", "decel",
                                     "lateral_accel_max"});
        !s.ok()) {
      return s;
    }
    for (auto [key, field] :
         {std::pair<const char*, double*>{"rho", &c.path.rho},
          {"v0", &c.path.v0},
          {"psi_dot_max", &c.path.psi_dot_max},
          {"accel", &c.path.accel},
          {"decel", &c.path.decel}}) {
      if (absl::Status s = r.Double(path, "path", key, Bound::kPositive, field);
          !s.ok()) {
        return s;
      }
    }
    if (absl::Status s = r.OptionalDouble(path, "path", "lateral_accel_max",
                                          Bound::kPositive,
                                          &c.path.lateral_accel_max);
        !s.ok()) {
      return s;
    }
  }

  if (const YAML::Node gains = root["controller"]) {
    if (absl::Status s = r.CheckMap(gains, "controller", {"k1", "k2"}); !s.ok()) {
      return s;
    }
    if (absl::Status s =
            r.Double(gains, "controller", "k1", Bound::kPositive, &c.gains.k1);
        !s.ok()) {
      return s;
    }
    if (absl::Status s =
            r.Double(gains, "controller", "k2", Bound::kPositive, &c.gains.k2);
        !s.ok()) {
      return s;
    }
  }

  if (const YAML::Node vehicle = root["vehicle"]) {
    if (absl::Status s = r.CheckMap(vehicle, "vehicle",
                                    {"wheelbase", "mass", "gravity", "delta_max",
                                     "gamma_max", "accel_max", "v_min_ctrl"});
        !s.ok()) {
      return s;
    }
    for (auto [key, field] :
         {std::pair<const char*, double*>{"wheelbase", &c.vehicle.wheelbase},
          {"mass", &c.vehicle.mass},
          {"gravity", &c.vehicle.gravity},
          {"delta_max", &c.vehicle.delta_max},
          {"gamma_max", &c.vehicle.gamma_max},
          {"accel_max", &c.vehicle.accel_max},
          {"v_min_ctrl", &c.vehicle.v_min_ctrl}}) {
      if (absl::Status s = r.Double(vehicle, "vehicle", key, Bound::kPositive, field);
          !s.ok()) {
        return s;
      }
    }
  }

  if (const YAML::Node sim = root["simulation"]) {
    if (absl::Status s = r.CheckMap(sim, "simulation",
                                    {"dt", "duration", "initial_speed",
                                     "initial_offset", "violation_policy",
                                     "log_decimation"});
        !s.ok()) {
      return s;
    }
    if (absl::Status s = r.Double(sim, "simulation", "dt", Bound::kPositive, &c.dt);
        !s.ok()) {
      return s;
    }
    if (absl::Status s = r.Double(sim, "simulation", "duration",
                                  Bound::kNonNegative, &c.duration);
        !s.ok()) {
      return s;
    }
    if (absl::Status s = r.OptionalDouble(sim, "simulation", "initial_speed",
                                          Bound::kPositive, &c.initial_speed);
        !s.ok()) {
      return s;
    }
    if (const YAML::Node offset = sim["initial_offset"]) {
      if (absl::Status s = r.Pair(offset, "simulation.initial_offset",
                                  &c.initial_offset.x(), &c.initial_offset.y());
          !s.ok()) {
        return s;
      }
    }
    std::string policy = "halt";
    if (absl::Status s = r.String(sim, "simulation", "violation_policy", &policy);
        !s.ok()) {
      return s;
    }
    if (policy == "halt") {
      c.violation_policy = ViolationPolicy::kHalt;
    } else if (policy == "continue") {
      c.violation_policy = ViolationPolicy::kWarnAndContinue;
    } else {
      return r.Error(sim["violation_policy"].Mark(),
                     absl::StrFormat("simulation.violation_policy must be halt or "
                                     "continue (got '%s')",
                                     policy));
    }
    if (absl::Status s =
            r.Int(sim, "simulation", "log_decimation", 1, &c.log_decimation);
        !s.ok()) {
      return s;
    }
  }

  if (const YAML::Node output = root["output"]) {
    if (absl::Status s = r.CheckMap(output, "output", {"trajectory", "log", "route"});
        !s.ok()) {
      return s;
    }
    if (absl::Status s = r.String(output, "output", "trajectory", &c.trajectory_file);
        !s.ok()) {
      return s;
    }
    if (absl::Status s = r.String(output, "output", "log", &c.log_file); !s.ok()) {
      return s;
    }
    if (absl::Status s = r.String(output, "output", "route", &c.route_file);
        !s.ok()) {
      return s;
    }
  }

  if (absl::Status s = ValidateWeather(c.Weather()); !s.ok()) {
    return r.Error(root["weather"] ? root["weather"].Mark() : root.Mark(),
                   std::string(s.message()));
  }
  return absl::OkStatus();
}

}  // namespace

WeatherCondition RunConfig::Weather() const {
  WeatherCondition w = weather == WeatherKind::kDry ? WeatherCondition::Dry()
                                                    : WeatherCondition::Wet();
  if (slope_limit.has_value()) w.slope_limit = *slope_limit;
  return w;
}

absl::StatusOr<RunConfig> ParseRunConfig(const std::string& text,
                                         const std::string& source,
                                         const std::string& base_dir) {
  ConfigReader reader(source, base_dir);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    return reader.Error(e.mark, absl::StrFormat("syntax error: %s", e.msg));
  } catch (const YAML::Exception& e) {
    return reader.Error(e.mark, e.msg);
  }
  if (!root || root.IsNull()) {
    return reader.Error(YAML::Mark::null_mark(), "config is empty");
  }
  RunConfig config;
  config.source = source;
  try {
    if (absl::Status s = ParseDocument(reader, root, config); !s.ok()) return s;
  } catch (const YAML::Exception& e) {
    return reader.Error(e.mark, e.msg);
  }
  return config;
}

absl::StatusOr<RunConfig> LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open config '%s'", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string base_dir = fs::path(path).parent_path().string();
  return ParseRunConfig(buffer.str(), path, base_dir);
}

}  // namespace offroad::cli
