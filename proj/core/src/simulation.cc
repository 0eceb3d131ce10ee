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

#include "offroad/simulation.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace offroad {
namespace {

constexpr double kTimeSlack = 1e-9;

RunStatus StatusFor(const absl::Status& cause) {
  return absl::IsFailedPrecondition(cause) ? RunStatus::kSingularSpeed
                                           : RunStatus::kLeftGrid;
}

}  // namespace

absl::Status ValidateScenario(const Scenario& scenario) {
  if (scenario.surface == nullptr) {
    return absl::InvalidArgumentError("scenario has no surface");
  }
  if (scenario.desired == nullptr) {
    return absl::InvalidArgumentError("scenario has no desired trajectory");
  }
  if (!(scenario.dt > 0.0) || !std::isfinite(scenario.dt)) {
    return absl::InvalidArgumentError("dt must be positive");
  }
  if (!(scenario.duration >= 0.0) || !std::isfinite(scenario.duration)) {
    return absl::InvalidArgumentError("duration must be finite and >= 0");
  }
  if (scenario.duration > 0.0 &&
      scenario.duration < scenario.desired->duration() - kTimeSlack) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "duration %.3f s is shorter than the trajectory (%.3f s)",
        scenario.duration, scenario.desired->duration()));
  }
  if (absl::Status s = ValidateGains(scenario.gains); !s.ok()) return s;
  if (absl::Status s = ValidateVehicleParams(scenario.params); !s.ok()) return s;
  if (!scenario.surface->Contains(scenario.initial.x, scenario.initial.y)) {
    return absl::OutOfRangeError(absl::StrFormat(
        "initial position (%.3f, %.3f) lies outside the terrain",
        scenario.initial.x, scenario.initial.y));
  }
  return absl::OkStatus();
}

double EffectiveDuration(const Scenario& scenario) {
  return scenario.duration > 0.0 ? scenario.duration
                                 : scenario.desired->duration();
}

const char* RunStatusName(RunStatus status) {
  switch (status) {
    case RunStatus::kCompleted:
      return "completed";
    case RunStatus::kNormalForceViolation:
      return "normal_force_violation";
    case RunStatus::kLeftGrid:
      return "left_grid";
    case RunStatus::kSingularSpeed:
      return "singular_speed";
  }
  return "?";
}

absl::StatusOr<TrajectoryLog> RunSimulation(const Scenario& scenario) {
  if (absl::Status s = ValidateScenario(scenario); !s.ok()) return s;
  const SurfaceModel& surface = *scenario.surface;
  const double duration = EffectiveDuration(scenario);
  const double dt = scenario.dt;
  const long steps =
      std::max(1L, static_cast<long>(std::ceil(duration / dt - kTimeSlack)));

  TrajectoryLog log;
  log.records.reserve(static_cast<size_t>(steps) + 1);
  VehicleState state = scenario.initial;
  {
    absl::StatusOr<SurfacePartials> p = surface.Evaluate(state.x, state.y);
    if (!p.ok()) return p.status();
    state.z = p->f;
  }

  auto stop = [&log](RunStatus status, const absl::Status& cause) {
    log.status = status;
    log.message = std::string(cause.message());
  };

  for (long k = 0; k <= steps; ++k) {
    const double t = std::min(static_cast<double>(k) * dt, duration);
    absl::StatusOr<TrajectorySample> desired =
        scenario.desired->SampleExtended(t);
    if (!desired.ok()) {
      stop(RunStatus::kLeftGrid, desired.status());
      break;
    }
    absl::StatusOr<ControlOutput> control = ControlStep(
        state, *desired, scenario.gains, surface, scenario.params);
    if (!control.ok()) {
      stop(StatusFor(control.status()), control.status());
      break;
    }

    LogRecord record;
    record.t = t;
    record.state = state;
    record.desired = *desired;
    record.raw = control->raw;
    record.command = control->applied;
    record.clamped = control->clamped;
    record.error = control->error;
    record.error_norm = control->error.E.norm();
    record.normal_force = NormalForce(
        control->kinematics.body,
        ForwardAcceleration(state, control->kinematics.body,
                            control->kinematics.omega_B, control->applied),
        scenario.params);
    log.records.push_back(record);

    if (!(record.normal_force > 0.0)) {
      log.normal_force_violated = true;
      if (scenario.violation_policy == ViolationPolicy::kHalt) {
        stop(RunStatus::kNormalForceViolation,
             absl::FailedPreconditionError(absl::StrFormat(
                 "normal force %.3f N <= 0 at t = %.3f s", record.normal_force,
                 t)));
        break;
      }
    }
    if (k == steps) break;

    const double h = std::min((k + 1) * dt, duration) - t;
    const ControlPolicy policy =
        [&](double tau, const VehicleState& stage) -> absl::StatusOr<ControlInput> {
      if (tau == 0.0) return control->applied;
      absl::StatusOr<TrajectorySample> d =
          scenario.desired->SampleExtended(t + tau);
      if (!d.ok()) return d.status();
      absl::StatusOr<ControlOutput> out =
          ControlStep(stage, *d, scenario.gains, surface, scenario.params);
      if (!out.ok()) return out.status();
      return out->applied;
    };
    absl::StatusOr<StepOutcome> next =
        StepDynamics(state, policy, surface, scenario.params, h);
    if (!next.ok()) {
      stop(StatusFor(next.status()), next.status());
      break;
    }
    state = next->state;
  }
  if (log.status == RunStatus::kCompleted && log.normal_force_violated) {
    log.message = "normal force became non-positive (run continued)";
  }
  return log;
}

absl::StatusOr<VehicleState> InitialStateOnTrajectory(
    const DesiredTrajectory& desired, const SurfaceModel& surface, double t) {
  absl::StatusOr<TrajectorySample> sample = desired.SampleExtended(t);
  if (!sample.ok()) return sample.status();
  absl::StatusOr<SurfacePartials> p =
      surface.Evaluate(sample->position.x(), sample->position.y());
  if (!p.ok()) return p.status();

  // Re-lift with this surface in case the trajectory carries none.
  Eigen::Vector3d velocity = sample->velocity;
  velocity.z() = HeightRate(*p, velocity.x(), velocity.y());
  const double speed = velocity.norm();
  if (!(speed > 0.0)) {
    return absl::FailedPreconditionError(
        "desired speed is zero; heading undefined");
  }
  absl::StatusOr<TerrainFrame> terrain =
      TerrainFrameAt(surface, sample->position.x(), sample->position.y());
  if (!terrain.ok()) return terrain.status();
  const Eigen::Vector3d heading = velocity / speed;

  VehicleState state;
  state.x = sample->position.x();
  state.y = sample->position.y();
  state.z = p->f;
  state.psi = std::atan2(heading.dot(terrain->j_T), heading.dot(terrain->i_T));
  state.v_T = speed;
  state.delta = 0.0;
  return state;
}

absl::StatusOr<TrackingMetrics> ComputeTrackingMetrics(const TrajectoryLog& log) {
  if (log.records.empty()) {
    return absl::InvalidArgumentError("tracking metrics need a non-empty log");
  }
  TrackingMetrics m;
  m.min_normal_force = std::numeric_limits<double>::infinity();
  double sum = 0.0, sum_line = 0.0, sum_arc = 0.0;
  int n_line = 0, n_arc = 0;
  for (const LogRecord& r : log.records) {
    const double e = r.error_norm;
    if (e > m.max_error) {
      m.max_error = e;
      m.time_of_max = r.t;
    }
    sum += e;
    m.min_normal_force = std::min(m.min_normal_force, r.normal_force);
    if (r.clamped) ++m.clamped_steps;
    if (r.desired.curvature == 0.0) {
      m.max_error_line = std::max(m.max_error_line, e);
      sum_line += e;
      ++n_line;
    } else {
      m.max_error_arc = std::max(m.max_error_arc, e);
      sum_arc += e;
      ++n_arc;
    }
  }
  m.samples = static_cast<int>(log.records.size());
  m.mean_error = sum / m.samples;
  if (n_line > 0) m.mean_error_line = sum_line / n_line;
  if (n_arc > 0) m.mean_error_arc = sum_arc / n_arc;
  return m;
}

absl::Status WriteLogCsv(const TrajectoryLog& log, std::ostream& out,
                         int decimation) {
  if (decimation < 1) {
    return absl::InvalidArgumentError("decimation must be >= 1");
  }
  out << "t_s,x,y,z,psi,vT,delta,xd,yd,zd,aT_cmd,gamma_cmd,FN,errE,clamped\n";
  const size_t n = log.records.size();
  for (size_t i = 0; i < n; ++i) {
    if (i % static_cast<size_t>(decimation) != 0 && i + 1 != n) continue;
    const LogRecord& r = log.records[i];
    out << absl::StrFormat(
        "%.6f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.6f,%.9f,"
        "%d\n",
        r.t, r.state.x, r.state.y, r.state.z, r.state.psi, r.state.v_T,
        r.state.delta, r.desired.position.x(), r.desired.position.y(),
        r.desired.position.z(), r.command.a_T, r.command.gamma, r.normal_force,
        r.error_norm, r.clamped ? 1 : 0);
  }
  return out ? absl::OkStatus() : absl::InternalError("failed writing log");
}

}  // namespace offroad
