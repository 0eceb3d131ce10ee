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

#ifndef OFFROAD_SIMULATION_H_
#define OFFROAD_SIMULATION_H_

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "offroad/desired_trajectory.h"
#include "offroad/surface_model.h"
#include "offroad/tracking_controller.h"
#include "offroad/vehicle_model.h"

namespace offroad {

enum class ViolationPolicy { kHalt, kWarnAndContinue };

struct Scenario {
  std::shared_ptr<const SurfaceModel> surface;
  std::shared_ptr<const DesiredTrajectory> desired;
  VehicleState initial;
  GainConfig gains;
  VehicleParams params;
  double dt = 0.01;        // s
  double duration = 0.0;   // s; 0 means the trajectory duration
  ViolationPolicy violation_policy = ViolationPolicy::kHalt;
};

absl::Status ValidateScenario(const Scenario& scenario);

// Duration actually simulated.
double EffectiveDuration(const Scenario& scenario);

enum class RunStatus {
  kCompleted,
  kNormalForceViolation,
  kLeftGrid,
  kSingularSpeed,
};

const char* RunStatusName(RunStatus status);

struct LogRecord {
  double t = 0.0;
  VehicleState state;
  TrajectorySample desired;
  ControlInput command;  // applied, after clamping
  ControlInput raw;
  bool clamped = false;
  double normal_force = 0.0;
  TrackingError error;
  double error_norm = 0.0;
};

struct TrajectoryLog {
  std::vector<LogRecord> records;
  RunStatus status = RunStatus::kCompleted;
  std::string message;  // detail for a non-completed status
  bool normal_force_violated = false;
};

// Closed loop stepped every dt until the duration or a terminating
// condition. The control law runs at every RK4 stage; each record holds the
// state and the control at its step start, including the final instant.
// Identical scenarios give bit-identical logs.
absl::StatusOr<TrajectoryLog> RunSimulation(const Scenario& scenario);

// Car placed on the reference at time t with zero steer, heading along the
// desired velocity.
absl::StatusOr<VehicleState> InitialStateOnTrajectory(
    const DesiredTrajectory& desired, const SurfaceModel& surface,
    double t = 0.0);

struct TrackingMetrics {
  double max_error = 0.0;
  double mean_error = 0.0;
  double time_of_max = 0.0;
  double min_normal_force = 0.0;
  double max_error_line = 0.0;
  double mean_error_line = 0.0;
  double max_error_arc = 0.0;
  double mean_error_arc = 0.0;
  int samples = 0;
  int clamped_steps = 0;
};

// Per-phase values cover records whose desired sample is on a line
// (zero curvature) or on an arc. InvalidArgument for an empty log.
absl::StatusOr<TrackingMetrics> ComputeTrackingMetrics(const TrajectoryLog& log);

// Header: t_s,x,y,z,psi,vT,delta,xd,yd,zd,aT_cmd,gamma_cmd,FN,errE,clamped.
// Writes every `decimation`-th record plus the last one.
absl::Status WriteLogCsv(const TrajectoryLog& log, std::ostream& out,
                         int decimation = 1);

}  // namespace offroad

#endif  // OFFROAD_SIMULATION_H_
