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

#include "offroad/tracking_controller.h"

#include "absl/status/status.h"

namespace offroad {

absl::Status ValidateGains(const GainConfig& gains) {
  if (!(gains.k1 > 0.0) || !(gains.k2 > 0.0)) {
    return absl::InvalidArgumentError(
        "gains k1 and k2 must be positive for stable error dynamics");
  }
  return absl::OkStatus();
}

TrackingError ComputeTrackingError(const Eigen::Vector2d& position,
                                   const Eigen::Vector2d& velocity,
                                   const TrajectorySample& desired) {
  TrackingError error;
  error.E = position - desired.position.head<2>();
  error.E_dot = velocity - desired.velocity.head<2>();
  return error;
}

Eigen::Vector2d CommandedPlanarAccel(const Eigen::Vector2d& position,
                                     const Eigen::Vector2d& velocity,
                                     const TrajectorySample& desired,
                                     const GainConfig& gains) {
  const TrackingError error = ComputeTrackingError(position, velocity, desired);
  return desired.acceleration.head<2>() - gains.k1 * error.E_dot -
         gains.k2 * error.E;
}

absl::StatusOr<double> VerticalAccel(const SurfaceModel& surface, double x,
                                     double y, double x_dot, double y_dot,
                                     double x_ddot, double y_ddot) {
  absl::StatusOr<SurfacePartials> p = surface.Evaluate(x, y);
  if (!p.ok()) return p.status();
  return HeightAcceleration(*p, x_dot, y_dot, x_ddot, y_ddot);
}

absl::StatusOr<ControlOutput> ControlStep(const VehicleState& state,
                                          const TrajectorySample& desired,
                                          const GainConfig& gains,
                                          const SurfaceModel& surface,
                                          const VehicleParams& params) {
  absl::StatusOr<Kinematics> k = EvaluateKinematics(surface, state, params);
  if (!k.ok()) return k.status();

  ControlOutput out;
  out.kinematics = *k;
  const Eigen::Vector2d position(state.x, state.y);
  const Eigen::Vector2d velocity = k->r_dot.head<2>();
  out.error = ComputeTrackingError(position, velocity, desired);
  const Eigen::Vector2d planar =
      CommandedPlanarAccel(position, velocity, desired, gains);
  const double z_ddot = HeightAcceleration(k->partials, velocity.x(),
                                           velocity.y(), planar.x(), planar.y());
  out.r_ddot_cmd << planar, z_ddot;

  absl::StatusOr<ControlInput> raw =
      AccelToControls(state, k->body, k->omega_B, out.r_ddot_cmd, params);
  if (!raw.ok()) return raw.status();
  out.raw = *raw;
  out.applied = ClampControl(state, out.raw, params, &out.clamped);
  return out;
}

}  // namespace offroad
