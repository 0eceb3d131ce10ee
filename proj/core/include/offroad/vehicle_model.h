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

#ifndef OFFROAD_VEHICLE_MODEL_H_
#define OFFROAD_VEHICLE_MODEL_H_

#include <functional>
#include <limits>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "offroad/surface_model.h"

namespace offroad {

// Two-wheel kinematic car on the terrain surface.
//
// The state position r = (x, y, f(x, y)) is the steered wheel o1. Its
// velocity is v_T (cos(delta) i_B + sin(delta) j_B). The unsteered wheel o2
// sits at r - l i_B and does not slip sideways, which fixes the yaw rate.
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;  // Always f(x, y); refreshed after every step.
  double psi = 0.0;
  double v_T = 0.0;
  double delta = 0.0;
};

struct VehicleParams {
  double wheelbase = 2.5;  // l, m
  double mass = 1500.0;    // kg
  double gravity = 9.81;   // m/s^2
  double delta_max = 0.6;  // rad
  double gamma_max = 2.0;  // rad/s
  double accel_max = std::numeric_limits<double>::infinity();  // |a_T|, m/s^2
  double v_min_ctrl = 0.05;  // m/s; the inversion divides by v_T
};

absl::Status ValidateVehicleParams(const VehicleParams& params);

struct ControlInput {
  double a_T = 0.0;    // tangential acceleration, m/s^2
  double gamma = 0.0;  // steering rate, rad/s
};

// Orthonormal body axes in ground coordinates; k_B is the surface normal.
struct BodyFrame {
  Eigen::Vector3d i_B;
  Eigen::Vector3d j_B;
  Eigen::Vector3d k_B;
};

// Rotates the terrain axes by psi about k_T.
BodyFrame BodyFrameFromTerrain(const TerrainFrame& terrain, double psi);
absl::StatusOr<BodyFrame> ComputeBodyFrame(const SurfaceModel& surface,
                                           double x, double y, double psi);

// omega_T = phi_dot i_T + theta_dot cos(phi) j_T - theta_dot sin(phi) k_T,
// returned in ground coordinates.
Eigen::Vector3d TerrainAngularVelocity(const TerrainFrame& terrain,
                                       const EulerRates& rates);

// omega_B = omega_T + psi_dot k_T for motion with planar rates (x_dot, y_dot).
absl::StatusOr<Eigen::Vector3d> AngularVelocity(const SurfaceModel& surface,
                                                const VehicleState& state,
                                                double x_dot, double y_dot,
                                                double psi_dot);

// r_dot = v_T (cos(delta) i_B + sin(delta) j_B).
Eigen::Vector3d ForwardVelocity(const VehicleState& state,
                                const BodyFrame& frame);

// psi_dot = (1/l) (r_dot - l omega_T x i_B) . j_B, the yaw rate that zeroes
// the lateral velocity of o2.
double YawRateFromNoSlip(const BodyFrame& frame, const Eigen::Vector3d& r_dot,
                         const Eigen::Vector3d& omega_T,
                         const VehicleParams& params);

// Velocity of the unsteered wheel o2 = r - l i_B.
Eigen::Vector3d RearContactVelocity(const BodyFrame& frame,
                                    const Eigen::Vector3d& r_dot,
                                    const Eigen::Vector3d& omega_B,
                                    const VehicleParams& params);

// Inverts r_ddot = a_T u + v_T gamma u_perp + omega_B x r_dot for (a_T, gamma)
// using the i_B / j_B components, with u = cos(delta) i_B + sin(delta) j_B.
// FailedPrecondition when v_T < v_min_ctrl.
absl::StatusOr<ControlInput> AccelToControls(const VehicleState& state,
                                             const BodyFrame& frame,
                                             const Eigen::Vector3d& omega_B,
                                             const Eigen::Vector3d& r_ddot,
                                             const VehicleParams& params);

// Acceleration produced by `control`; the forward map of AccelToControls().
Eigen::Vector3d ForwardAcceleration(const VehicleState& state,
                                    const BodyFrame& frame,
                                    const Eigen::Vector3d& omega_B,
                                    const ControlInput& control);

// F_N = k_B . (m g k_G + m r_ddot). Non-positive means the car would leave
// the surface.
double NormalForce(const BodyFrame& frame, const Eigen::Vector3d& r_ddot,
                   const VehicleParams& params);

// Everything the dynamics need at one state.
struct Kinematics {
  SurfacePartials partials;
  TerrainFrame terrain;
  BodyFrame body;
  EulerRates euler_rates;
  Eigen::Vector3d r_dot;
  Eigen::Vector3d omega_T;
  Eigen::Vector3d omega_B;
  double psi_dot = 0.0;
};

absl::StatusOr<Kinematics> EvaluateKinematics(const SurfaceModel& surface,
                                              const VehicleState& state,
                                              const VehicleParams& params);

// Saturates a_T, gamma to the actuator bounds and stops gamma from driving
// delta past +-delta_max. Sets *clamped when anything changed.
ControlInput ClampControl(const VehicleState& state, const ControlInput& control,
                          const VehicleParams& params, bool* clamped);

struct StepOutcome {
  VehicleState state;
  double normal_force = 0.0;  // at the start of the step
};

// One classical RK4 step of (x, y, psi, v_T, delta) with `control` held
// constant; z is re-projected onto the surface afterwards. OutOfRange when
// any stage leaves the terrain.
absl::StatusOr<StepOutcome> StepDynamics(const VehicleState& state,
                                         const ControlInput& control,
                                         const SurfaceModel& surface,
                                         const VehicleParams& params,
                                         double dt);

// Control evaluated at a stage: `tau` is the offset from the step start.
using ControlPolicy = std::function<absl::StatusOr<ControlInput>(
    double tau, const VehicleState& state)>;

// RK4 step with the control re-evaluated at every stage, so a continuous
// feedback law is integrated without a zero-order hold. normal_force uses
// the control at tau = 0.
absl::StatusOr<StepOutcome> StepDynamics(const VehicleState& state,
                                         const ControlPolicy& policy,
                                         const SurfaceModel& surface,
                                         const VehicleParams& params,
                                         double dt);

}  // namespace offroad

#endif  // OFFROAD_VEHICLE_MODEL_H_
