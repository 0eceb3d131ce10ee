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

#include "offroad/vehicle_model.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "Eigen/Geometry"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace offroad {
namespace {

using StateVector = std::array<double, 5>;  // x, y, psi, v_T, delta

StateVector Pack(const VehicleState& s) {
  return {s.x, s.y, s.psi, s.v_T, s.delta};
}

VehicleState Unpack(const StateVector& v) {
  VehicleState s;
  s.x = v[0];
  s.y = v[1];
  s.psi = v[2];
  s.v_T = v[3];
  s.delta = v[4];
  return s;
}

StateVector Axpy(const StateVector& base, double h, const StateVector& slope) {
  StateVector out;
  for (size_t i = 0; i < out.size(); ++i) out[i] = base[i] + h * slope[i];
  return out;
}

Eigen::Vector3d Heading(const VehicleState& state, const BodyFrame& frame) {
  return std::cos(state.delta) * frame.i_B + std::sin(state.delta) * frame.j_B;
}

}  // namespace

absl::Status ValidateVehicleParams(const VehicleParams& params) {
  if (!(params.wheelbase > 0.0)) {
    return absl::InvalidArgumentError("wheelbase must be positive");
  }
  if (!(params.mass > 0.0)) return absl::InvalidArgumentError("mass must be positive");
  if (!(params.gravity > 0.0)) {
    return absl::InvalidArgumentError("gravity must be positive");
  }
  if (!(params.delta_max > 0.0) || !(params.gamma_max > 0.0) ||
      !(params.accel_max > 0.0)) {
    return absl::InvalidArgumentError("actuator bounds must be positive");
  }
  if (!(params.v_min_ctrl > 0.0)) {
    return absl::InvalidArgumentError("v_min_ctrl must be positive");
  }
  return absl::OkStatus();
}

BodyFrame BodyFrameFromTerrain(const TerrainFrame& terrain, double psi) {
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  BodyFrame frame;
  frame.i_B = c * terrain.i_T + s * terrain.j_T;
  frame.j_B = -s * terrain.i_T + c * terrain.j_T;
  frame.k_B = terrain.k_T;
  return frame;
}

absl::StatusOr<BodyFrame> ComputeBodyFrame(const SurfaceModel& surface,
                                           double x, double y, double psi) {
  absl::StatusOr<TerrainFrame> terrain = TerrainFrameAt(surface, x, y);
  if (!terrain.ok()) return terrain.status();
  return BodyFrameFromTerrain(*terrain, psi);
}

Eigen::Vector3d TerrainAngularVelocity(const TerrainFrame& terrain,
                                       const EulerRates& rates) {
  return rates.phi_dot * terrain.i_T +
         rates.theta_dot * std::cos(terrain.phi) * terrain.j_T -
         rates.theta_dot * std::sin(terrain.phi) * terrain.k_T;
}

absl::StatusOr<Eigen::Vector3d> AngularVelocity(const SurfaceModel& surface,
                                                const VehicleState& state,
                                                double x_dot, double y_dot,
                                                double psi_dot) {
  absl::StatusOr<TerrainFrame> terrain = TerrainFrameAt(surface, state.x, state.y);
  if (!terrain.ok()) return terrain.status();
  absl::StatusOr<EulerRates> rates =
      ComputeEulerRates(surface, state.x, state.y, x_dot, y_dot);
  if (!rates.ok()) return rates.status();
  return TerrainAngularVelocity(*terrain, *rates) + psi_dot * terrain->k_T;
}

Eigen::Vector3d ForwardVelocity(const VehicleState& state,
                                const BodyFrame& frame) {
  return state.v_T * Heading(state, frame);
}

double YawRateFromNoSlip(const BodyFrame& frame, const Eigen::Vector3d& r_dot,
                         const Eigen::Vector3d& omega_T,
                         const VehicleParams& params) {
  const double l = params.wheelbase;
  return (r_dot - l * omega_T.cross(frame.i_B)).dot(frame.j_B) / l;
}

Eigen::Vector3d RearContactVelocity(const BodyFrame& frame,
                                    const Eigen::Vector3d& r_dot,
                                    const Eigen::Vector3d& omega_B,
                                    const VehicleParams& params) {
  return r_dot + omega_B.cross(-params.wheelbase * frame.i_B);
}

absl::StatusOr<ControlInput> AccelToControls(const VehicleState& state,
                                             const BodyFrame& frame,
                                             const Eigen::Vector3d& omega_B,
                                             const Eigen::Vector3d& r_ddot,
                                             const VehicleParams& params) {
  if (state.v_T < params.v_min_ctrl) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "speed %.6f m/s below v_min_ctrl %.6f m/s; steering rate undefined",
        state.v_T, params.v_min_ctrl));
  }
  const Eigen::Vector3d residual =
      r_ddot - omega_B.cross(ForwardVelocity(state, frame));
  const double along_i = frame.i_B.dot(residual);
  const double along_j = frame.j_B.dot(residual);
  const double c = std::cos(state.delta);
  const double s = std::sin(state.delta);
  ControlInput out;
  out.a_T = c * along_i + s * along_j;
  out.gamma = (-s * along_i + c * along_j) / state.v_T;
  return out;
}

Eigen::Vector3d ForwardAcceleration(const VehicleState& state,
                                    const BodyFrame& frame,
                                    const Eigen::Vector3d& omega_B,
                                    const ControlInput& control) {
  const double c = std::cos(state.delta);
  const double s = std::sin(state.delta);
  const Eigen::Vector3d heading = c * frame.i_B + s * frame.j_B;
  const Eigen::Vector3d lateral = -s * frame.i_B + c * frame.j_B;
  return control.a_T * heading + state.v_T * control.gamma * lateral +
         omega_B.cross(state.v_T * heading);
}

double NormalForce(const BodyFrame& frame, const Eigen::Vector3d& r_ddot,
                   const VehicleParams& params) {
  const Eigen::Vector3d k_G = Eigen::Vector3d::UnitZ();
  return frame.k_B.dot(params.mass * params.gravity * k_G +
                       params.mass * r_ddot);
}

absl::StatusOr<Kinematics> EvaluateKinematics(const SurfaceModel& surface,
                                              const VehicleState& state,
                                              const VehicleParams& params) {
  absl::StatusOr<SurfacePartials> partials = surface.Evaluate(state.x, state.y);
  if (!partials.ok()) return partials.status();
  absl::StatusOr<EulerAngles> angles =
      EulerAnglesFromNormal(NormalFromPartials(*partials));
  if (!angles.ok()) return angles.status();

  Kinematics k;
  k.partials = *partials;
  const Eigen::Matrix3d rotation = TerrainRotation(*angles);
  k.terrain.i_T = rotation.row(0).transpose();
  k.terrain.j_T = rotation.row(1).transpose();
  k.terrain.k_T = NormalFromPartials(*partials);
  k.terrain.phi = angles->phi;
  k.terrain.theta = angles->theta;
  k.body = BodyFrameFromTerrain(k.terrain, state.psi);
  k.r_dot = ForwardVelocity(state, k.body);

  absl::StatusOr<EulerRates> rates =
      EulerRatesFromPartials(*partials, k.r_dot.x(), k.r_dot.y());
  if (!rates.ok()) return rates.status();
  k.euler_rates = *rates;
  k.omega_T = TerrainAngularVelocity(k.terrain, k.euler_rates);
  k.psi_dot = YawRateFromNoSlip(k.body, k.r_dot, k.omega_T, params);
  k.omega_B = k.omega_T + k.psi_dot * k.terrain.k_T;
  return k;
}

ControlInput ClampControl(const VehicleState& state, const ControlInput& control,
                          const VehicleParams& params, bool* clamped) {
  ControlInput out;
  out.a_T = std::clamp(control.a_T, -params.accel_max, params.accel_max);
  out.gamma = std::clamp(control.gamma, -params.gamma_max, params.gamma_max);
  if (state.delta >= params.delta_max && out.gamma > 0.0) out.gamma = 0.0;
  if (state.delta <= -params.delta_max && out.gamma < 0.0) out.gamma = 0.0;
  if (clamped != nullptr) {
    *clamped = out.a_T != control.a_T || out.gamma != control.gamma;
  }
  return out;
}

absl::StatusOr<StepOutcome> StepDynamics(const VehicleState& state,
                                         const ControlInput& control,
                                         const SurfaceModel& surface,
                                         const VehicleParams& params,
                                         double dt) {
  return StepDynamics(
      state,
      [&control](double, const VehicleState&) -> absl::StatusOr<ControlInput> {
        return control;
      },
      surface, params, dt);
}

absl::StatusOr<StepOutcome> StepDynamics(const VehicleState& state,
                                         const ControlPolicy& policy,
                                         const SurfaceModel& surface,
                                         const VehicleParams& params,
                                         double dt) {
  if (!(dt > 0.0)) return absl::InvalidArgumentError("dt must be positive");

  StepOutcome outcome;
  auto derivative = [&](double tau, const StateVector& v,
                        bool record) -> absl::StatusOr<StateVector> {
    const VehicleState stage = Unpack(v);
    absl::StatusOr<Kinematics> k = EvaluateKinematics(surface, stage, params);
    if (!k.ok()) return k.status();
    absl::StatusOr<ControlInput> control = policy(tau, stage);
    if (!control.ok()) return control.status();
    if (record) {
      outcome.normal_force = NormalForce(
          k->body, ForwardAcceleration(stage, k->body, k->omega_B, *control),
          params);
    }
    return StateVector{k->r_dot.x(), k->r_dot.y(), k->psi_dot, control->a_T,
                       control->gamma};
  };

  const StateVector y0 = Pack(state);
  absl::StatusOr<StateVector> k1 = derivative(0.0, y0, true);
  if (!k1.ok()) return k1.status();
  absl::StatusOr<StateVector> k2 =
      derivative(0.5 * dt, Axpy(y0, 0.5 * dt, *k1), false);
  if (!k2.ok()) return k2.status();
  absl::StatusOr<StateVector> k3 =
      derivative(0.5 * dt, Axpy(y0, 0.5 * dt, *k2), false);
  if (!k3.ok()) return k3.status();
  absl::StatusOr<StateVector> k4 = derivative(dt, Axpy(y0, dt, *k3), false);
  if (!k4.ok()) return k4.status();

  StateVector y1;
  for (size_t i = 0; i < y1.size(); ++i) {
    y1[i] = y0[i] +
            dt / 6.0 * ((*k1)[i] + 2.0 * (*k2)[i] + 2.0 * (*k3)[i] + (*k4)[i]);
  }
  VehicleState next = Unpack(y1);
  next.v_T = std::max(0.0, next.v_T);
  next.delta = std::clamp(next.delta, -params.delta_max, params.delta_max);
  absl::StatusOr<SurfacePartials> p = surface.Evaluate(next.x, next.y);
  if (!p.ok()) return p.status();
  next.z = p->f;
  outcome.state = next;
  return outcome;
}

}  // namespace offroad
