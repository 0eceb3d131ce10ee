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

#ifndef OFFROAD_TPSM_H_
#define OFFROAD_TPSM_H_

#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "offroad/path_geometry.h"

namespace offroad {

// Trajectory-planning state machine.
//
// Each proposition node evaluates one predicate and moves along its
// "satisfied" or "violated" edge:
//
//   p0  F_N > 0                      yes -> p1   no -> DEC (command 0)
//   p1  mu_{k-1,k} == mu_{k,k+1}     yes -> p2   no -> p4
//   p4  turn at v0 is feasible       yes -> p2   no -> p2 with the command
//                                                lowered to the turn speed
//   p2  v_T < command                yes -> ACC  no -> p3
//   p3  v_T == command               yes -> CV   no -> DEC
//
// ACC, DEC and CV are terminal. The command starts at v0. "Turn at v0 is
// feasible" means v0 / rho <= psi_dot_max and, when a lateral acceleration
// bound is configured, v0^2 / rho <= a_lat_max.
enum class TpsmNode { kP0, kP1, kP2, kP3, kP4, kAcc, kDec, kCv };

const char* TpsmNodeName(TpsmNode node);
bool IsTerminal(TpsmNode node);

struct TpsmConfig {
  double v0 = 2.0;           // nominal speed, m/s
  double rho = 4.0;          // turn radius, m
  double psi_dot_max = 1.0;  // rad/s
  double accel = 1.0;        // m/s^2
  double decel = 1.0;        // m/s^2
  std::optional<double> lateral_accel_max;  // m/s^2
  double speed_tolerance = 1e-9;            // for p3
};

absl::Status ValidateTpsmConfig(const TpsmConfig& config);

// Highest admissible speed on an arc of radius rho.
double TurnSpeed(const TpsmConfig& config);

struct TpsmInputs {
  double v_T = 0.0;
  SegmentSlope mu_prev;
  SegmentSlope mu_next;
  bool normal_force_positive = true;
};

struct TpsmState {
  TpsmNode current = TpsmNode::kP0;
  double command_speed = 0.0;  // set when leaving p0
};

// One transition. Terminal states map to themselves.
TpsmState TpsmStep(const TpsmState& state, const TpsmInputs& inputs,
                   const TpsmConfig& config);

// Runs from p0 to a terminal state. `trace`, when given, receives every
// visited node including p0 and the terminal one.
TpsmState RunTpsm(const TpsmInputs& inputs, const TpsmConfig& config,
                  std::vector<TpsmNode>* trace = nullptr);

}  // namespace offroad

#endif  // OFFROAD_TPSM_H_
