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

#include "offroad/tpsm.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"

namespace offroad {

const char* TpsmNodeName(TpsmNode node) {
  switch (node) {
    case TpsmNode::kP0:
      return "p0";
    case TpsmNode::kP1:
      return "p1";
    case TpsmNode::kP2:
      return "p2";
    case TpsmNode::kP3:
      return "p3";
    case TpsmNode::kP4:
      return "p4";
    case TpsmNode::kAcc:
      return "ACC";
    case TpsmNode::kDec:
      return "DEC";
    case TpsmNode::kCv:
      return "CV";
  }
  return "?";
}

bool IsTerminal(TpsmNode node) {
  return node == TpsmNode::kAcc || node == TpsmNode::kDec ||
         node == TpsmNode::kCv;
}

absl::Status ValidateTpsmConfig(const TpsmConfig& config) {
  if (!(config.v0 > 0.0)) return absl::InvalidArgumentError("v0 must be positive");
  if (!(config.rho > 0.0)) {
    return absl::InvalidArgumentError("rho must be positive");
  }
  if (!(config.psi_dot_max > 0.0)) {
    return absl::InvalidArgumentError("psi_dot_max must be positive");
  }
  if (!(config.accel > 0.0) || !(config.decel > 0.0)) {
    return absl::InvalidArgumentError("accel and decel must be positive");
  }
  if (config.lateral_accel_max.has_value() &&
      !(*config.lateral_accel_max > 0.0)) {
    return absl::InvalidArgumentError("lateral_accel_max must be positive");
  }
  if (!(config.speed_tolerance >= 0.0)) {
    return absl::InvalidArgumentError("speed_tolerance must be non-negative");
  }
  return absl::OkStatus();
}

double TurnSpeed(const TpsmConfig& config) {
  double speed = std::min(config.v0, config.rho * config.psi_dot_max);
  if (config.lateral_accel_max.has_value()) {
    speed = std::min(speed, std::sqrt(*config.lateral_accel_max * config.rho));
  }
  return speed;
}

TpsmState TpsmStep(const TpsmState& state, const TpsmInputs& inputs,
                   const TpsmConfig& config) {
  TpsmState next = state;
  switch (state.current) {
    case TpsmNode::kP0:
      if (inputs.normal_force_positive) {
        next.current = TpsmNode::kP1;
        next.command_speed = config.v0;
      } else {
        next.current = TpsmNode::kDec;
        next.command_speed = 0.0;
      }
      break;
    case TpsmNode::kP1:
      next.current = IsStraightContinuation(inputs.mu_prev, inputs.mu_next)
                         ? TpsmNode::kP2
                         : TpsmNode::kP4;
      break;
    case TpsmNode::kP4: {
      bool feasible = config.v0 / config.rho <= config.psi_dot_max;
      if (config.lateral_accel_max.has_value()) {
        feasible = feasible &&
                   config.v0 * config.v0 / config.rho <= *config.lateral_accel_max;
      }
      if (!feasible) next.command_speed = TurnSpeed(config);
      next.current = TpsmNode::kP2;
      break;
    }
    case TpsmNode::kP2:
      next.current = inputs.v_T < state.command_speed - config.speed_tolerance
                         ? TpsmNode::kAcc
                         : TpsmNode::kP3;
      break;
    case TpsmNode::kP3:
      next.current =
          std::abs(inputs.v_T - state.command_speed) <= config.speed_tolerance
              ? TpsmNode::kCv
              : TpsmNode::kDec;
      break;
    case TpsmNode::kAcc:
    case TpsmNode::kDec:
    case TpsmNode::kCv:
      break;
  }
  return next;
}

TpsmState RunTpsm(const TpsmInputs& inputs, const TpsmConfig& config,
                  std::vector<TpsmNode>* trace) {
  TpsmState state;
  if (trace != nullptr) trace->push_back(state.current);
  // The longest walk is p0 p1 p4 p2 p3 terminal.
  for (int i = 0; i < 8 && !IsTerminal(state.current); ++i) {
    state = TpsmStep(state, inputs, config);
    if (trace != nullptr) trace->push_back(state.current);
  }
  return state;
}

}  // namespace offroad
