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

#ifndef OFFROAD_SPEED_PROFILE_H_
#define OFFROAD_SPEED_PROFILE_H_

#include <vector>

#include "absl/status/statusor.h"
#include "offroad/path_geometry.h"
#include "offroad/tpsm.h"

namespace offroad {

enum class SpeedPhase { kAcc, kDec, kCv };

const char* SpeedPhaseName(SpeedPhase phase);

// Constant-acceleration stretch of the profile.
struct SpeedPiece {
  double s_start = 0.0;
  double s_end = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  double v_start = 0.0;
  double accel = 0.0;
  SpeedPhase phase = SpeedPhase::kCv;
  int segment = 0;
};

struct SpeedSample {
  double s = 0.0;
  double v = 0.0;
  double accel = 0.0;
  SpeedPhase phase = SpeedPhase::kCv;
};

// Trapezoidal speed along a PathGeometry, indexed by time.
class SpeedProfile {
 public:
  SpeedProfile() = default;
  explicit SpeedProfile(std::vector<SpeedPiece> pieces);

  const std::vector<SpeedPiece>& pieces() const { return pieces_; }
  double duration() const { return pieces_.empty() ? 0.0 : pieces_.back().t_end; }
  double length() const { return pieces_.empty() ? 0.0 : pieces_.back().s_end; }

  // Right-continuous; t is clamped to [0, duration].
  SpeedSample AtTime(double t) const;
  // Command speed per path segment, as chosen by the state machine.
  const std::vector<double>& segment_commands() const { return commands_; }

 private:
  friend absl::StatusOr<SpeedProfile> BuildSpeedProfile(const PathGeometry&,
                                                        const TpsmConfig&,
                                                        double);
  std::vector<SpeedPiece> pieces_;
  std::vector<double> commands_;
};

// Command speeds come from the state machine: v0 on lines and the turn speed
// on arcs whose nominal speed is infeasible. Ramps run at config.accel /
// config.decel, and a deceleration ends exactly where the slower segment
// begins. Fails when a segment is too short to slow down in time.
absl::StatusOr<SpeedProfile> BuildSpeedProfile(const PathGeometry& geometry,
                                               const TpsmConfig& config,
                                               double initial_speed = 0.0);

}  // namespace offroad

#endif  // OFFROAD_SPEED_PROFILE_H_
