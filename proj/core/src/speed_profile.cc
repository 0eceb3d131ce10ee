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

#include "offroad/speed_profile.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace offroad {
namespace {

constexpr double kMinPieceLength = 1e-12;

SegmentSlope SlopeOfDirection(const Eigen::Vector2d& direction) {
  // Direction vectors are unit length, never zero.
  return *ComputeSegmentSlope(Eigen::Vector2d::Zero(), direction);
}

}  // namespace

const char* SpeedPhaseName(SpeedPhase phase) {
  switch (phase) {
    case SpeedPhase::kAcc:
      return "ACC";
    case SpeedPhase::kDec:
      return "DEC";
    case SpeedPhase::kCv:
      return "CV";
  }
  return "?";
}

SpeedProfile::SpeedProfile(std::vector<SpeedPiece> pieces)
    : pieces_(std::move(pieces)) {}

SpeedSample SpeedProfile::AtTime(double t) const {
  if (pieces_.empty()) return {};
  t = std::clamp(t, 0.0, duration());
  auto it = std::upper_bound(
      pieces_.begin(), pieces_.end(), t,
      [](double value, const SpeedPiece& piece) { return value < piece.t_start; });
  const SpeedPiece& piece = *(it == pieces_.begin() ? it : std::prev(it));
  const double tau = std::min(t, piece.t_end) - piece.t_start;
  SpeedSample out;
  out.v = std::max(0.0, piece.v_start + piece.accel * tau);
  out.s = std::min(piece.s_end,
                   piece.s_start + piece.v_start * tau + 0.5 * piece.accel * tau * tau);
  out.accel = piece.accel;
  out.phase = piece.phase;
  return out;
}

absl::StatusOr<SpeedProfile> BuildSpeedProfile(const PathGeometry& geometry,
                                               const TpsmConfig& config,
                                               double initial_speed) {
  if (absl::Status s = ValidateTpsmConfig(config); !s.ok()) return s;
  if (geometry.segments().empty()) {
    return absl::InvalidArgumentError("path has no segments");
  }
  if (!(initial_speed >= 0.0)) {
    return absl::InvalidArgumentError("initial speed must be non-negative");
  }

  const auto& segments = geometry.segments();
  const int n = static_cast<int>(segments.size());
  std::vector<double> commands(n);
  for (int i = 0; i < n; ++i) {
    const double length = segments[i].Length();
    TpsmInputs inputs;
    inputs.v_T = config.v0;
    inputs.mu_prev = SlopeOfDirection(segments[i].TangentAt(0.0));
    inputs.mu_next = SlopeOfDirection(segments[i].TangentAt(length));
    commands[i] = RunTpsm(inputs, config).command_speed;
  }
  if (initial_speed > commands[0] + config.speed_tolerance) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "initial speed %.3f m/s exceeds the first segment command %.3f m/s",
        initial_speed, commands[0]));
  }

  std::vector<SpeedPiece> pieces;
  double t = 0.0;
  auto add_piece = [&](int segment, double s0, double s1, double v_start,
                       double v_end, double accel) {
    if (s1 - s0 <= kMinPieceLength) return;
    SpeedPiece piece;
    piece.segment = segment;
    piece.s_start = s0;
    piece.s_end = s1;
    piece.v_start = v_start;
    piece.t_start = t;
    if (accel == 0.0) {
      piece.phase = SpeedPhase::kCv;
      t += (s1 - s0) / v_start;
    } else {
      piece.accel = accel;
      piece.phase = accel > 0.0 ? SpeedPhase::kAcc : SpeedPhase::kDec;
      t += (v_end - v_start) / accel;
    }
    piece.t_end = t;
    pieces.push_back(piece);
  };

  const double a = config.accel;
  const double d = config.decel;
  double entry = std::min(initial_speed, commands[0]);
  for (int i = 0; i < n; ++i) {
    const double start = geometry.SegmentStart(i);
    const double length = segments[i].Length();
    const double cap = commands[i];
    const double next_cap = (i + 1 < n) ? commands[i + 1] : cap;
    const double exit =
        std::min({cap, next_cap, std::sqrt(entry * entry + 2.0 * a * length)});
    if (entry * entry - 2.0 * d * length > exit * exit * (1.0 + 1e-12)) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "segment %d (%.3f m) is too short to slow from %.3f to %.3f m/s at "
          "%.3f m/s^2; use a smaller v0",
          i, length, entry, exit, d));
    }
    const double s_acc = (cap * cap - entry * entry) / (2.0 * a);
    const double s_dec = length - (cap * cap - exit * exit) / (2.0 * d);
    if (s_acc <= s_dec) {
      add_piece(i, start, start + s_acc, entry, cap, a);
      add_piece(i, start + s_acc, start + s_dec, cap, cap, 0.0);
      add_piece(i, start + s_dec, start + length, cap, exit, -d);
    } else {
      const double s_peak = std::clamp(
          (exit * exit - entry * entry + 2.0 * d * length) / (2.0 * (a + d)),
          0.0, length);
      const double peak = std::sqrt(entry * entry + 2.0 * a * s_peak);
      add_piece(i, start, start + s_peak, entry, peak, a);
      add_piece(i, start + s_peak, start + length, peak, exit, -d);
    }
    entry = exit;
  }
  if (pieces.empty() || (pieces.front().v_start <= 0.0 &&
                           pieces.front().phase != SpeedPhase::kAcc)) {
    return absl::FailedPreconditionError("degenerate speed profile");
  }
  SpeedProfile profile(std::move(pieces));
  profile.commands_ = std::move(commands);
  return profile;
}

}  // namespace offroad
