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

#include "offroad/desired_trajectory.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_format.h"

namespace offroad {

DesiredTrajectory::DesiredTrajectory(PathGeometry geometry,
                                     SpeedProfile profile,
                                     std::shared_ptr<const SurfaceModel> surface)
    : geometry_(std::move(geometry)),
      profile_(std::move(profile)),
      surface_(std::move(surface)) {}

absl::StatusOr<TrajectorySample> DesiredTrajectory::Lift(
    TrajectorySample sample) const {
  if (surface_ == nullptr) return sample;
  absl::StatusOr<SurfacePartials> p =
      surface_->Evaluate(sample.position.x(), sample.position.y());
  if (!p.ok()) return p.status();
  const double vx = sample.velocity.x();
  const double vy = sample.velocity.y();
  sample.position.z() = p->f;
  sample.velocity.z() = HeightRate(*p, vx, vy);
  sample.acceleration.z() = HeightAcceleration(
      *p, vx, vy, sample.acceleration.x(), sample.acceleration.y());
  return sample;
}

absl::StatusOr<TrajectorySample> DesiredTrajectory::Sample(double t) const {
  if (!(t >= 0.0) || t > duration()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "t = %.6f s outside trajectory [0, %.6f]", t, duration()));
  }
  const SpeedSample speed = profile_.AtTime(t);
  const PathPoint point = geometry_.Evaluate(speed.s);
  const Eigen::Vector2d normal(-point.tangent.y(), point.tangent.x());
  const Eigen::Vector2d velocity = speed.v * point.tangent;
  const Eigen::Vector2d acceleration =
      speed.accel * point.tangent +
      speed.v * speed.v * point.curvature * normal;

  TrajectorySample sample;
  sample.t = t;
  sample.s = speed.s;
  sample.speed = speed.v;
  sample.position << point.position, 0.0;
  sample.velocity << velocity, 0.0;
  sample.acceleration << acceleration, 0.0;
  sample.curvature = point.curvature;
  sample.segment = point.segment;
  sample.phase = speed.phase;
  return Lift(sample);
}

absl::StatusOr<TrajectorySample> DesiredTrajectory::SampleExtended(
    double t) const {
  if (t <= duration()) return Sample(t);
  const double end_time = duration();
  const SpeedSample end_speed = profile_.AtTime(end_time);
  const PathPoint end = geometry_.Evaluate(geometry_.total_length());
  const double extra = end_speed.v * (t - end_time);

  TrajectorySample sample;
  sample.t = t;
  sample.s = geometry_.total_length() + extra;
  sample.speed = end_speed.v;
  sample.position << end.position + extra * end.tangent, 0.0;
  sample.velocity << end_speed.v * end.tangent, 0.0;
  sample.curvature = 0.0;
  sample.segment = static_cast<int>(geometry_.segments().size()) - 1;
  sample.phase = SpeedPhase::kCv;
  return Lift(sample);
}

absl::StatusOr<DesiredTrajectory> PlanTrajectory(
    std::span<const Eigen::Vector2d> waypoints, const TpsmConfig& config,
    double initial_speed, std::shared_ptr<const SurfaceModel> surface) {
  if (absl::Status s = ValidateTpsmConfig(config); !s.ok()) return s;
  absl::StatusOr<PathGeometry> geometry = PlanGeometry(waypoints, config.rho);
  if (!geometry.ok()) return geometry.status();
  absl::StatusOr<SpeedProfile> profile =
      BuildSpeedProfile(*geometry, config, initial_speed);
  if (!profile.ok()) return profile.status();
  DesiredTrajectory trajectory(*std::move(geometry), *std::move(profile),
                               std::move(surface));
  // Fail early if any part of the path is off the terrain.
  if (trajectory.surface() != nullptr) {
    for (const Eigen::Vector2d& w : waypoints) {
      if (!trajectory.surface()->Contains(w.x(), w.y())) {
        return absl::OutOfRangeError(absl::StrFormat(
            "waypoint (%.3f, %.3f) lies outside the terrain", w.x(), w.y()));
      }
    }
  }
  return trajectory;
}

absl::Status WriteTrajectoryCsv(const DesiredTrajectory& trajectory, double dt,
                                std::ostream& out) {
  if (!(dt > 0.0)) return absl::InvalidArgumentError("dt must be positive");
  out << "t_s,xd_m,yd_m,zd_m,vxd,vyd,vzd,axd,ayd,azd,segment_id,phase\n";
  const double duration = trajectory.duration();
  const long steps = static_cast<long>(std::floor(duration / dt + 1e-9));
  for (long k = 0; k <= steps + 1; ++k) {
    double t = k * dt;
    if (k == steps + 1) {
      if (duration - steps * dt <= 1e-9) break;
      t = duration;
    }
    absl::StatusOr<TrajectorySample> s = trajectory.Sample(std::min(t, duration));
    if (!s.ok()) return s.status();
    out << absl::StrFormat(
        "%.6f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%d,%s\n", t,
        s->position.x(), s->position.y(), s->position.z(), s->velocity.x(),
        s->velocity.y(), s->velocity.z(), s->acceleration.x(),
        s->acceleration.y(), s->acceleration.z(), s->segment,
        SpeedPhaseName(s->phase));
  }
  return out ? absl::OkStatus()
             : absl::InternalError("failed writing trajectory");
}

}  // namespace offroad
