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

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "gtest/gtest.h"
#include "offroad/desired_trajectory.h"
#include "offroad/simulation.h"
#include "offroad/tracking_controller.h"
#include "test_util.h"

namespace offroad {
namespace {

using ::offroad::testing::MakeGrid;
using ::offroad::testing::MakeSurface;

TrajectorySample AtRest() { return TrajectorySample{}; }

TEST(CommandedPlanarAccelTest, ZeroError) {
  const Eigen::Vector2d a = CommandedPlanarAccel({0, 0}, {0, 0}, AtRest(), GainConfig{});
  EXPECT_EQ(a, Eigen::Vector2d::Zero());
}

TEST(CommandedPlanarAccelTest, PositionErrorOnly) {
  // Desired minus actual is (1, 0), so E = actual - desired = (-1, 0).
  const TrackingError e = ComputeTrackingError({-1, 0}, {0, 0}, AtRest());
  EXPECT_EQ(e.E, Eigen::Vector2d(-1, 0));
  const Eigen::Vector2d a = CommandedPlanarAccel({-1, 0}, {0, 0}, AtRest(), GainConfig{});
  EXPECT_NEAR(a.x(), 20.0, 1e-15);
  EXPECT_NEAR(a.y(), 0.0, 1e-15);
}

TEST(CommandedPlanarAccelTest, FeedforwardAndDamping) {
  TrajectorySample d;
  d.velocity = {1.0, 0.0, 0.0};
  d.acceleration = {0.5, -0.25, 0.0};
  const Eigen::Vector2d a = CommandedPlanarAccel({0, 0}, {1.5, 0}, d, GainConfig{});
  EXPECT_NEAR(a.x(), 0.5 - 10.0 * 0.5, 1e-15);
  EXPECT_NEAR(a.y(), -0.25, 1e-15);
}

TEST(GainsTest, ClosedLoopPoles) {
  const GainConfig g;
  const std::complex<double> disc(g.k1 * g.k1 - 4 * g.k2, 0.0);
  const double slow = ((-g.k1 + std::sqrt(disc)) / 2.0).real();
  const double fast = ((-g.k1 - std::sqrt(disc)) / 2.0).real();
  EXPECT_NEAR(slow, -5.0 + std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(fast, -5.0 - std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(slow, -2.764, 5e-4);
  EXPECT_NEAR(fast, -7.236, 5e-4);
  EXPECT_TRUE(ValidateGains(g).ok());
  EXPECT_FALSE(ValidateGains({0.0, 1.0}).ok());
  EXPECT_FALSE(ValidateGains({1.0, -1.0}).ok());
}

TEST(VerticalAccelTest, Examples) {
  auto flat = MakeSurface(MakeGrid(6, 6, 1.0, [](double, double) { return 4.0; }));
  EXPECT_NEAR(*VerticalAccel(*flat, 2, 2, 3, -1, 5, 7), 0.0, 1e-12);
  auto plane = MakeSurface(MakeGrid(6, 6, 1.0, [](double x, double) { return 0.1 * x; }));
  EXPECT_NEAR(*VerticalAccel(*plane, 2, 2, 0, 0, 2, 0), 0.2, 1e-12);
  auto bowl = MakeSurface(MakeGrid(41, 41, 0.25, [](double x, double y) {
    return (x * x + y * y) / 2.0;
  }, {-5.0, -5.0}));
  EXPECT_NEAR(*VerticalAccel(*bowl, 1.0, 0.5, 1, 0, 0, 0), 1.0, 1e-9);
  EXPECT_FALSE(VerticalAccel(*flat, 9, 2, 0, 0, 0, 0).ok());
}

TEST(VerticalAccelTest, BowlMatchesSecondDifferenceAlongPath) {
  auto bowl = MakeSurface(MakeGrid(41, 41, 0.25, [](double x, double y) {
    return (x * x + y * y) / 2.0;
  }, {-5.0, -5.0}));
  // x = t, y = 0.3 t^2 near t = 1.
  auto z = [&](double t) { return bowl->Evaluate(t - 1.0, 0.3 * t * t)->f; };
  const double t = 1.2, h = 1e-3;
  const double fd = (z(t + h) - 2 * z(t) + z(t - h)) / (h * h);
  const double za = *VerticalAccel(*bowl, t - 1.0, 0.3 * t * t, 1.0, 0.6 * t, 0.0, 0.6);
  EXPECT_NEAR(fd, za, 1e-4);
}

class ControlStepTest : public ::testing::Test {
 protected:
  void SetUp() override {
    surface_ = MakeSurface(MakeGrid(61, 41, 1.0, [](double, double) { return 0.0; },
                                    {-10.0, -20.0}));
    const std::vector<Eigen::Vector2d> wp = {{0, 0}, {10, 0}, {10, 10}};
    traj_ = std::make_shared<DesiredTrajectory>(
        *PlanTrajectory(wp, TpsmConfig{}, 2.0, surface_));
  }
  std::shared_ptr<const SurfaceModel> surface_;
  std::shared_ptr<DesiredTrajectory> traj_;
};

TEST_F(ControlStepTest, OnStraightReferenceIsIdle) {
  const double t = 1.0;
  const VehicleState s = *InitialStateOnTrajectory(*traj_, *surface_, t);
  const ControlOutput out =
      *ControlStep(s, *traj_->Sample(t), GainConfig{}, *surface_, VehicleParams{});
  EXPECT_LT(std::abs(out.applied.a_T), 1e-9);
  EXPECT_LT(std::abs(out.applied.gamma), 1e-9);
  EXPECT_FALSE(out.clamped);
  EXPECT_LT(out.error.E.norm(), 1e-12);
}

TEST_F(ControlStepTest, ArcFeedforwardIsCentripetal) {
  const double t = (traj_->geometry().SegmentStart(1) + 1e-6) / 2.0;
  const TrajectorySample d = *traj_->Sample(t);
  ASSERT_EQ(d.segment, 1);
  const VehicleState s = *InitialStateOnTrajectory(*traj_, *surface_, t);
  const ControlOutput out = *ControlStep(s, d, GainConfig{}, *surface_, VehicleParams{});
  EXPECT_NEAR(out.r_ddot_cmd.head<2>().norm(), 1.0, 1e-6);
  const Eigen::Vector2d inward =
      (traj_->geometry().segments()[1].arc.center - d.position.head<2>()).normalized();
  EXPECT_NEAR(out.r_ddot_cmd.head<2>().normalized().dot(inward), 1.0, 1e-6);
  EXPECT_NEAR(out.raw.a_T, 0.0, 1e-6);
  EXPECT_NEAR(out.raw.gamma, 0.5, 1e-6);  // 1 m/s^2 lateral over v_T = 2
}

TEST_F(ControlStepTest, SlowCarIsSingular) {
  VehicleState s = *InitialStateOnTrajectory(*traj_, *surface_, 1.0);
  s.v_T = 0.0;
  EXPECT_TRUE(absl::IsFailedPrecondition(
      ControlStep(s, *traj_->Sample(1.0), GainConfig{}, *surface_, VehicleParams{})
          .status()));
}

TEST_F(ControlStepTest, LargeErrorIsClamped) {
  VehicleState s = *InitialStateOnTrajectory(*traj_, *surface_, 1.0);
  s.y += 2.0;
  const ControlOutput out =
      *ControlStep(s, *traj_->Sample(1.0), GainConfig{}, *surface_, VehicleParams{});
  EXPECT_TRUE(out.clamped);
  EXPECT_LE(std::abs(out.applied.gamma), VehicleParams{}.gamma_max);
  EXPECT_GT(std::abs(out.raw.gamma), VehicleParams{}.gamma_max);
}

}  // namespace
}  // namespace offroad
