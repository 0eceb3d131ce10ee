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
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "gtest/gtest.h"
#include "offroad/desired_trajectory.h"
#include "offroad/path_geometry.h"
#include "offroad/speed_profile.h"
#include "offroad/tpsm.h"
#include "test_util.h"

namespace offroad {
namespace {

using ::offroad::testing::MakeGrid;
using ::offroad::testing::MakeSurface;
using Kind = PathSegment::Kind;

const std::vector<Eigen::Vector2d> kScenarioWaypoints = {
    {885.0, 418.5}, {892.5, 411.0}, {885.0, 403.5}};

double Angle(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
}

// ---- segment slope ----------------------------------------------------------

TEST(SegmentSlopeTest, Examples) {
  SegmentSlope a = *ComputeSegmentSlope({885, 418.5}, {892.5, 411});
  EXPECT_EQ(a.mu, -1.0);
  EXPECT_FALSE(a.vertical);
  SegmentSlope b = *ComputeSegmentSlope({892.5, 411}, {885, 403.5});
  EXPECT_EQ(b.mu, 1.0);
  SegmentSlope v = *ComputeSegmentSlope({0, 0}, {0, 5});
  EXPECT_TRUE(v.vertical);
  EXPECT_FALSE(ComputeSegmentSlope({1, 1}, {1, 1}).ok());
}

TEST(SegmentSlopeTest, ContinuationNeedsSameDirection) {
  SegmentSlope fwd = *ComputeSegmentSlope({0, 0}, {1, 1});
  SegmentSlope fwd2 = *ComputeSegmentSlope({1, 1}, {3, 3});
  SegmentSlope back = *ComputeSegmentSlope({1, 1}, {0, 0});
  EXPECT_TRUE(IsStraightContinuation(fwd, fwd2));
  EXPECT_FALSE(IsStraightContinuation(fwd, back));
  SegmentSlope up = *ComputeSegmentSlope({0, 0}, {0, 1});
  SegmentSlope up2 = *ComputeSegmentSlope({0, 1}, {0, 4});
  EXPECT_TRUE(IsStraightContinuation(up, up2));
}

// ---- geometry ---------------------------------------------------------------

TEST(PlanGeometryTest, CollinearMerges) {
  const std::vector<Eigen::Vector2d> wp = {{0, 0}, {1, 2}, {3, 6}};
  PathGeometry g = *PlanGeometry(wp, 4.0);
  ASSERT_EQ(g.segments().size(), 1u);
  EXPECT_EQ(g.segments()[0].kind, Kind::kLine);
  EXPECT_NEAR(g.total_length(), std::sqrt(45.0), 1e-12);
}

TEST(PlanGeometryTest, ScenarioCorner) {
  PathGeometry g = *PlanGeometry(kScenarioWaypoints, 4.0);
  ASSERT_EQ(g.segments().size(), 3u);
  EXPECT_EQ(g.segments()[0].kind, Kind::kLine);
  EXPECT_EQ(g.segments()[1].kind, Kind::kArc);
  EXPECT_EQ(g.segments()[2].kind, Kind::kLine);
  const double leg = 7.5 * std::numbers::sqrt2 - 4.0;
  EXPECT_NEAR(g.segments()[0].Length(), leg, 1e-12);
  EXPECT_NEAR(g.segments()[1].Length(), 2.0 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(g.segments()[2].Length(), leg, 1e-12);
  EXPECT_NEAR(g.total_length(), 19.4964, 5e-5);
  // Right turn (clockwise) about the centre on the inner bisector.
  const ArcSegment& arc = g.segments()[1].arc;
  EXPECT_LT(arc.sweep, 0.0);
  EXPECT_NEAR(arc.radius, 4.0, 1e-15);
  const Eigen::Vector2d corner = kScenarioWaypoints[1];
  EXPECT_NEAR((arc.center - corner).norm(), 4.0 / std::sin(std::numbers::pi / 4), 1e-12);
  // Tangency points at 4 m from the corner on each leg.
  EXPECT_NEAR((g.segments()[0].line.end - corner).norm(), 4.0, 1e-12);
  EXPECT_NEAR((g.segments()[2].line.start - corner).norm(), 4.0, 1e-12);
}

TEST(PlanGeometryTest, G1ContinuityAtJoins) {
  PathGeometry g = *PlanGeometry(kScenarioWaypoints, 4.0);
  for (size_t i = 1; i < g.segments().size(); ++i) {
    const PathSegment& prev = g.segments()[i - 1];
    const PathSegment& next = g.segments()[i];
    EXPECT_NEAR((prev.PointAt(prev.Length()) - next.PointAt(0)).norm(), 0.0, 1e-12);
    EXPECT_NEAR(Angle(prev.TangentAt(prev.Length()), next.TangentAt(0)), 0.0, 1e-9);
  }
}

TEST(PlanGeometryTest, InfeasibleFillets) {
  const std::vector<Eigen::Vector2d> tight = {{0, 0}, {3, 0}, {3, 3}};
  EXPECT_FALSE(PlanGeometry(tight, 5.0).ok());
  const std::vector<Eigen::Vector2d> reversal = {{0, 0}, {10, 0}, {0, 0}};
  EXPECT_FALSE(PlanGeometry(reversal, 1.0).ok());
  const std::vector<Eigen::Vector2d> repeat = {{0, 0}, {0, 0}, {5, 0}};
  EXPECT_FALSE(PlanGeometry(repeat, 1.0).ok());
  const std::vector<Eigen::Vector2d> single = {{0, 0}};
  EXPECT_FALSE(PlanGeometry(single, 1.0).ok());
  // Two corners sharing one leg: offsets 1 + 1 fit in 2, but not in 1.9.
  const std::vector<Eigen::Vector2d> shared = {{0, 0}, {5, 0}, {5, 2}, {10, 2}};
  EXPECT_TRUE(PlanGeometry(shared, 1.0).ok());
  const std::vector<Eigen::Vector2d> shorter = {{0, 0}, {5, 0}, {5, 1.9}, {10, 1.9}};
  EXPECT_FALSE(PlanGeometry(shorter, 1.0).ok());
}

TEST(PlanGeometryTest, ArcLengthMatchesIntegration) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  std::uniform_real_distribution<double> r(0.5, 3.0);
  int checked = 0;
  while (checked < 20) {
    const std::vector<Eigen::Vector2d> wp = {{u(rng), u(rng)}, {u(rng), u(rng)},
                                             {u(rng), u(rng)}, {u(rng), u(rng)}};
    absl::StatusOr<PathGeometry> g = PlanGeometry(wp, r(rng));
    if (!g.ok()) continue;
    ++checked;
    double integrated = 0.0;
    const int n = 20000;
    Eigen::Vector2d prev = g->Evaluate(0.0).position;
    for (int i = 1; i <= n; ++i) {
      const Eigen::Vector2d p = g->Evaluate(g->total_length() * i / n).position;
      integrated += (p - prev).norm();
      prev = p;
    }
    EXPECT_NEAR(integrated / g->total_length(), 1.0, 1e-6);
  }
}

TEST(PlanGeometryTest, EvaluateIsRightContinuous) {
  PathGeometry g = *PlanGeometry(kScenarioWaypoints, 4.0);
  EXPECT_EQ(g.SegmentIndexAt(g.SegmentStart(1)), 1);
  EXPECT_EQ(g.Evaluate(g.SegmentStart(1)).segment, 1);
  EXPECT_EQ(g.Evaluate(-1.0).segment, 0);
  EXPECT_EQ(g.Evaluate(1e9).segment, 2);
  EXPECT_NEAR(g.Evaluate(g.SegmentStart(1) + 1.0).curvature, -0.25, 1e-15);
}

// ---- state machine ------------------------------------------------------------

TpsmInputs Straight(double v) {
  TpsmInputs in;
  in.v_T = v;
  in.mu_prev = *ComputeSegmentSlope({0, 0}, {1, 0});
  in.mu_next = *ComputeSegmentSlope({1, 0}, {2, 0});
  return in;
}

TpsmInputs Turn(double v) {
  TpsmInputs in = Straight(v);
  in.mu_next = *ComputeSegmentSlope({1, 0}, {1, 1});
  return in;
}

TEST(TpsmTest, Examples) {
  TpsmConfig config;
  EXPECT_EQ(RunTpsm(Straight(1.0), config).current, TpsmNode::kAcc);
  EXPECT_EQ(RunTpsm(Straight(2.0), config).current, TpsmNode::kCv);
  EXPECT_EQ(RunTpsm(Straight(3.0), config).current, TpsmNode::kDec);
  config.v0 = 6.0;
  TpsmState s = RunTpsm(Turn(6.0), config);
  EXPECT_EQ(s.current, TpsmNode::kDec);
  EXPECT_DOUBLE_EQ(s.command_speed, 4.0);
  s = RunTpsm(Turn(4.0), config);
  EXPECT_EQ(s.current, TpsmNode::kCv);
}

TEST(TpsmTest, NegativeNormalForceDecelerates) {
  TpsmInputs in = Straight(1.0);
  in.normal_force_positive = false;
  std::vector<TpsmNode> trace;
  TpsmState s = RunTpsm(in, TpsmConfig{}, &trace);
  EXPECT_EQ(s.current, TpsmNode::kDec);
  EXPECT_EQ(s.command_speed, 0.0);
  EXPECT_EQ(trace, (std::vector<TpsmNode>{TpsmNode::kP0, TpsmNode::kDec}));
}

TEST(TpsmTest, TraceThroughTurn) {
  std::vector<TpsmNode> trace;
  RunTpsm(Turn(1.0), TpsmConfig{}, &trace);
  EXPECT_EQ(trace, (std::vector<TpsmNode>{TpsmNode::kP0, TpsmNode::kP1,
                                          TpsmNode::kP4, TpsmNode::kP2,
                                          TpsmNode::kAcc}));
}

TEST(TpsmTest, LateralBoundLowersTurnSpeed) {
  TpsmConfig config;
  config.v0 = 3.0;
  config.lateral_accel_max = 1.0;  // sqrt(1 * 4) = 2
  EXPECT_DOUBLE_EQ(TurnSpeed(config), 2.0);
  config.lateral_accel_max.reset();
  EXPECT_DOUBLE_EQ(TurnSpeed(config), 3.0);
}

TEST(TpsmTest, TerminalStatesAreFixed) {
  for (TpsmNode n : {TpsmNode::kAcc, TpsmNode::kDec, TpsmNode::kCv}) {
    EXPECT_TRUE(IsTerminal(n));
    TpsmState s{n, 1.5};
    EXPECT_EQ(TpsmStep(s, Straight(0.0), TpsmConfig{}).current, n);
  }
  EXPECT_FALSE(IsTerminal(TpsmNode::kP3));
  EXPECT_STREQ(TpsmNodeName(TpsmNode::kAcc), "ACC");
}

TEST(TpsmTest, ConfigValidation) {
  EXPECT_TRUE(ValidateTpsmConfig(TpsmConfig{}).ok());
  TpsmConfig bad;
  bad.rho = 0.0;
  EXPECT_FALSE(ValidateTpsmConfig(bad).ok());
  bad = TpsmConfig{};
  bad.decel = -1.0;
  EXPECT_FALSE(ValidateTpsmConfig(bad).ok());
  bad = TpsmConfig{};
  bad.v0 = std::nan("");
  EXPECT_FALSE(ValidateTpsmConfig(bad).ok());
}

// ---- speed profile ------------------------------------------------------------

TEST(SpeedProfileTest, AllLineRampsFromRest) {
  const std::vector<Eigen::Vector2d> wp = {{0, 0}, {20, 0}};
  PathGeometry g = *PlanGeometry(wp, 1.0);
  SpeedProfile p = *BuildSpeedProfile(g, TpsmConfig{});
  EXPECT_EQ(p.AtTime(0.0).v, 0.0);
  EXPECT_EQ(p.AtTime(0.5).phase, SpeedPhase::kAcc);
  EXPECT_NEAR(p.AtTime(1.0).s, 0.5, 1e-12);
  EXPECT_NEAR(p.AtTime(3.0).v, 2.0, 1e-12);
  EXPECT_EQ(p.AtTime(3.0).phase, SpeedPhase::kCv);
  EXPECT_NEAR(p.duration(), 2.0 + 18.0 / 2.0, 1e-12);
  EXPECT_NEAR(p.length(), 20.0, 1e-12);
}

TEST(SpeedProfileTest, ScenarioIsConstant) {
  PathGeometry g = *PlanGeometry(kScenarioWaypoints, 4.0);
  SpeedProfile p = *BuildSpeedProfile(g, TpsmConfig{}, 2.0);
  EXPECT_EQ(p.segment_commands(), (std::vector<double>{2.0, 2.0, 2.0}));
  for (double t = 0.0; t <= p.duration(); t += 0.1) {
    EXPECT_NEAR(p.AtTime(t).v, 2.0, 1e-12);
  }
  EXPECT_NEAR(p.duration(), 19.4964 / 2.0, 5e-5);
}

TEST(SpeedProfileTest, FastApproachDeceleratesBeforeArc) {
  const std::vector<Eigen::Vector2d> wp = {{0, 0}, {40, 0}, {40, 40}};
  PathGeometry g = *PlanGeometry(wp, 4.0);
  TpsmConfig config;
  config.v0 = 6.0;
  SpeedProfile p = *BuildSpeedProfile(g, config, 6.0);
  EXPECT_EQ(p.segment_commands(), (std::vector<double>{6.0, 4.0, 6.0}));
  bool saw_dec = false, saw_acc = false;
  const double arc_start = g.SegmentStart(1), arc_end = g.SegmentStart(2);
  for (const SpeedPiece& piece : p.pieces()) {
    if (piece.phase == SpeedPhase::kDec) {
      saw_dec = true;
      EXPECT_NEAR(piece.s_end, arc_start, 1e-9);
      EXPECT_NEAR(piece.s_end - piece.s_start, 10.0, 1e-9);
    }
    if (piece.phase == SpeedPhase::kAcc) {
      saw_acc = true;
      EXPECT_NEAR(piece.s_start, arc_end, 1e-9);
    }
  }
  EXPECT_TRUE(saw_dec);
  EXPECT_TRUE(saw_acc);
  for (double t = 0.0; t <= p.duration(); t += 0.01) {
    const SpeedSample s = p.AtTime(t);
    if (s.s > arc_start + 1e-9 && s.s < arc_end - 1e-9) {
      EXPECT_LE(s.v / 4.0, config.psi_dot_max + 1e-12);
    }
  }
}

TEST(SpeedProfileTest, ShortApproachIsAnError) {
  const std::vector<Eigen::Vector2d> wp = {{0, 0}, {12, 0}, {12, 40}};
  PathGeometry g = *PlanGeometry(wp, 4.0);
  TpsmConfig config;
  config.v0 = 6.0;
  EXPECT_FALSE(BuildSpeedProfile(g, config, 6.0).ok());
}

// ---- desired trajectory --------------------------------------------------------

TEST(DesiredTrajectoryTest, StartAndStraightLine) {
  DesiredTrajectory traj = *PlanTrajectory(kScenarioWaypoints, TpsmConfig{}, 2.0, nullptr);
  TrajectorySample s0 = *traj.Sample(0.0);
  EXPECT_EQ(s0.position.head<2>(), kScenarioWaypoints[0]);
  EXPECT_NEAR(s0.speed, 2.0, 1e-15);
  TrajectorySample mid = *traj.Sample(1.0);
  EXPECT_NEAR(mid.acceleration.head<2>().norm(), 0.0, 1e-12);
  EXPECT_NEAR(mid.velocity.head<2>().norm(), 2.0, 1e-12);
  EXPECT_FALSE(traj.Sample(-0.1).ok());
  EXPECT_FALSE(traj.Sample(traj.duration() + 0.1).ok());
  EXPECT_TRUE(traj.SampleExtended(traj.duration() + 0.1).ok());
}

TEST(DesiredTrajectoryTest, CentripetalOnArc) {
  DesiredTrajectory traj = *PlanTrajectory(kScenarioWaypoints, TpsmConfig{}, 2.0, nullptr);
  const ArcSegment& arc = traj.geometry().segments()[1].arc;
  const double t = (traj.geometry().SegmentStart(1) + 3.0) / 2.0;
  TrajectorySample s = *traj.Sample(t);
  EXPECT_EQ(s.segment, 1);
  const Eigen::Vector2d a = s.acceleration.head<2>();
  EXPECT_NEAR(a.norm(), 1.0, 1e-12);
  const Eigen::Vector2d inward = (arc.center - s.position.head<2>()).normalized();
  EXPECT_NEAR(a.normalized().dot(inward), 1.0, 1e-12);
}

TEST(DesiredTrajectoryTest, DerivativesMatchFiniteDifferences) {
  auto surface = MakeSurface(MakeGrid(36, 31, 1.0, [](double x, double y) {
    return 0.01 * x + 0.02 * std::sin(0.7 * x) * std::cos(0.5 * y);
  }, {870.0, 395.0}));
  const std::vector<Eigen::Vector2d> wp = {{875, 400}, {895, 400}, {895, 420}};
  TpsmConfig config;
  config.v0 = 3.0;
  DesiredTrajectory traj = *PlanTrajectory(wp, config, 0.0, surface);
  const double h = 1e-5;
  for (double t = 0.05; t < traj.duration() - 0.05; t += 0.037) {
    const TrajectorySample s = *traj.Sample(t);
    const TrajectorySample a = *traj.Sample(t - h);
    const TrajectorySample b = *traj.Sample(t + h);
    if (a.segment != b.segment || a.phase != b.phase) continue;
    const Eigen::Vector3d fd_v = (b.position - a.position) / (2 * h);
    const Eigen::Vector3d fd_a = (b.velocity - a.velocity) / (2 * h);
    EXPECT_NEAR((fd_v - s.velocity).norm(), 0.0, 1e-5) << t;
    EXPECT_NEAR((fd_a - s.acceleration).norm(), 0.0, 1e-5) << t;
    EXPECT_NEAR(s.position.z(), surface->Evaluate(s.position.x(), s.position.y())->f,
                1e-12);
    EXPECT_NEAR(s.velocity.head<2>().norm(), s.speed, 1e-12);
  }
}

TEST(DesiredTrajectoryTest, WaypointOffTheSurfaceIsOutOfRange) {
  auto surface = MakeSurface(MakeGrid(5, 5, 1.0, [](double, double) { return 0.0; }));
  const std::vector<Eigen::Vector2d> wp = {{1, 1}, {10, 1}};
  EXPECT_TRUE(absl::IsOutOfRange(PlanTrajectory(wp, TpsmConfig{}, 2.0, surface).status()));
  DesiredTrajectory inside = *PlanTrajectory(
      std::vector<Eigen::Vector2d>{{1, 1}, {3, 1}}, TpsmConfig{}, 2.0, surface);
  EXPECT_TRUE(inside.Sample(inside.duration()).ok());
  EXPECT_TRUE(absl::IsOutOfRange(inside.SampleExtended(inside.duration() + 1.0).status()));
}

TEST(DesiredTrajectoryTest, CsvExport) {
  DesiredTrajectory traj = *PlanTrajectory(kScenarioWaypoints, TpsmConfig{}, 2.0, nullptr);
  std::ostringstream out;
  ASSERT_TRUE(WriteTrajectoryCsv(traj, 0.5, out).ok());
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t_s,xd_m,yd_m,zd_m,vxd,vyd,vzd,axd,ayd,azd,segment_id,phase");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  EXPECT_EQ(rows, static_cast<int>(std::floor(traj.duration() / 0.5)) + 2);
  EXPECT_NE(last.find(",CV"), std::string::npos);
  EXPECT_FALSE(WriteTrajectoryCsv(traj, 0.0, out).ok());
}

}  // namespace
}  // namespace offroad
