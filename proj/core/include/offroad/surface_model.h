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

#ifndef OFFROAD_SURFACE_MODEL_H_
#define OFFROAD_SURFACE_MODEL_H_

#include <span>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "offroad/elevation_grid.h"

namespace offroad {

// Height of the interpolated terrain and its first and second partials.
struct SurfacePartials {
  double f = 0.0;
  double f_x = 0.0;
  double f_y = 0.0;
  double f_xx = 0.0;
  double f_yy = 0.0;
  double f_xy = 0.0;
};

// Twice-differentiable terrain surface z = f(x, y) built from an
// ElevationGrid.
//
// The interpolant is the tensor-product cubic spline with not-a-knot end
// conditions, evaluated cell by cell in bicubic Hermite form. It passes
// through every node height, is C2 across cell edges, and reproduces any
// bivariate polynomial of degree <= 3 in each variable exactly (planes and
// quadratic bowls in particular).
//
// Immutable after construction; Evaluate() may be called concurrently.
class SurfaceModel {
 public:
  explicit SurfaceModel(ElevationGrid grid);

  const ElevationGrid& grid() const { return grid_; }

  // True when (x, y) lies inside the closed node rectangle.
  bool Contains(double x, double y) const;

  // OutOfRange error outside the node rectangle.
  absl::StatusOr<SurfacePartials> Evaluate(double x, double y) const;

 private:
  ElevationGrid grid_;
  // Node data indexed [j * n_cols + i] with i along x and j along y (south
  // to north), unlike the north-first row order of the grid.
  std::vector<double> f_;
  std::vector<double> f_x_;
  std::vector<double> f_y_;
  std::vector<double> f_xy_;
};

// Node slopes of the not-a-knot cubic spline through equally spaced samples.
// Exposed for testing.
std::vector<double> NotAKnotSplineSlopes(std::span<const double> values,
                                         double spacing);

// Euler angles of the terrain frame: roll about i_T and pitch about j_G.
struct EulerAngles {
  double phi = 0.0;
  double theta = 0.0;
};

struct EulerRates {
  double phi_dot = 0.0;
  double theta_dot = 0.0;
};

// Surface-aligned frame. Basis vectors are expressed in ground coordinates;
// k_T is the upward surface normal.
struct TerrainFrame {
  Eigen::Vector3d i_T;
  Eigen::Vector3d j_T;
  Eigen::Vector3d k_T;
  double phi = 0.0;
  double theta = 0.0;
};

// Upward unit normal (-f_x, -f_y, 1) / |.| of the surface.
Eigen::Vector3d NormalFromPartials(const SurfacePartials& partials);
absl::StatusOr<Eigen::Vector3d> SurfaceNormal(const SurfaceModel& model,
                                              double x, double y);

// phi = asin(-k_y), theta = atan2(k_x, k_z). Rejects non-unit normals
// (tolerance 1e-9) and normals that do not point upward.
absl::StatusOr<EulerAngles> EulerAnglesFromNormal(
    const Eigen::Vector3d& normal);

// Rotation whose rows are i_T, j_T, k_T in ground coordinates, i.e.
// R_phi * R_theta with the standard rotation about the x axis.
Eigen::Matrix3d TerrainRotation(const EulerAngles& angles);

absl::StatusOr<TerrainFrame> TerrainFrameAt(const SurfaceModel& model,
                                            double x, double y);

// Time derivatives of roll and pitch along planar motion (x_dot, y_dot),
// using the exact chain rule through the normal. FailedPrecondition when
// |cos(phi)| < 1e-9.
absl::StatusOr<EulerRates> EulerRatesFromPartials(
    const SurfacePartials& partials, double x_dot, double y_dot);
absl::StatusOr<EulerRates> ComputeEulerRates(const SurfaceModel& model,
                                             double x, double y, double x_dot,
                                             double y_dot);

// dz/dt and d2z/dt2 of a point constrained to the surface.
double HeightRate(const SurfacePartials& p, double x_dot, double y_dot);
double HeightAcceleration(const SurfacePartials& p, double x_dot, double y_dot,
                          double x_ddot, double y_ddot);

}  // namespace offroad

#endif  // OFFROAD_SURFACE_MODEL_H_
