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

#include "offroad/surface_model.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace offroad {
namespace {

constexpr double kUnitTolerance = 1e-9;
constexpr double kGimbalTolerance = 1e-9;

// Cubic Hermite basis on [0, 1] for (p0, p1, m0, m1) and its first two
// derivatives with respect to the local coordinate.
struct HermiteBasis {
  std::array<double, 4> value;
  std::array<double, 4> d1;
  std::array<double, 4> d2;
};

HermiteBasis MakeBasis(double t, double spacing) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  HermiteBasis b;
  b.value = {2 * t3 - 3 * t2 + 1, -2 * t3 + 3 * t2,
             spacing * (t3 - 2 * t2 + t), spacing * (t3 - t2)};
  b.d1 = {6 * t2 - 6 * t, -6 * t2 + 6 * t, spacing * (3 * t2 - 4 * t + 1),
          spacing * (3 * t2 - 2 * t)};
  b.d2 = {12 * t - 6, -12 * t + 6, spacing * (6 * t - 4),
          spacing * (6 * t - 2)};
  return b;
}

// Locates the cell containing `coord` along one axis and returns
// (cell index, local coordinate in [0, 1]).
std::pair<int, double> Locate(double coord, double start, double spacing,
                              int n_nodes) {
  const double s = (coord - start) / spacing;
  int cell = static_cast<int>(std::floor(s));
  cell = std::clamp(cell, 0, n_nodes - 2);
  return {cell, s - cell};
}

}  // namespace

std::vector<double> NotAKnotSplineSlopes(std::span<const double> values,
                                         double spacing) {
  const int n = static_cast<int>(values.size());
  std::vector<double> slopes(n, 0.0);
  if (n < 2) return slopes;
  const double h = spacing;
  if (n == 2) {
    slopes[0] = slopes[1] = (values[1] - values[0]) / h;
    return slopes;
  }

  // Second derivatives M_i. Interior rows read
  //   M_{i-1} + 4 M_i + M_{i+1} = 6 (y_{i+1} - 2 y_i + y_{i-1}) / h^2.
  // Not-a-knot on a uniform grid means M_0 = 2 M_1 - M_2 and
  // M_{n-1} = 2 M_{n-2} - M_{n-3}; substituting them decouples the first
  // and last interior rows into 6 M_1 = r_1 and 6 M_{n-2} = r_{n-2}.
  std::vector<double> rhs(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    rhs[i] = 6.0 * (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (h * h);
  }
  std::vector<double> m(n, 0.0);
  if (n == 3) {
    // A single parabola through all three points.
    m[0] = m[1] = m[2] = rhs[1] / 6.0;
  } else {
    m[1] = rhs[1] / 6.0;
    m[n - 2] = rhs[n - 2] / 6.0;
    // Thomas algorithm on rows 2..n-3 with known M_1 and M_{n-2}.
    const int first = 2;
    const int last = n - 3;
    if (last >= first) {
      std::vector<double> c_prime(n, 0.0);
      std::vector<double> d_prime(n, 0.0);
      for (int i = first; i <= last; ++i) {
        double d = rhs[i];
        if (i == first) d -= m[1];
        if (i == last) d -= m[n - 2];
        const double sub = (i == first) ? 0.0 : 1.0;
        const double denom = 4.0 - sub * c_prime[i - 1];
        c_prime[i] = (i == last) ? 0.0 : 1.0 / denom;
        d_prime[i] = (d - sub * d_prime[i - 1]) / denom;
      }
      m[last] = d_prime[last];
      for (int i = last - 1; i >= first; --i) {
        m[i] = d_prime[i] - c_prime[i] * m[i + 1];
      }
    }
    m[0] = 2.0 * m[1] - m[2];
    m[n - 1] = 2.0 * m[n - 2] - m[n - 3];
  }

  for (int i = 0; i + 1 < n; ++i) {
    slopes[i] = (values[i + 1] - values[i]) / h - h * (2.0 * m[i] + m[i + 1]) / 6.0;
  }
  slopes[n - 1] =
      (values[n - 1] - values[n - 2]) / h + h * (m[n - 2] + 2.0 * m[n - 1]) / 6.0;
  return slopes;
}

SurfaceModel::SurfaceModel(ElevationGrid grid) : grid_(std::move(grid)) {
  const int nx = grid_.n_cols();
  const int ny = grid_.n_rows();
  const double h = grid_.cell_size();
  const size_t total = static_cast<size_t>(nx) * ny;
  f_.resize(total);
  f_x_.resize(total);
  f_y_.resize(total);
  f_xy_.resize(total);

  for (int j = 0; j < ny; ++j) {
    const int row = ny - 1 - j;
    for (int i = 0; i < nx; ++i) f_[j * nx + i] = grid_.height({row, i});
  }

  std::vector<double> line;
  for (int j = 0; j < ny; ++j) {
    line.assign(f_.begin() + j * nx, f_.begin() + (j + 1) * nx);
    std::vector<double> slopes = NotAKnotSplineSlopes(line, h);
    std::copy(slopes.begin(), slopes.end(), f_x_.begin() + j * nx);
  }
  line.resize(ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) line[j] = f_[j * nx + i];
    std::vector<double> slopes = NotAKnotSplineSlopes(line, h);
    for (int j = 0; j < ny; ++j) f_y_[j * nx + i] = slopes[j];

    for (int j = 0; j < ny; ++j) line[j] = f_x_[j * nx + i];
    slopes = NotAKnotSplineSlopes(line, h);
    for (int j = 0; j < ny; ++j) f_xy_[j * nx + i] = slopes[j];
  }
}

bool SurfaceModel::Contains(double x, double y) const {
  return x >= grid_.x_min() && x <= grid_.x_max() && y >= grid_.y_min() &&
         y <= grid_.y_max();
}

absl::StatusOr<SurfacePartials> SurfaceModel::Evaluate(double x,
                                                       double y) const {
  if (!Contains(x, y)) {
    return absl::OutOfRangeError(absl::StrFormat(
        "point (%.6f, %.6f) outside surface [%.6f, %.6f] x [%.6f, %.6f]", x, y,
        grid_.x_min(), grid_.x_max(), grid_.y_min(), grid_.y_max()));
  }
  const int nx = grid_.n_cols();
  const double h = grid_.cell_size();
  const auto [ci, u] = Locate(x, grid_.x_min(), h, nx);
  const auto [cj, v] = Locate(y, grid_.y_min(), h, grid_.n_rows());
  const HermiteBasis bx = MakeBasis(u, h);
  const HermiteBasis by = MakeBasis(v, h);

  // g[p][q]: p indexes (value at i, value at i+1, d/dx at i, d/dx at i+1),
  // q the same along y.
  const int k00 = cj * nx + ci;
  const int k10 = k00 + 1;
  const int k01 = k00 + nx;
  const int k11 = k01 + 1;
  const double g[4][4] = {
      {f_[k00], f_[k01], f_y_[k00], f_y_[k01]},
      {f_[k10], f_[k11], f_y_[k10], f_y_[k11]},
      {f_x_[k00], f_x_[k01], f_xy_[k00], f_xy_[k01]},
      {f_x_[k10], f_x_[k11], f_xy_[k10], f_xy_[k11]},
  };

  SurfacePartials out;
  for (int p = 0; p < 4; ++p) {
    for (int q = 0; q < 4; ++q) {
      const double c = g[p][q];
      out.f += c * bx.value[p] * by.value[q];
      out.f_x += c * bx.d1[p] * by.value[q];
      out.f_y += c * bx.value[p] * by.d1[q];
      out.f_xx += c * bx.d2[p] * by.value[q];
      out.f_yy += c * bx.value[p] * by.d2[q];
      out.f_xy += c * bx.d1[p] * by.d1[q];
    }
  }
  out.f_x /= h;
  out.f_y /= h;
  out.f_xx /= h * h;
  out.f_yy /= h * h;
  out.f_xy /= h * h;
  return out;
}

Eigen::Vector3d NormalFromPartials(const SurfacePartials& partials) {
  return Eigen::Vector3d(-partials.f_x, -partials.f_y, 1.0).normalized();
}

absl::StatusOr<Eigen::Vector3d> SurfaceNormal(const SurfaceModel& model,
                                              double x, double y) {
  absl::StatusOr<SurfacePartials> partials = model.Evaluate(x, y);
  if (!partials.ok()) return partials.status();
  return NormalFromPartials(*partials);
}

absl::StatusOr<EulerAngles> EulerAnglesFromNormal(
    const Eigen::Vector3d& normal) {
  if (!normal.allFinite() || std::abs(normal.norm() - 1.0) > kUnitTolerance) {
    return absl::InvalidArgumentError("terrain normal must be a unit vector");
  }
  if (!(normal.z() > 0.0)) {
    return absl::InvalidArgumentError("terrain normal must point upward");
  }
  EulerAngles angles;
  angles.phi = std::asin(std::clamp(-normal.y(), -1.0, 1.0));
  angles.theta = std::atan2(normal.x(), normal.z());
  return angles;
}

Eigen::Matrix3d TerrainRotation(const EulerAngles& angles) {
  const double sp = std::sin(angles.phi);
  const double cp = std::cos(angles.phi);
  const double st = std::sin(angles.theta);
  const double ct = std::cos(angles.theta);
  Eigen::Matrix3d r;
  r << ct, 0.0, -st,  //
      sp * st, cp, sp * ct,  //
      cp * st, -sp, cp * ct;
  return r;
}

absl::StatusOr<TerrainFrame> TerrainFrameAt(const SurfaceModel& model,
                                            double x, double y) {
  absl::StatusOr<Eigen::Vector3d> normal = SurfaceNormal(model, x, y);
  if (!normal.ok()) return normal.status();
  absl::StatusOr<EulerAngles> angles = EulerAnglesFromNormal(*normal);
  if (!angles.ok()) return angles.status();
  const Eigen::Matrix3d r = TerrainRotation(*angles);
  TerrainFrame frame;
  frame.i_T = r.row(0).transpose();
  frame.j_T = r.row(1).transpose();
  // Row 3 of the rotation equals the normal up to rounding; keep the normal
  // itself so k_T is exactly the surface normal.
  frame.k_T = *normal;
  frame.phi = angles->phi;
  frame.theta = angles->theta;
  return frame;
}

absl::StatusOr<EulerRates> EulerRatesFromPartials(
    const SurfacePartials& partials, double x_dot, double y_dot) {
  const Eigen::Vector3d n(-partials.f_x, -partials.f_y, 1.0);
  const Eigen::Vector3d n_dot(-(partials.f_xx * x_dot + partials.f_xy * y_dot),
                              -(partials.f_xy * x_dot + partials.f_yy * y_dot),
                              0.0);
  const double norm = n.norm();
  const Eigen::Vector3d k = n / norm;
  const Eigen::Vector3d k_dot =
      n_dot / norm - n * (n.dot(n_dot) / (norm * norm * norm));

  const double horizontal = k.x() * k.x() + k.z() * k.z();
  const double cos_phi = std::sqrt(horizontal);
  if (cos_phi < kGimbalTolerance) {
    return absl::FailedPreconditionError(
        "roll angle at +-90 degrees; Euler rates undefined");
  }
  EulerRates rates;
  rates.phi_dot = -k_dot.y() / cos_phi;
  rates.theta_dot = (k.z() * k_dot.x() - k.x() * k_dot.z()) / horizontal;
  return rates;
}

absl::StatusOr<EulerRates> ComputeEulerRates(const SurfaceModel& model,
                                             double x, double y, double x_dot,
                                             double y_dot) {
  absl::StatusOr<SurfacePartials> partials = model.Evaluate(x, y);
  if (!partials.ok()) return partials.status();
  return EulerRatesFromPartials(*partials, x_dot, y_dot);
}

double HeightRate(const SurfacePartials& p, double x_dot, double y_dot) {
  return p.f_x * x_dot + p.f_y * y_dot;
}

double HeightAcceleration(const SurfacePartials& p, double x_dot, double y_dot,
                          double x_ddot, double y_ddot) {
  return p.f_x * x_ddot + p.f_xx * x_dot * x_dot + p.f_yy * y_dot * y_dot +
         p.f_y * y_ddot + 2.0 * p.f_xy * x_dot * y_dot;
}

}  // namespace offroad
