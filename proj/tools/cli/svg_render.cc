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

#include "cli/svg_render.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"

namespace offroad::cli {
namespace {

constexpr char kLogHeader[] =
    "t_s,x,y,z,psi,vT,delta,xd,yd,zd,aT_cmd,gamma_cmd,FN,errE,clamped";
constexpr int kBands = 10;
constexpr double kMapPixels = 800.0;
constexpr double kMargin = 20.0;
constexpr double kLegendWidth = 200.0;
constexpr double kExtentSlack = 1e-6;

struct Rgb {
  int r, g, b;
};

Rgb BandColor(int band) {
  const Rgb low{226, 236, 204};
  const Rgb high{140, 100, 64};
  const double t = kBands == 1 ? 0.0 : static_cast<double>(band) / (kBands - 1);
  auto mix = [t](int a, int b) {
    return static_cast<int>(std::lround(a + (b - a) * t));
  };
  return {mix(low.r, high.r), mix(low.g, high.g), mix(low.b, high.b)};
}

const char* ObstacleColor(ObstacleReason reason) {
  switch (reason) {
    case ObstacleReason::kWater:
      return "#3a7bd5";
    case ObstacleReason::kFoliageOrBuilding:
      return "#2e7d32";
    case ObstacleReason::kSteep:
      return "#c62828";
    case ObstacleReason::kClear:
      break;
  }
  return "none";
}

class Projection {
 public:
  explicit Projection(const ElevationGrid& grid)
      : x0_(grid.x_min() - 0.5 * grid.cell_size()),
        y1_(grid.y_max() + 0.5 * grid.cell_size()) {
    const double w = grid.x_max() - grid.x_min() + grid.cell_size();
    const double h = grid.y_max() - grid.y_min() + grid.cell_size();
    scale_ = kMapPixels / std::max(w, h);
    width_ = w * scale_;
    height_ = h * scale_;
  }
  double X(double x) const { return kMargin + (x - x0_) * scale_; }
  double Y(double y) const { return kMargin + (y1_ - y) * scale_; }
  double scale() const { return scale_; }
  double width() const { return width_; }
  double height() const { return height_; }

 private:
  double x0_, y1_;
  double scale_ = 1.0, width_ = 0.0, height_ = 0.0;
};

bool InsideExtent(const ElevationGrid& grid, const Eigen::Vector2d& p) {
  return p.x() >= grid.x_min() - kExtentSlack &&
         p.x() <= grid.x_max() + kExtentSlack &&
         p.y() >= grid.y_min() - kExtentSlack &&
         p.y() <= grid.y_max() + kExtentSlack;
}

void Polyline(const Projection& proj, const std::vector<Eigen::Vector2d>& points,
              const char* stroke, double width, const char* extra,
              std::ostream& out) {
  out << absl::StrFormat("<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"%.1f\"%s points=\"",
                         stroke, width, extra);
  for (size_t i = 0; i < points.size(); ++i) {
    if (i > 0) out << ' ';
    out << absl::StrFormat("%.2f,%.2f", proj.X(points[i].x()),
                           proj.Y(points[i].y()));
  }
  out << "\"/>\n";
}

absl::Status CheckLayers(const Scene& scene) {
  const ElevationGrid& grid = *scene.grid;
  if (scene.obstacles != nullptr &&
      (scene.obstacles->n_cols() != grid.n_cols() ||
       scene.obstacles->n_rows() != grid.n_rows())) {
    return absl::InvalidArgumentError("obstacle layer shape differs from the grid");
  }
  if (scene.route != nullptr) {
    for (const RoutePoint& p : scene.route->points) {
      if (!grid.Contains(p.node)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "route node (%d,%d) lies outside the %dx%d grid", p.node.row,
            p.node.col, grid.n_rows(), grid.n_cols()));
      }
      const Eigen::Vector2d expected = grid.NodePosition(p.node);
      if ((expected - p.position.head<2>()).norm() >
          kExtentSlack * std::max(1.0, expected.norm())) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "route node (%d,%d) at (%.3f, %.3f) does not match the grid "
            "position (%.3f, %.3f)",
            p.node.row, p.node.col, p.position.x(), p.position.y(),
            expected.x(), expected.y()));
      }
    }
  }
  if (scene.log != nullptr) {
    for (const auto* trace : {&scene.log->actual, &scene.log->desired}) {
      for (const Eigen::Vector2d& p : *trace) {
        if (!InsideExtent(grid, p)) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "log point (%.3f, %.3f) lies outside the grid extent", p.x(),
              p.y()));
        }
      }
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<LogTraces> ParseLogTraces(std::istream& in,
                                         const std::string& source) {
  std::string line;
  int line_number = 1;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError(absl::StrFormat("%s: empty log", source));
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kLogHeader) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s:1: unexpected log header", source));
  }
  LogTraces traces;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<absl::string_view> cells = absl::StrSplit(line, ',');
    if (cells.size() != 15) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s:%d: expected 15 columns, found %d", source, line_number,
          cells.size()));
    }
    std::array<double, 4> v{};
    const std::array<int, 4> columns = {1, 2, 7, 8};
    for (int i = 0; i < 4; ++i) {
      if (!absl::SimpleAtod(cells[columns[i]], &v[i]) || !std::isfinite(v[i])) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "%s:%d: malformed number in column %d", source, line_number,
            columns[i] + 1));
      }
    }
    traces.actual.emplace_back(v[0], v[1]);
    traces.desired.emplace_back(v[2], v[3]);
  }
  return traces;
}

absl::StatusOr<LogTraces> LoadLogTraces(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrFormat("cannot open %s", path));
  return ParseLogTraces(in, path);
}

absl::Status RenderSvg(const Scene& scene, std::ostream& out) {
  if (scene.grid == nullptr) return absl::InvalidArgumentError("scene has no grid");
  if (absl::Status s = CheckLayers(scene); !s.ok()) return s;
  const ElevationGrid& grid = *scene.grid;
  const Projection proj(grid);
  const double cell_px = grid.cell_size() * proj.scale();
  const double total_w = proj.width() + 2 * kMargin + kLegendWidth;
  const double total_h = std::max(proj.height() + 2 * kMargin, 200.0);

  const auto [lo, hi] =
      std::minmax_element(grid.heights().begin(), grid.heights().end());
  const double z_min = *lo;
  const double z_span = *hi - *lo;
  auto band_of = [&](double z) {
    if (z_span <= 0.0) return 0;
    return std::clamp(static_cast<int>(std::floor((z - z_min) / z_span * kBands)),
                      0, kBands - 1);
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << absl::StrFormat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
      "viewBox=\"0 0 %.0f %.0f\">\n",
      total_w, total_h, total_w, total_h);
  out << absl::StrFormat(
      "<rect x=\"0\" y=\"0\" width=\"%.0f\" height=\"%.0f\" fill=\"#ffffff\"/>\n",
      total_w, total_h);

  // Elevation bands, one rect per run of equal band along a row.
  out << "<g id=\"elevation\" shape-rendering=\"crispEdges\">\n";
  for (int row = 0; row < grid.n_rows(); ++row) {
    int col = 0;
    while (col < grid.n_cols()) {
      const int band = band_of(grid.height({row, col}));
      int end = col + 1;
      while (end < grid.n_cols() && band_of(grid.height({row, end})) == band) ++end;
      const Eigen::Vector2d p = grid.NodePosition({row, col});
      const Rgb c = BandColor(band);
      out << absl::StrFormat(
          "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
          "fill=\"#%02x%02x%02x\"/>\n",
          proj.X(p.x()) - 0.5 * cell_px, proj.Y(p.y()) - 0.5 * cell_px,
          (end - col) * cell_px, cell_px, c.r, c.g, c.b);
      col = end;
    }
  }
  out << "</g>\n";

  if (scene.obstacles != nullptr) {
    out << "<g id=\"obstacles\" fill-opacity=\"0.6\" shape-rendering=\"crispEdges\">\n";
    for (int row = 0; row < grid.n_rows(); ++row) {
      for (int col = 0; col < grid.n_cols(); ++col) {
        const ObstacleReason reason = scene.obstacles->reason({row, col});
        if (reason == ObstacleReason::kClear) continue;
        const Eigen::Vector2d p = grid.NodePosition({row, col});
        out << absl::StrFormat(
            "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
            "fill=\"%s\"/>\n",
            proj.X(p.x()) - 0.5 * cell_px, proj.Y(p.y()) - 0.5 * cell_px,
            cell_px, cell_px, ObstacleColor(reason));
      }
    }
    out << "</g>\n";
  }

  if (scene.route != nullptr && !scene.route->points.empty()) {
    std::vector<Eigen::Vector2d> points;
    for (const RoutePoint& p : scene.route->points) {
      points.push_back(p.position.head<2>());
    }
    out << "<g id=\"route\">\n";
    Polyline(proj, points, "#e65100", 2.5, "", out);
    out << absl::StrFormat(
        "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"5\" fill=\"#e65100\"/>\n",
        proj.X(points.front().x()), proj.Y(points.front().y()));
    out << absl::StrFormat(
        "<rect x=\"%.2f\" y=\"%.2f\" width=\"10\" height=\"10\" fill=\"#e65100\"/>\n",
        proj.X(points.back().x()) - 5, proj.Y(points.back().y()) - 5);
    out << "</g>\n";
  }

  if (scene.log != nullptr) {
    out << "<g id=\"trajectory\">\n";
    Polyline(proj, scene.log->desired, "#1565c0", 2.0,
             " stroke-dasharray=\"6,4\"", out);
    Polyline(proj, scene.log->actual, "#000000", 1.2, "", out);
    out << "</g>\n";
  }

  // Legend.
  struct Entry {
    std::string label;
    std::string swatch;
  };
  std::vector<Entry> entries;
  const Rgb low = BandColor(0), high = BandColor(kBands - 1);
  entries.push_back({absl::StrFormat("elevation %.1f m", z_min),
                     absl::StrFormat("<rect width=\"24\" height=\"12\" fill=\"#%02x%02x%02x\"/>",
                                     low.r, low.g, low.b)});
  entries.push_back({absl::StrFormat("elevation %.1f m", z_min + z_span),
                     absl::StrFormat("<rect width=\"24\" height=\"12\" fill=\"#%02x%02x%02x\"/>",
                                     high.r, high.g, high.b)});
  if (scene.obstacles != nullptr) {
    for (ObstacleReason reason :
         {ObstacleReason::kWater, ObstacleReason::kFoliageOrBuilding,
          ObstacleReason::kSteep}) {
      entries.push_back(
          {ObstacleReasonName(reason),
           absl::StrFormat("<rect width=\"24\" height=\"12\" fill=\"%s\" "
                           "fill-opacity=\"0.6\"/>",
                           ObstacleColor(reason))});
    }
  }
  if (scene.route != nullptr) {
    entries.push_back({"global route", "<line x1=\"0\" y1=\"6\" x2=\"24\" y2=\"6\" "
                                       "stroke=\"#e65100\" stroke-width=\"2.5\"/>"});
  }
  if (scene.log != nullptr) {
    entries.push_back({"desired", "<line x1=\"0\" y1=\"6\" x2=\"24\" y2=\"6\" "
                                  "stroke=\"#1565c0\" stroke-width=\"2\" "
                                  "stroke-dasharray=\"6,4\"/>"});
    entries.push_back({"actual", "<line x1=\"0\" y1=\"6\" x2=\"24\" y2=\"6\" "
                                 "stroke=\"#000000\" stroke-width=\"1.2\"/>"});
  }
  const double legend_x = proj.width() + 2 * kMargin;
  out << absl::StrFormat(
      "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\" "
      "transform=\"translate(%.2f,%.2f)\">\n",
      legend_x, kMargin);
  for (size_t i = 0; i < entries.size(); ++i) {
    out << absl::StrFormat("<g transform=\"translate(0,%d)\">%s", 20 * i,
                           entries[i].swatch);
    out << absl::StrFormat("<text x=\"32\" y=\"11\">%s</text></g>\n",
                           entries[i].label);
  }
  out << "</g>\n</svg>\n";
  return out ? absl::OkStatus() : absl::InternalError("failed writing SVG");
}

}  // namespace offroad::cli
