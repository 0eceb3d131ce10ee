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

#ifndef OFFROAD_ELEVATION_GRID_H_
#define OFFROAD_ELEVATION_GRID_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace offroad {

// A grid node addressed by (row, col). Row 0 is the northernmost row.
struct GridNode {
  int row = 0;
  int col = 0;

  friend bool operator==(const GridNode&, const GridNode&) = default;
};

// Geometry shared by every raster layer: dimensions, spacing and the planar
// position of the south-west node.
struct RasterHeader {
  int n_cols = 0;
  int n_rows = 0;
  double cell_size = 0.0;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();

  bool SameShape(const RasterHeader& other) const {
    return n_cols == other.n_cols && n_rows == other.n_rows;
  }
};

// Uniform raster of terrain heights in meters.
//
// Heights are stored row-major, northernmost row first, exactly as they
// appear in the grid CSV. Node (row, col) sits at
//   x = origin.x + col * cell_size
//   y = origin.y + (n_rows - 1 - row) * cell_size
// so the origin is the south-west node and y grows to the north.
class ElevationGrid {
 public:
  // Validates n_cols >= 2, n_rows >= 2, cell_size > 0 and finite heights.
  static absl::StatusOr<ElevationGrid> Create(const RasterHeader& header,
                                              std::vector<double> heights);

  const RasterHeader& header() const { return header_; }
  int n_cols() const { return header_.n_cols; }
  int n_rows() const { return header_.n_rows; }
  double cell_size() const { return header_.cell_size; }
  const Eigen::Vector2d& origin() const { return header_.origin; }
  int size() const { return header_.n_cols * header_.n_rows; }

  std::span<const double> heights() const { return heights_; }
  double height(const GridNode& node) const { return heights_[Index(node)]; }

  bool Contains(const GridNode& node) const {
    return node.row >= 0 && node.row < n_rows() && node.col >= 0 &&
           node.col < n_cols();
  }
  int Index(const GridNode& node) const {
    return node.row * n_cols() + node.col;
  }
  GridNode NodeAt(int index) const {
    return {index / n_cols(), index % n_cols()};
  }

  Eigen::Vector2d NodePosition(const GridNode& node) const;

  double x_min() const { return origin().x(); }
  double x_max() const { return origin().x() + (n_cols() - 1) * cell_size(); }
  double y_min() const { return origin().y(); }
  double y_max() const { return origin().y() + (n_rows() - 1) * cell_size(); }

 private:
  ElevationGrid(const RasterHeader& header, std::vector<double> heights)
      : header_(header), heights_(std::move(heights)) {}

  RasterHeader header_;
  std::vector<double> heights_;
};

// Boolean raster layer (water, foliage, ...) read from a {0,1} mask CSV.
struct BinaryMask {
  RasterHeader header;
  std::vector<std::uint8_t> cells;  // Row-major, 0 or 1.

  bool at(const GridNode& node) const {
    return cells[node.row * header.n_cols + node.col] != 0;
  }
};

// Reads the grid CSV format:
//   ncols,<int>
//   nrows,<int>
//   cellsize,<meters>
//   origin,<x0>,<y0>
// followed by nrows lines of ncols comma-separated heights. Errors name the
// offending line as "<source>:<line>".
absl::StatusOr<ElevationGrid> ParseElevationGrid(std::istream& in,
                                                 const std::string& source);
absl::StatusOr<ElevationGrid> LoadElevationGrid(const std::string& path);
absl::Status WriteElevationGrid(const ElevationGrid& grid, std::ostream& out);

absl::StatusOr<BinaryMask> ParseBinaryMask(std::istream& in,
                                           const std::string& source);
absl::StatusOr<BinaryMask> LoadBinaryMask(const std::string& path);
absl::Status WriteBinaryMask(const BinaryMask& mask, std::ostream& out);

}  // namespace offroad

#endif  // OFFROAD_ELEVATION_GRID_H_
