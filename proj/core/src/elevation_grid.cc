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

#include "offroad/elevation_grid.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace offroad {
namespace {

absl::Status LineError(absl::string_view source, int line,
                       absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat(source, ":", line, ": ", what));
}

// Reads lines and keeps track of the 1-based line number.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool Next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  int line_number() const { return line_number_; }

 private:
  std::istream& in_;
  int line_number_ = 0;
};

std::vector<absl::string_view> SplitFields(absl::string_view line) {
  std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
  for (auto& field : fields) field = absl::StripAsciiWhitespace(field);
  return fields;
}

absl::StatusOr<std::vector<absl::string_view>> ExpectKey(
    LineReader& reader, std::string& line, absl::string_view key,
    size_t n_values, absl::string_view source) {
  if (!reader.Next(line)) {
    return LineError(source, reader.line_number() + 1,
                     absl::StrCat("missing header line '", key, "'"));
  }
  std::vector<absl::string_view> fields = SplitFields(line);
  if (fields.empty() || fields[0] != key) {
    return LineError(source, reader.line_number(),
                     absl::StrCat("expected header key '", key, "'"));
  }
  if (fields.size() != n_values + 1) {
    return LineError(source, reader.line_number(),
                     absl::StrCat("header '", key, "' expects ", n_values,
                                  " value(s)"));
  }
  fields.erase(fields.begin());
  return fields;
}

absl::StatusOr<RasterHeader> ParseHeader(LineReader& reader,
                                         absl::string_view source) {
  RasterHeader header;
  std::string line;

  auto ncols = ExpectKey(reader, line, "ncols", 1, source);
  if (!ncols.ok()) return ncols.status();
  if (!absl::SimpleAtoi((*ncols)[0], &header.n_cols) || header.n_cols < 2) {
    return LineError(source, reader.line_number(),
                     "ncols must be an integer >= 2");
  }
  auto nrows = ExpectKey(reader, line, "nrows", 1, source);
  if (!nrows.ok()) return nrows.status();
  if (!absl::SimpleAtoi((*nrows)[0], &header.n_rows) || header.n_rows < 2) {
    return LineError(source, reader.line_number(),
                     "nrows must be an integer >= 2");
  }
  auto cellsize = ExpectKey(reader, line, "cellsize", 1, source);
  if (!cellsize.ok()) return cellsize.status();
  if (!absl::SimpleAtod((*cellsize)[0], &header.cell_size) ||
      !std::isfinite(header.cell_size) || header.cell_size <= 0.0) {
    return LineError(source, reader.line_number(),
                     "cellsize must be a positive number");
  }
  auto origin = ExpectKey(reader, line, "origin", 2, source);
  if (!origin.ok()) return origin.status();
  double x0 = 0.0;
  double y0 = 0.0;
  if (!absl::SimpleAtod((*origin)[0], &x0) ||
      !absl::SimpleAtod((*origin)[1], &y0) || !std::isfinite(x0) ||
      !std::isfinite(y0)) {
    return LineError(source, reader.line_number(),
                     "origin must be two finite numbers");
  }
  header.origin = {x0, y0};
  return header;
}

// Parses the data block, calling `accept` on every cell. `accept` returns an
// error message for rejected values, or an empty string.
absl::Status ParseCells(
    LineReader& reader, const RasterHeader& header, absl::string_view source,
    const std::function<std::string(absl::string_view, double&, int)>& accept) {
  std::string line;
  for (int row = 0; row < header.n_rows; ++row) {
    if (!reader.Next(line)) {
      return LineError(source, reader.line_number() + 1,
                       absl::StrCat("expected ", header.n_rows,
                                    " data rows, found ", row));
    }
    std::vector<absl::string_view> fields = SplitFields(line);
    if (static_cast<int>(fields.size()) != header.n_cols) {
      return LineError(source, reader.line_number(),
                       absl::StrCat("row has ", fields.size(),
                                    " values, expected ", header.n_cols));
    }
    for (int col = 0; col < header.n_cols; ++col) {
      double value = 0.0;
      std::string error =
          accept(fields[col], value, row * header.n_cols + col);
      if (!error.empty()) {
        return LineError(source, reader.line_number(),
                         absl::StrCat(error, " at cell (row ", row, ", col ",
                                      col, ")"));
      }
    }
  }
  while (reader.Next(line)) {
    if (!absl::StripAsciiWhitespace(line).empty()) {
      return LineError(source, reader.line_number(),
                       "unexpected data after the last grid row");
    }
  }
  return absl::OkStatus();
}

void WriteHeader(const RasterHeader& header, std::ostream& out) {
  out << "ncols," << header.n_cols << "\n";
  out << "nrows," << header.n_rows << "\n";
  out << absl::StrFormat("cellsize,%.17g\n", header.cell_size);
  out << absl::StrFormat("origin,%.17g,%.17g\n", header.origin.x(),
                         header.origin.y());
}

}  // namespace

absl::StatusOr<ElevationGrid> ElevationGrid::Create(
    const RasterHeader& header, std::vector<double> heights) {
  if (header.n_cols < 2 || header.n_rows < 2) {
    return absl::InvalidArgumentError("grid needs at least 2x2 nodes");
  }
  if (!(header.cell_size > 0.0) || !std::isfinite(header.cell_size)) {
    return absl::InvalidArgumentError("cell size must be positive");
  }
  if (heights.size() !=
      static_cast<size_t>(header.n_cols) * static_cast<size_t>(header.n_rows)) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", header.n_cols * header.n_rows,
                     " heights, got ", heights.size()));
  }
  for (size_t i = 0; i < heights.size(); ++i) {
    if (!std::isfinite(heights[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite height at cell index ", i));
    }
  }
  return ElevationGrid(header, std::move(heights));
}

Eigen::Vector2d ElevationGrid::NodePosition(const GridNode& node) const {
  return {origin().x() + node.col * cell_size(),
          origin().y() + (n_rows() - 1 - node.row) * cell_size()};
}

absl::StatusOr<ElevationGrid> ParseElevationGrid(std::istream& in,
                                                 const std::string& source) {
  LineReader reader(in);
  absl::StatusOr<RasterHeader> header = ParseHeader(reader, source);
  if (!header.ok()) return header.status();

  std::vector<double> heights(static_cast<size_t>(header->n_cols) *
                              header->n_rows);
  absl::Status status = ParseCells(
      reader, *header, source,
      [&heights](absl::string_view field, double& value,
                 int index) -> std::string {
        if (field.empty()) return "missing height";
        if (!absl::SimpleAtod(field, &value)) {
          return absl::StrCat("malformed height '", field, "'");
        }
        if (!std::isfinite(value)) {
          return absl::StrCat("non-finite height (cell index ", index, ")");
        }
        heights[index] = value;
        return "";
      });
  if (!status.ok()) return status;
  return ElevationGrid::Create(*header, std::move(heights));
}

absl::StatusOr<ElevationGrid> LoadElevationGrid(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ParseElevationGrid(in, path);
}

absl::Status WriteElevationGrid(const ElevationGrid& grid, std::ostream& out) {
  WriteHeader(grid.header(), out);
  for (int row = 0; row < grid.n_rows(); ++row) {
    for (int col = 0; col < grid.n_cols(); ++col) {
      if (col > 0) out << ',';
      out << absl::StrFormat("%.17g", grid.height({row, col}));
    }
    out << '\n';
  }
  return out ? absl::OkStatus()
             : absl::InternalError("failed writing elevation grid");
}

absl::StatusOr<BinaryMask> ParseBinaryMask(std::istream& in,
                                           const std::string& source) {
  LineReader reader(in);
  absl::StatusOr<RasterHeader> header = ParseHeader(reader, source);
  if (!header.ok()) return header.status();

  BinaryMask mask;
  mask.header = *header;
  mask.cells.assign(static_cast<size_t>(header->n_cols) * header->n_rows, 0);
  absl::Status status = ParseCells(
      reader, *header, source,
      [&mask](absl::string_view field, double&, int index) -> std::string {
        if (field == "0") return "";
        if (field == "1") {
          mask.cells[index] = 1;
          return "";
        }
        return absl::StrCat("mask value '", field, "' is not 0 or 1");
      });
  if (!status.ok()) return status;
  return mask;
}

absl::StatusOr<BinaryMask> LoadBinaryMask(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ParseBinaryMask(in, path);
}

absl::Status WriteBinaryMask(const BinaryMask& mask, std::ostream& out) {
  WriteHeader(mask.header, out);
  for (int row = 0; row < mask.header.n_rows; ++row) {
    for (int col = 0; col < mask.header.n_cols; ++col) {
      if (col > 0) out << ',';
      out << (mask.at({row, col}) ? '1' : '0');
    }
    out << '\n';
  }
  return out ? absl::OkStatus()
             : absl::InternalError("failed writing mask");
}

}  // namespace offroad
