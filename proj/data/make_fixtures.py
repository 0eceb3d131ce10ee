# Copyright 2026 The Offroad Planner Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the grid fixtures in this directory."""

import math
import pathlib

HERE = pathlib.Path(__file__).resolve().parent


def write_grid(name, n_cols, n_rows, cell, origin, height, fmt="{:.6f}"):
    lines = [f"ncols,{n_cols}", f"nrows,{n_rows}", f"cellsize,{cell:g}",
             f"origin,{origin[0]:g},{origin[1]:g}"]
    for row in range(n_rows):
        y = origin[1] + (n_rows - 1 - row) * cell
        lines.append(",".join(
            fmt.format(height(origin[0] + col * cell, y, row, col))
            for col in range(n_cols)))
    (HERE / name).write_text("\n".join(lines) + "\n")


# Near-flat terrain under the three-waypoint scenario: a 1% plane with 2 cm
# undulations, 1 m cells covering x 870..905, y 395..425.
write_grid("scenario_terrain.csv", 36, 31, 1.0, (870.0, 395.0),
           lambda x, y, r, c: 100.0 + 0.01 * (x - 870.0) + 0.005 * (y - 395.0)
           + 0.02 * math.sin(0.3 * x) * math.cos(0.2 * y))


# North-south ridge between two plateaus, 10 m cells. Both flanks rise
# 0.8 m per 10 m (slope 0.08): passable dry (limit 0.121), impassable wet
# (limit 0.0484).
def ridge(x, y, r, c):
    if c <= 6 or c >= 18:
        return 100.0
    return 100.0 + 0.8 * (c - 6 if c <= 12 else 18 - c)


write_grid("ridge_dem.csv", 25, 9, 10.0, (0.0, 0.0), ridge, fmt="{:.1f}")

# Small flat field with a pond and a wood, 10 m cells.
write_grid("flat_dem.csv", 12, 10, 10.0, (0.0, 0.0),
           lambda x, y, r, c: 50.0, fmt="{:.1f}")
write_grid("flat_water.csv", 12, 10, 10.0, (0.0, 0.0),
           lambda x, y, r, c: 1 if 3 <= r <= 6 and 4 <= c <= 6 else 0,
           fmt="{:d}")
write_grid("flat_foliage.csv", 12, 10, 10.0, (0.0, 0.0),
           lambda x, y, r, c: 1 if 1 <= r <= 2 and 8 <= c <= 9 else 0,
           fmt="{:d}")
