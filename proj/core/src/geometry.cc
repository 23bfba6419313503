// Copyright 2026 The clh Authors
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

#include "clh/geometry.h"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "clh/error.h"

namespace clh {

Geometry make_grid(size_t rows, size_t cols, Placement placement) {
    Geometry g;
    g.kind = Geometry::Kind::Grid2D;
    g.rows = rows;
    g.cols = cols;
    g.placement = placement;
    g.num_vertices = (rows + 1) * (cols + 1);
    for (size_t i = 0; i <= rows; i++) {
        for (size_t j = 0; j < cols; j++) {
            g.edges.emplace_back(grid_vertex(g, i, j), grid_vertex(g, i, j + 1));
        }
    }
    for (size_t i = 0; i < rows; i++) {
        for (size_t j = 0; j <= cols; j++) {
            g.edges.emplace_back(grid_vertex(g, i, j), grid_vertex(g, i + 1, j));
        }
    }
    for (size_t i = 0; i < rows; i++) {
        for (size_t j = 0; j < cols; j++) {
            g.faces.push_back({grid_hedge(g, i, j), grid_vedge(g, i, j + 1), grid_hedge(g, i + 1, j), grid_vedge(g, i, j)});
        }
    }
    return g;
}

int grid_vertex(const Geometry &g, size_t i, size_t j) {
    return (int)(i * (g.cols + 1) + j);
}

int grid_hedge(const Geometry &g, size_t i, size_t j) {
    return (int)(i * g.cols + j);
}

int grid_vedge(const Geometry &g, size_t i, size_t j) {
    return (int)((g.rows + 1) * g.cols + i * (g.cols + 1) + j);
}

std::vector<int> face_corners(const Geometry &g, size_t i, size_t j) {
    return {grid_vertex(g, i, j), grid_vertex(g, i, j + 1), grid_vertex(g, i + 1, j + 1), grid_vertex(g, i + 1, j)};
}

size_t face_index(const Geometry &g, size_t i, size_t j) {
    return i * g.cols + j;
}

namespace {

size_t cubic_vertex(const Geometry &g, size_t x, size_t y, size_t z) {
    return (x * (g.cols + 1) + y) * (g.layers + 1) + z;
}

// Number of edges along an axis and the per-axis extents of their base points.
std::array<size_t, 3> axis_extent(const Geometry &g, size_t axis) {
    std::array<size_t, 3> e{g.rows + 1, g.cols + 1, g.layers + 1};
    e[axis] -= 1;
    return e;
}

}  // namespace

Geometry make_cubic(size_t nx, size_t ny, size_t nz) {
    Geometry g;
    g.kind = Geometry::Kind::Cubic3D;
    g.rows = nx;
    g.cols = ny;
    g.layers = nz;
    g.placement = Placement::Edges;
    g.num_vertices = (nx + 1) * (ny + 1) * (nz + 1);
    for (size_t axis = 0; axis < 3; axis++) {
        auto e = axis_extent(g, axis);
        for (size_t x = 0; x < e[0]; x++) {
            for (size_t y = 0; y < e[1]; y++) {
                for (size_t z = 0; z < e[2]; z++) {
                    size_t x2 = x + (axis == 0), y2 = y + (axis == 1), z2 = z + (axis == 2);
                    g.edges.emplace_back((int)cubic_vertex(g, x, y, z), (int)cubic_vertex(g, x2, y2, z2));
                }
            }
        }
    }
    return g;
}

int cubic_edge(const Geometry &g, size_t axis, size_t x, size_t y, size_t z) {
    size_t offset = 0;
    for (size_t a = 0; a < axis; a++) {
        auto e = axis_extent(g, a);
        offset += e[0] * e[1] * e[2];
    }
    auto e = axis_extent(g, axis);
    if (x >= e[0] || y >= e[1] || z >= e[2]) {
        fail(ErrorCode::InvalidArgument, "cubic edge out of range");
    }
    return (int)(offset + (x * e[1] + y) * e[2] + z);
}

std::vector<int> cube_edges(const Geometry &g, size_t x, size_t y, size_t z) {
    std::vector<int> r;
    for (size_t a = 0; a < 2; a++) {
        for (size_t b = 0; b < 2; b++) {
            r.push_back(cubic_edge(g, 0, x, y + a, z + b));
            r.push_back(cubic_edge(g, 1, x + a, y, z + b));
            r.push_back(cubic_edge(g, 2, x + a, y + b, z));
        }
    }
    std::sort(r.begin(), r.end());
    return r;
}

std::vector<std::string> check_geometry(const Geometry &g) {
    std::vector<std::string> problems;
    for (size_t e = 0; e < g.edges.size(); e++) {
        auto [a, b] = g.edges[e];
        if (a < 0 || b < 0 || (size_t)a >= g.num_vertices || (size_t)b >= g.num_vertices || a == b) {
            problems.push_back("edge " + std::to_string(e) + " has an invalid endpoint");
        }
    }
    std::vector<std::set<int>> face_sets;
    for (size_t f = 0; f < g.faces.size(); f++) {
        const auto &cyc = g.faces[f];
        bool ok = cyc.size() >= 3;
        for (int e : cyc) {
            if (e < 0 || (size_t)e >= g.edges.size()) {
                ok = false;
            }
        }
        if (ok) {
            for (size_t k = 0; k < cyc.size(); k++) {
                auto [a, b] = g.edges[cyc[k]];
                auto [c, d] = g.edges[cyc[(k + 1) % cyc.size()]];
                if (a != c && a != d && b != c && b != d) {
                    ok = false;
                }
            }
        }
        if (!ok) {
            problems.push_back("face " + std::to_string(f) + " is not a closed cycle of edges");
        }
        face_sets.emplace_back(cyc.begin(), cyc.end());
    }
    for (size_t f = 0; f < face_sets.size(); f++) {
        for (size_t h = f + 1; h < face_sets.size(); h++) {
            size_t common = 0;
            for (int e : face_sets[f]) {
                common += face_sets[h].count(e);
            }
            if (common > 1) {
                problems.push_back("faces " + std::to_string(f) + " and " + std::to_string(h) + " share " +
                                   std::to_string(common) + " edges");
            }
        }
    }
    return problems;
}

std::string face_cell(size_t i, size_t j) {
    return "f:" + std::to_string(i) + "," + std::to_string(j);
}

std::string vertex_cell(size_t i, size_t j) {
    return "v:" + std::to_string(i) + "," + std::to_string(j);
}

std::string cube_cell(size_t x, size_t y, size_t z) {
    return "c:" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z);
}

std::optional<std::pair<char, std::vector<size_t>>> parse_cell(const std::string &cell) {
    if (cell.size() < 3 || cell[1] != ':') {
        return std::nullopt;
    }
    std::vector<size_t> coords;
    std::stringstream ss(cell.substr(2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
            return std::nullopt;
        }
        coords.push_back(std::stoul(item));
    }
    return std::make_pair(cell[0], coords);
}

}  // namespace clh
