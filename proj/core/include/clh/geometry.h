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

#ifndef CLH_GEOMETRY_H
#define CLH_GEOMETRY_H

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace clh {

enum class Placement { Vertices, Edges };

/// A punctured register together with the terms that still touch it afterwards.
struct Hole {
    int register_id = 0;
    std::vector<int> surviving_terms;
};

/// Square grid with rows x cols faces, or a cubic lattice with nx x ny x nz cubes.
///
/// Grid vertex (i, j) has index i * (cols + 1) + j. Horizontal edge (i, j)-(i, j+1) has
/// index i * cols + j; vertical edge (i, j)-(i+1, j) comes after all horizontal ones at
/// offset i * (cols + 1) + j. With Placement::Vertices register ids equal vertex indices,
/// with Placement::Edges they equal edge indices. Face (i, j) lists its edges as
/// top, right, bottom, left.
struct Geometry {
    enum class Kind { Grid2D, Cubic3D };

    Kind kind = Kind::Grid2D;
    size_t rows = 0;
    size_t cols = 0;
    size_t layers = 0;
    Placement placement = Placement::Vertices;
    size_t num_vertices = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> faces;
    std::vector<Hole> holes;
    /// register id -> super-register id, filled in by the reduction pipeline.
    std::map<int, int> grouping;
};

Geometry make_grid(size_t rows, size_t cols, Placement placement = Placement::Vertices);
/// Cubic lattice; qudits live on edges. Edge indices are assigned in lexicographic order of
/// (direction, x, y, z) with direction x < y < z.
Geometry make_cubic(size_t nx, size_t ny, size_t nz);

int grid_vertex(const Geometry &g, size_t i, size_t j);
int grid_hedge(const Geometry &g, size_t i, size_t j);
int grid_vedge(const Geometry &g, size_t i, size_t j);
/// Corner vertices of face (i, j) in the order NW, NE, SE, SW.
std::vector<int> face_corners(const Geometry &g, size_t i, size_t j);
size_t face_index(const Geometry &g, size_t i, size_t j);

/// Edge index of the unit edge leaving lattice point (x, y, z) along axis (0, 1, 2).
int cubic_edge(const Geometry &g, size_t axis, size_t x, size_t y, size_t z);
/// The twelve edges of cube (x, y, z), sorted ascending.
std::vector<int> cube_edges(const Geometry &g, size_t x, size_t y, size_t z);

/// Human-readable incidence problems; empty when the complex is well formed.
std::vector<std::string> check_geometry(const Geometry &g);

std::string face_cell(size_t i, size_t j);
std::string vertex_cell(size_t i, size_t j);
std::string cube_cell(size_t x, size_t y, size_t z);
/// Parses "f:i,j" / "v:i,j" / "c:x,y,z". Returns the prefix and coordinates.
std::optional<std::pair<char, std::vector<size_t>>> parse_cell(const std::string &cell);

}  // namespace clh

#endif
