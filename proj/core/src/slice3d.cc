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


#include "clh/slice3d.h"

#include <algorithm>
#include <set>

namespace clh {

namespace {

struct EdgeCoord {
    size_t axis;
    std::array<size_t, 3> point;
};

EdgeCoord decode_edge(const Geometry &g, int edge) {
    if (g.kind != Geometry::Kind::Cubic3D) {
        fail(ErrorCode::InvalidArgument, "3D slice puncturing needs a cubic lattice");
    }
    size_t offset = 0;
    for (size_t axis = 0; axis < 3; axis++) {
        std::array<size_t, 3> e = {g.rows + 1, g.cols + 1, g.layers + 1};
        e[axis] -= 1;
        size_t count = e[0] * e[1] * e[2];
        if (edge >= 0 && (size_t)edge < offset + count) {
            size_t k = edge - offset;
            return {axis, {k / (e[1] * e[2]), (k / e[2]) % e[1], k % e[2]}};
        }
        offset += count;
    }
    fail(ErrorCode::InvalidArgument, "edge " + std::to_string(edge) + " is not in the lattice");
}

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

std::vector<std::array<size_t, 3>> edge_cubes(const Geometry &g, int edge) {
    EdgeCoord c = decode_edge(g, edge);
    size_t b = (c.axis + 1) % 3, d = (c.axis + 2) % 3;
    std::array<size_t, 3> n = {g.rows, g.cols, g.layers};
    const int offsets[4][2] = {{0, 0}, {-1, 0}, {-1, -1}, {0, -1}};
    std::vector<std::array<size_t, 3>> out;
    for (const auto &o : offsets) {
        long pb = (long)c.point[b] + o[0], pd = (long)c.point[d] + o[1];
        if (pb < 0 || pd < 0 || (size_t)pb >= n[b] || (size_t)pd >= n[d]) {
            continue;
        }
        std::array<size_t, 3> cube = c.point;
        cube[b] = pb;
        cube[d] = pd;
        out.push_back(cube);
    }
    return out;
}

bool within_one_cube(const Geometry &g, const std::vector<int> &support) {
    if (support.empty()) {
        return true;
    }
    std::vector<int> s = sorted(support);
    for (const auto &cube : edge_cubes(g, s[0])) {
        std::vector<int> edges = cube_edges(g, cube[0], cube[1], cube[2]);
        if (std::includes(edges.begin(), edges.end(), s.begin(), s.end())) {
            return true;
        }
    }
    return false;
}

SliceOutcome puncture_3d_slice(const Instance &inst, int edge_register, const Guide &guide, const Tolerances &tol) {
    if (!inst.geometry) {
        fail(ErrorCode::InvalidArgument, "3D slice puncturing needs cubic geometry");
    }
    const Geometry &g = *inst.geometry;
    std::vector<std::array<size_t, 3>> cubes = edge_cubes(g, edge_register);
    std::vector<std::vector<int>> cube_sets;
    std::set<int> slice_edges;
    for (const auto &c : cubes) {
        cube_sets.push_back(cube_edges(g, c[0], c[1], c[2]));
        slice_edges.insert(cube_sets.back().begin(), cube_sets.back().end());
    }
    // Each acting term must meet the slice inside a single cube, one term per cube. Terms merged
    // by earlier punctures may reach beyond the slice.
    std::set<size_t> used;
    for (int id : nontrivial_incident(inst, edge_register, tol)) {
        std::vector<int> local;
        for (int r : sorted(inst.term(id).support)) {
            if (slice_edges.count(r)) {
                local.push_back(r);
            }
        }
        size_t k = 0;
        while (k < cube_sets.size() && (used.count(k) || !std::includes(cube_sets[k].begin(), cube_sets[k].end(),
                                                                          local.begin(), local.end()))) {
            k++;
        }
        if (k == cube_sets.size()) {
            fail(ErrorCode::InvalidArgument,
                 "term " + std::to_string(id) + " does not meet the slice around edge " + std::to_string(edge_register) +
                     " inside a cube of its own");
        }
        used.insert(k);
    }

    std::vector<size_t> choices;
    for (const auto &m : guide.moves) {
        if (m.kind == MoveKind::PunctureChoice && m.register_id == edge_register) {
            choices = m.choices;
            break;
        }
    }
    if (choices.empty()) {
        choices = {0, 0};
    }
    SliceOutcome out;
    out.puncture = puncture_general(inst, edge_register, choices, tol);
    out.instance = out.puncture.instance;

    // A register between two terms that each span several cubes blocks the tunnel.
    std::vector<int> candidates;
    if (out.puncture.merged_support) {
        candidates = *out.puncture.merged_support;
    }
    for (const auto &m : guide.moves) {
        if (m.kind == MoveKind::ResolveBlockage) {
            candidates.push_back(m.register_id);
        }
    }
    std::set<int> seen;
    for (int reg : candidates) {
        if (reg == edge_register || !seen.insert(reg).second || !out.instance.has_register(reg)) {
            continue;
        }
        std::vector<int> acting = nontrivial_incident(out.instance, reg, tol);
        bool blocked = acting.size() == 2 && !within_one_cube(g, out.instance.term(acting[0]).support) &&
                       !within_one_cube(g, out.instance.term(acting[1]).support);
        if (!blocked) {
            continue;
        }
        size_t block = 0;
        for (const auto &m : guide.moves) {
            if (m.kind == MoveKind::ResolveBlockage && m.register_id == reg) {
                block = m.index;
                break;
            }
        }
        PunctureOutcome r = resolve_blockage(out.instance, reg, block, tol);
        out.instance = r.instance;
        out.blocked_registers.push_back(reg);
        out.resolutions.push_back(std::move(r));
    }
    return out;
}

Instance lift_grid_to_slice(const Instance &grid_instance, size_t nx, size_t ny) {
    if (!grid_instance.geometry || grid_instance.geometry->kind != Geometry::Kind::Grid2D ||
        grid_instance.geometry->placement != Placement::Vertices) {
        fail(ErrorCode::InvalidArgument, "lifting needs a grid instance with registers on vertices");
    }
    const Geometry &grid = *grid_instance.geometry;
    Instance out;
    out.geometry = make_cubic(std::max(nx, grid.cols), std::max(ny, grid.rows), 1);
    const Geometry &cube = *out.geometry;
    auto lift = [&](int vertex) {
        size_t i = vertex / (grid.cols + 1), j = vertex % (grid.cols + 1);
        return cubic_edge(cube, 2, j, i, 0);
    };
    for (const auto &r : grid_instance.registers) {
        out.registers.push_back({lift(r.id), r.dim});
    }
    std::sort(out.registers.begin(), out.registers.end(),
              [](const Register &a, const Register &b) { return a.id < b.id; });
    // Register order changes under the relabeling; express each term against the sorted order.
    for (const auto &t : grid_instance.terms) {
        LocalTerm l = t;
        for (int &r : l.support) {
            r = lift(r);
        }
        if (t.cell) {
            auto parsed = parse_cell(*t.cell);
            if (parsed && parsed->first == 'f') {
                l.cell = cube_cell(parsed->second[1], parsed->second[0], 0);
            }
        }
        out.terms.push_back(std::move(l));
    }
    out.provenance = grid_instance.provenance;
    out.provenance.push_back("lifted onto a cubic slice");
    return out;
}

}  // namespace clh
