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


#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>

#include "clh/pipeline.h"

namespace clh {

namespace {

struct Tile {
    size_t i0, i1, j0, j1;
};

std::vector<size_t> tile_cuts(size_t n, size_t l) {
    // Tile boundaries 0, L, 2L, ..., n with the remainder absorbed by the last tile.
    std::vector<size_t> cuts{0};
    size_t count = std::max<size_t>(1, n / l);
    for (size_t k = 1; k < count; k++) {
        cuts.push_back(k * l);
    }
    cuts.push_back(n);
    return cuts;
}

std::vector<size_t> vertex_faces(const Geometry &g, size_t i, size_t j) {
    return {face_index(g, i - 1, j - 1), face_index(g, i - 1, j), face_index(g, i, j - 1), face_index(g, i, j)};
}

std::pair<size_t, size_t> face_coords(const Geometry &g, size_t f) {
    return {f / g.cols, f % g.cols};
}

std::pair<int, int> edge_key(int a, int b) {
    return {std::min(a, b), std::max(a, b)};
}

/// Edge shared by two edge-adjacent faces.
std::pair<int, int> shared_edge(const Geometry &g, size_t f1, size_t f2) {
    auto [i1, j1] = face_coords(g, f1);
    auto [i2, j2] = face_coords(g, f2);
    std::vector<int> c1 = face_corners(g, i1, j1);
    std::vector<int> c2 = face_corners(g, i2, j2);
    std::vector<int> common;
    for (int v : c1) {
        if (std::find(c2.begin(), c2.end(), v) != c2.end()) {
            common.push_back(v);
        }
    }
    return edge_key(common.at(0), common.at(1));
}

std::vector<size_t> face_neighbors(const Geometry &g, size_t f) {
    auto [i, j] = face_coords(g, f);
    std::vector<size_t> out;
    if (i > 0) {
        out.push_back(face_index(g, i - 1, j));
    }
    if (j + 1 < g.cols) {
        out.push_back(face_index(g, i, j + 1));
    }
    if (i + 1 < g.rows) {
        out.push_back(face_index(g, i + 1, j));
    }
    if (j > 0) {
        out.push_back(face_index(g, i, j - 1));
    }
    return out;
}

enum class Boundary { Top, Right, Bottom, Left };

std::optional<std::pair<int, int>> boundary_edge(const Geometry &g, size_t f, Boundary b) {
    auto [i, j] = face_coords(g, f);
    std::vector<int> c = face_corners(g, i, j);
    switch (b) {
        case Boundary::Top:
            if (i == 0) return edge_key(c[0], c[1]);
            break;
        case Boundary::Right:
            if (j + 1 == g.cols) return edge_key(c[1], c[2]);
            break;
        case Boundary::Bottom:
            if (i + 1 == g.rows) return edge_key(c[2], c[3]);
            break;
        case Boundary::Left:
            if (j == 0) return edge_key(c[3], c[0]);
            break;
    }
    return std::nullopt;
}

struct SideTarget {
    long to_triangle = -1;
    std::vector<Boundary> boundaries;
    /// Face range along the boundary the ray may exit through: [lo, hi) in the running coordinate.
    size_t lo = 0;
    size_t hi = 0;
};

void require_grid(const Geometry &g) {
    if (g.kind != Geometry::Kind::Grid2D || g.placement != Placement::Vertices) {
        fail(ErrorCode::InvalidArgument, "triangulation needs a vertex-placement 2D grid");
    }
    if (g.rows == 0 || g.cols == 0) {
        fail(ErrorCode::GridTooSmall, "empty grid");
    }
}

}  // namespace

Triangulation triangulate_grid(const Geometry &g, size_t l) {
    require_grid(g);
    if (l < 1) {
        fail(ErrorCode::InvalidArgument, "triangle size must be positive");
    }
    Triangulation t;
    t.triangle_size = l;
    if (g.rows < l && g.cols < l) {
        Triangle tri;
        tri.whole_grid = true;
        tri.corners = {std::pair{size_t(0), size_t(0)}, {size_t(0), g.cols}, {g.rows, size_t(0)}};
        tri.faces.resize(g.rows * g.cols);
        std::iota(tri.faces.begin(), tri.faces.end(), size_t(0));
        t.triangles.push_back(std::move(tri));
    } else {
        std::vector<size_t> rc = tile_cuts(g.rows, l);
        std::vector<size_t> cc = tile_cuts(g.cols, l);
        for (size_t r = 0; r + 1 < rc.size(); r++) {
            for (size_t c = 0; c + 1 < cc.size(); c++) {
                Tile tile{rc[r], rc[r + 1], cc[c], cc[c + 1]};
                size_t m = std::min(tile.i1 - tile.i0, tile.j1 - tile.j0);
                Triangle up, lo;
                up.upper = true;
                lo.upper = false;
                up.tile_row = lo.tile_row = r;
                up.tile_col = lo.tile_col = c;
                up.corners = {std::pair{tile.i0, tile.j0}, {tile.i0, tile.j1}, {tile.i1, tile.j0}};
                lo.corners = {std::pair{tile.i0, tile.j1}, {tile.i1, tile.j1}, {tile.i1, tile.j0}};
                for (size_t i = tile.i0; i < tile.i1; i++) {
                    for (size_t j = tile.j0; j < tile.j1; j++) {
                        size_t s = (i - tile.i0) + (j - tile.j0);
                        if (s <= m - 1) {
                            up.faces.push_back(face_index(g, i, j));
                        }
                        if (s >= m - 1) {
                            lo.faces.push_back(face_index(g, i, j));
                        }
                    }
                }
                std::sort(up.faces.begin(), up.faces.end());
                std::sort(lo.faces.begin(), lo.faces.end());
                t.triangles.push_back(std::move(up));
                t.triangles.push_back(std::move(lo));
            }
        }
    }
    for (size_t k = 0; k < t.triangles.size(); k++) {
        const auto &faces = t.triangles[k].faces;
        int center = -1;
        for (size_t i = 1; i < g.rows && center < 0; i++) {
            for (size_t j = 1; j < g.cols && center < 0; j++) {
                bool inside = true;
                for (size_t f : vertex_faces(g, i, j)) {
                    inside = inside && std::binary_search(faces.begin(), faces.end(), f);
                }
                if (inside) {
                    center = grid_vertex(g, i, j);
                }
            }
        }
        if (center < 0) {
            fail(ErrorCode::GridTooSmall, "triangle " + std::to_string(k) + " of size " + std::to_string(l) +
                                              " has no register with all faces inside it");
        }
        t.centers.push_back(center);
    }
    return t;
}

std::optional<size_t> smallest_triangle_size(const Geometry &g) {
    require_grid(g);
    for (size_t l = 2; l <= std::max(g.rows, g.cols) + 1; l++) {
        try {
            triangulate_grid(g, l);
            return l;
        } catch (const Error &e) {
            if (e.code() != ErrorCode::GridTooSmall) {
                throw;
            }
        }
    }
    return std::nullopt;
}

size_t max_group_support(const Instance &inst, const std::map<int, int> &grouping) {
    size_t worst = 0;
    for (const auto &t : inst.terms) {
        std::set<int> groups;
        for (int r : t.support) {
            auto it = grouping.find(r);
            groups.insert(it == grouping.end() ? r : it->second);
        }
        worst = std::max(worst, groups.size());
    }
    return worst;
}

namespace {

long triangle_at(const Triangulation &t, size_t tile_row, size_t tile_col, bool upper) {
    for (size_t k = 0; k < t.triangles.size(); k++) {
        const Triangle &tri = t.triangles[k];
        if (!tri.whole_grid && tri.tile_row == tile_row && tri.tile_col == tile_col && tri.upper == upper) {
            return (long)k;
        }
    }
    return -1;
}

SideTarget side_target(const Geometry &g, const Triangulation &t, size_t k, int side) {
    const Triangle &tri = t.triangles[k];
    SideTarget s;
    if (tri.whole_grid) {
        s.lo = 0;
        s.hi = std::max(g.rows, g.cols);
        if (side == 0) {
            s.boundaries = {Boundary::Top};
        } else if (side == 1) {
            s.boundaries = {Boundary::Right};
        } else {
            s.boundaries = {Boundary::Bottom, Boundary::Left};
        }
        return s;
    }
    if (side == 2) {
        s.to_triangle = triangle_at(t, tri.tile_row, tri.tile_col, !tri.upper);
        return s;
    }
    size_t i0 = tri.corners[0].first;
    size_t i1 = tri.upper ? tri.corners[2].first : tri.corners[1].first;
    size_t j0 = tri.upper ? tri.corners[0].second : tri.corners[2].second;
    size_t j1 = tri.upper ? tri.corners[1].second : tri.corners[0].second;
    if (tri.upper && side == 0) {
        if (tri.tile_row > 0) {
            s.to_triangle = triangle_at(t, tri.tile_row - 1, tri.tile_col, false);
        } else {
            s.boundaries = {Boundary::Top};
            s.lo = j0;
            s.hi = j1;
        }
    } else if (tri.upper && side == 1) {
        if (tri.tile_col > 0) {
            s.to_triangle = triangle_at(t, tri.tile_row, tri.tile_col - 1, false);
        } else {
            s.boundaries = {Boundary::Left};
            s.lo = i0;
            s.hi = i1;
        }
    } else if (!tri.upper && side == 0) {
        long below = triangle_at(t, tri.tile_row + 1, tri.tile_col, true);
        if (below >= 0) {
            s.to_triangle = below;
        } else {
            s.boundaries = {Boundary::Bottom};
            s.lo = j0;
            s.hi = j1;
        }
    } else {
        long right = triangle_at(t, tri.tile_row, tri.tile_col + 1, true);
        if (right >= 0) {
            s.to_triangle = right;
        } else {
            s.boundaries = {Boundary::Right};
            s.lo = i0;
            s.hi = i1;
        }
    }
    return s;
}

bool in_range(const Geometry &g, size_t f, Boundary b, size_t lo, size_t hi) {
    auto [i, j] = face_coords(g, f);
    size_t x = (b == Boundary::Top || b == Boundary::Bottom) ? j : i;
    return x >= lo && x < hi;
}

}  // namespace

void route_co_paths(Triangulation &t, const Instance &inst, const Tolerances &tol) {
    if (!inst.geometry) {
        fail(ErrorCode::RoutingFailed, "instance has no geometry to route on");
    }
    const Geometry &g = *inst.geometry;
    require_grid(g);
    size_t nf = g.rows * g.cols;
    std::vector<std::vector<int>> corners(nf);
    for (size_t f = 0; f < nf; f++) {
        auto [i, j] = face_coords(g, f);
        corners[f] = face_corners(g, i, j);
    }

    // A face is occupied by every term holding three or more of its corners.
    std::vector<std::vector<int>> occupants(nf);
    std::map<int, size_t> faces_of_term;
    for (const auto &term : inst.terms) {
        if (op_norm(term.matrix) <= tol.comm) {
            continue;
        }
        for (size_t f = 0; f < nf; f++) {
            size_t held = 0;
            for (int v : corners[f]) {
                held += std::find(term.support.begin(), term.support.end(), v) != term.support.end();
            }
            if (held >= 3) {
                occupants[f].push_back(term.id);
                faces_of_term[term.id]++;
            }
        }
    }
    std::vector<bool> live(nf, false), spanning(nf, false);
    for (size_t f = 0; f < nf; f++) {
        live[f] = !occupants[f].empty();
        for (int id : occupants[f]) {
            spanning[f] = spanning[f] || faces_of_term[id] > 1;
        }
    }

    std::set<int> center_set(t.centers.begin(), t.centers.end());
    auto face_has = [&](size_t f, int v) { return std::find(corners[f].begin(), corners[f].end(), v) != corners[f].end(); };
    std::vector<int> used(nf, 0);
    t.co_paths.clear();
    std::set<std::pair<int, int>> cuts;

    for (size_t k = 0; k < t.triangles.size(); k++) {
        for (int side = 0; side < 3; side++) {
            SideTarget target = side_target(g, t, k, side);
            if (target.to_triangle >= 0 && (size_t)target.to_triangle < k) {
                continue;
            }
            int src = t.centers[k];
            int dst = target.to_triangle >= 0 ? t.centers[target.to_triangle] : -1;
            auto blocked = [&](size_t f) {
                if (spanning[f] || (live[f] && used[f] > 0)) {
                    return true;
                }
                for (int c : center_set) {
                    if (c != src && c != dst && face_has(f, c) && live[f]) {
                        return true;
                    }
                }
                return false;
            };
            auto is_goal = [&](size_t f) -> std::optional<std::pair<int, int>> {
                if (dst >= 0) {
                    return face_has(f, dst) ? std::optional{std::pair<int, int>{-1, -1}} : std::nullopt;
                }
                for (Boundary b : target.boundaries) {
                    auto e = boundary_edge(g, f, b);
                    if (e && in_range(g, f, b, target.lo, target.hi)) {
                        return e;
                    }
                }
                return std::nullopt;
            };

            std::vector<long> parent(nf, -2);
            std::deque<size_t> queue;
            for (size_t f = 0; f < nf; f++) {
                if (face_has(f, src) && !blocked(f)) {
                    parent[f] = -1;
                    queue.push_back(f);
                }
            }
            long goal = -1;
            std::pair<int, int> exit_edge{-1, -1};
            while (!queue.empty() && goal < 0) {
                size_t f = queue.front();
                queue.pop_front();
                if (auto e = is_goal(f)) {
                    goal = (long)f;
                    exit_edge = *e;
                    break;
                }
                for (size_t n : face_neighbors(g, f)) {
                    if (parent[n] == -2 && !blocked(n) && !cuts.count(shared_edge(g, f, n))) {
                        parent[n] = (long)f;
                        queue.push_back(n);
                    }
                }
            }
            if (goal < 0) {
                fail(ErrorCode::RoutingFailed, "no co-path from center " + std::to_string(src) + " through side " +
                                                   std::to_string(side) + " of triangle " + std::to_string(k));
            }
            CoPath path;
            path.from_triangle = k;
            path.to_triangle = target.to_triangle;
            path.side = side;
            for (long f = goal; f >= 0; f = parent[f]) {
                path.faces.push_back((size_t)f);
            }
            std::reverse(path.faces.begin(), path.faces.end());
            for (size_t s = 0; s + 1 < path.faces.size(); s++) {
                path.cut_edges.push_back(shared_edge(g, path.faces[s], path.faces[s + 1]));
            }
            if (exit_edge.first >= 0) {
                path.cut_edges.push_back(exit_edge);
            }
            for (size_t f : path.faces) {
                used[f]++;
            }
            for (auto e : path.cut_edges) {
                cuts.insert(e);
            }
            t.co_paths.push_back(std::move(path));
        }
    }

    // Super-registers: connected components of the surviving grid registers once centers are
    // removed and cut edges deleted.
    std::map<int, int> parent;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto &r : inst.registers) {
        parent[r.id] = r.id;
    }
    auto grid_register = [&](int id) { return id >= 0 && (size_t)id < g.num_vertices && inst.has_register(id); };
    for (auto [a, b] : g.edges) {
        if (!grid_register(a) || !grid_register(b) || center_set.count(a) || center_set.count(b) ||
            cuts.count(edge_key(a, b))) {
            continue;
        }
        int ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[std::max(ra, rb)] = std::min(ra, rb);
        }
    }
    t.grouping.clear();
    for (const auto &r : inst.registers) {
        if (!center_set.count(r.id)) {
            t.grouping[r.id] = find(r.id);
        }
    }
    // A center still present joins the neighboring group that keeps its terms narrowest.
    for (int c : t.centers) {
        if (!inst.has_register(c)) {
            continue;
        }
        size_t i = (size_t)c / (g.cols + 1), j = (size_t)c % (g.cols + 1);
        std::set<int> options;
        for (auto [di, dj] : std::vector<std::pair<int, int>>{{-1, 0}, {0, 1}, {1, 0}, {0, -1}}) {
            int v = grid_vertex(g, i + di, j + dj);
            if (t.grouping.count(v)) {
                options.insert(t.grouping[v]);
            }
        }
        if (options.empty()) {
            t.grouping[c] = c;
            continue;
        }
        std::vector<int> inc = inst.incident_terms(c);
        int best = -1;
        size_t best_width = SIZE_MAX;
        for (int o : options) {
            t.grouping[c] = o;
            size_t width = 0;
            for (int id : inc) {
                std::set<int> gs;
                for (int r : inst.term(id).support) {
                    gs.insert(t.grouping.count(r) ? t.grouping[r] : r);
                }
                width = std::max(width, gs.size());
            }
            if (width < best_width) {
                best_width = width;
                best = o;
            }
        }
        t.grouping[c] = best;
    }
    // Name every group after its smallest member, centers included.
    std::map<int, int> smallest;
    for (auto [reg, group] : t.grouping) {
        smallest.emplace(group, reg);
    }
    for (auto &entry : t.grouping) {
        entry.second = smallest[entry.second];
    }
    size_t width = max_group_support(inst, t.grouping);
    if (width > 2) {
        for (const auto &term : inst.terms) {
            std::set<int> gs;
            for (int r : term.support) {
                gs.insert(t.grouping[r]);
            }
            if (gs.size() > 2) {
                fail(ErrorCode::RoutingFailed, "term " + std::to_string(term.id) + " meets " +
                                                   std::to_string(gs.size()) + " super-registers after routing");
            }
        }
    }
}

Instance merge_groups(const Instance &inst, const std::map<int, int> &grouping) {
    constexpr size_t kRegisterLimit = size_t(1) << 10;
    constexpr size_t kTermLimit = size_t(1) << 12;
    auto group_of = [&](int r) {
        auto it = grouping.find(r);
        return it == grouping.end() ? r : it->second;
    };
    std::map<int, std::vector<int>> members;
    for (const auto &r : inst.registers) {
        members[group_of(r.id)].push_back(r.id);
    }
    Instance out;
    for (auto &[gid, regs] : members) {
        std::sort(regs.begin(), regs.end());
        size_t d = 1;
        for (int r : regs) {
            d *= inst.register_dim(r);
            if (d > kRegisterLimit) {
                fail(ErrorCode::TooLarge, "super-register " + std::to_string(gid) + " exceeds dimension 2^10");
            }
        }
        out.registers.push_back({gid, d});
    }
    for (const auto &t : inst.terms) {
        std::set<int> gs;
        for (int r : t.support) {
            gs.insert(group_of(r));
        }
        std::vector<int> full;
        std::vector<size_t> dims;
        LocalTerm nt;
        nt.id = t.id;
        nt.cell = t.cell;
        size_t total = 1;
        for (int gid : gs) {
            nt.support.push_back(gid);
            for (int r : members[gid]) {
                full.push_back(r);
                dims.push_back(inst.register_dim(r));
                total *= inst.register_dim(r);
            }
        }
        if (total > kTermLimit) {
            fail(ErrorCode::TooLarge, "term " + std::to_string(t.id) + " on merged registers exceeds dimension 2^12");
        }
        std::vector<size_t> pos;
        for (int r : t.support) {
            pos.push_back(std::find(full.begin(), full.end(), r) - full.begin());
        }
        nt.matrix = embed_local(t.matrix, pos, dims);
        if (t.rank) {
            nt.rank = *t.rank * (total / (size_t)t.matrix.rows());
        }
        out.terms.push_back(std::move(nt));
    }
    out.provenance = inst.provenance;
    out.provenance.push_back("merge_groups into " + std::to_string(members.size()) + " super-registers");
    return out;
}

}  // namespace clh
