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


#ifndef CLH_PIPELINE_H
#define CLH_PIPELINE_H

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clh/guide.h"
#include "clh/model.h"
#include "clh/puncture.h"

namespace clh {

/// One triangle of the superimposed mesh, as a closed set of grid faces.
///
/// The grid is tiled by L x L squares of faces (the last row and column of tiles absorb any
/// remainder). In a tile with faces (a, b), 0 <= a < h, 0 <= b < w, the upper triangle holds the
/// faces with a + b <= m - 1 and the lower triangle those with a + b >= m - 1, m = min(h, w).
/// The two share their anti-diagonal faces. A grid with fewer than L rows and columns is a
/// single triangle.
struct Triangle {
    /// Corner vertices (i, j): upper is NW, NE, SW of the tile; lower is NE, SE, SW.
    std::array<std::pair<size_t, size_t>, 3> corners{};
    std::vector<size_t> faces;
    bool whole_grid = false;
    bool upper = true;
    size_t tile_row = 0;
    size_t tile_col = 0;
};

/// A dual path: consecutive faces share an edge, and each such edge is cut. Rays end at a
/// boundary face and cut the boundary edge they leave through.
struct CoPath {
    size_t from_triangle = 0;
    /// Triangle whose center the path reaches, or -1 for a ray to the grid boundary.
    long to_triangle = -1;
    /// Which side of the source triangle the path leaves through: 0 top/bottom, 1 left/right,
    /// 2 hypotenuse (whole-grid triangle: 0 top, 1 right, 2 bottom or left).
    int side = 0;
    std::vector<size_t> faces;
    std::vector<std::pair<int, int>> cut_edges;
};

struct Triangulation {
    size_t triangle_size = 0;
    std::vector<Triangle> triangles;
    /// Center register of each triangle.
    std::vector<int> centers;
    std::vector<CoPath> co_paths;
    /// Register id -> super-register id. Covers every register of the instance it was routed on.
    std::map<int, int> grouping;
};

/// Triangles and centers only. Throws GridTooSmall when a triangle has no interior vertex all of
/// whose faces lie in it, and InvalidArgument for non-grid or edge-placement geometry.
Triangulation triangulate_grid(const Geometry &geometry, size_t triangle_size);

/// Smallest L >= 2 for which every triangle has a center, trying up to max(rows, cols) + 1.
std::optional<size_t> smallest_triangle_size(const Geometry &geometry);

/// Routes the co-paths on the (punctured) instance and fills `grouping`. Faces whose
/// surviving term would be split three ways are avoided; RoutingFailed if some path has no
/// route or some term still meets three or more super-registers.
void route_co_paths(Triangulation &t, const Instance &inst, const Tolerances &tol = Tolerances::defaults());

/// Largest number of distinct super-registers a term of the instance meets.
size_t max_group_support(const Instance &inst, const std::map<int, int> &grouping);

/// Merges each group into one register (tensor product of its members in ascending id order)
/// and embeds every term. Registers missing from the grouping stay on their own. Throws
/// TooLarge when a merged register exceeds 2^10 or a merged term exceeds 2^12.
Instance merge_groups(const Instance &inst, const std::map<int, int> &grouping);

struct BlockChoice {
    int register_id = 0;
    size_t block = 0;
};

struct TwoLocalSolution {
    bool lambda0_is_zero = false;
    /// Block chosen at each rounded register, in sweep order (the accepting path when zero).
    std::vector<BlockChoice> certificate;
    /// True when the node limit cut the exhaustive search short.
    bool heuristic = false;
    size_t nodes = 0;
};

constexpr size_t kTwoLocalNodeLimit = 1000000;

/// Sweeps the 2-local rounding over every shared register, exhaustively over blocks up to
/// kTwoLocalNodeLimit rounding steps and largest-block-first beyond. Terms with identical
/// support are first replaced by the projector onto the span of their ranges. Throws
/// NotTwoLocal when some term has support larger than 2 and NonCommuting for a non-commuting pair.
TwoLocalSolution solve_two_local(const Instance &inst, const Tolerances &tol = Tolerances::defaults());

/// Applies one guide move after re-checking its hypotheses. Throws the move's own error codes.
Instance apply_move(const Instance &inst, const Move &move, const Tolerances &tol = Tolerances::defaults());

struct ReductionResult {
    Instance punctured;
    Triangulation triangulation;
    /// One register per super-register; every term has support at most 2.
    Instance reduced;
};

/// Triangulates, applies every guide move (the puncture choices at the centers, in order), routes
/// the co-paths through the holes and merges the groups.
ReductionResult guided_reduce_2d(const Instance &inst, const Guide &guide,
                                 const Tolerances &tol = Tolerances::defaults());

struct VerifierVerdict {
    bool accept = false;
    /// Index of the failing move; the number of moves when the failure is in routing or the
    /// terminal solve; unset on accept and on input-level rejection.
    std::optional<size_t> failure_step;
    std::optional<std::string> reason;
    std::optional<Instance> reduced_instance;
    std::optional<TwoLocalSolution> certificate;
};

/// Never throws for bad input: every failure becomes a rejecting verdict.
VerifierVerdict verify(const Instance &inst, const Guide &guide, const Tolerances &tol = Tolerances::defaults());

/// {"accept", "failure_step", "reason", "certificate": {"lambda0_is_zero", "heuristic",
/// "nodes", "blocks": [[register, block], ...]}}
std::string verdict_json(const VerifierVerdict &v);

struct ProverOptions {
    /// Triangle size for grid instances; the smallest valid one when unset.
    std::optional<size_t> triangle_size;
    /// Worker threads over the first center's choices. Results do not depend on it.
    unsigned jobs = 1;
};

struct ProverResult {
    std::optional<Guide> guide;
    size_t nodes = 0;
};

/// Depth-first search over the block choices at each center in lexicographic order; every
/// puncture attempt and every terminal solve costs one unit of budget. Returns the first
/// accepting guide, or none after a complete enumeration. Throws BudgetExhausted when the
/// budget runs out first.
ProverResult prover_search(const Instance &inst, size_t budget, const ProverOptions &options = {},
                           const Tolerances &tol = Tolerances::defaults());

/// g <= d^k / (r e).
bool qlll_predicate(unsigned long g, unsigned long d, unsigned long k, unsigned long r);

}  // namespace clh

#endif
