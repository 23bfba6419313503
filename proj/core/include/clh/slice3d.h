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


#ifndef CLH_SLICE3D_H
#define CLH_SLICE3D_H

#include <array>
#include <vector>

#include "clh/guide.h"
#include "clh/puncture.h"

namespace clh {

/// Cubes (x, y, z) of the lattice containing the edge, in cyclic order around it.
std::vector<std::array<size_t, 3>> edge_cubes(const Geometry &g, int edge);

/// Whether the support fits inside the edges of a single cube.
bool within_one_cube(const Geometry &g, const std::vector<int> &support);

struct SliceOutcome {
    PunctureOutcome puncture;
    /// Registers left between two multi-cube terms, each resolved by the 2-local rounding.
    std::vector<int> blocked_registers;
    std::vector<PunctureOutcome> resolutions;
    Instance instance;
};

/// Punctures an edge register of a cubic-lattice instance. The guide's PunctureChoice move for
/// the edge supplies the block choices (default all zero); ResolveBlockage moves name blocks for
/// blocked registers (default 0). Every nontrivial incident term must meet the slice inside a
/// distinct cube around the edge.
SliceOutcome puncture_3d_slice(const Instance &inst, int edge_register, const Guide &guide,
                               const Tolerances &tol = Tolerances::defaults());

/// A 2D grid instance on vertices lifted onto one layer of a cubic lattice: vertex (i, j) becomes
/// the z-edge at lattice point (j, i, 0) and face (i, j) becomes cube (j, i, 0). The lattice has
/// at least cols x rows x 1 cubes, larger when nx or ny ask for it.
Instance lift_grid_to_slice(const Instance &grid_instance, size_t nx = 0, size_t ny = 0);

}  // namespace clh

#endif
