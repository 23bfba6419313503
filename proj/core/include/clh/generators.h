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

#ifndef CLH_GENERATORS_H
#define CLH_GENERATORS_H

#include <cstdint>

#include "clh/model.h"

namespace clh {

// Seeded corpus generators. Every face of a grid geometry carries one rank-1 product
// projector on its corner registers (vertex placement, order NW, NE, SE, SW) or on its
// four edges (edge placement, order top, right, bottom, left).

/// Face terms |x><x| for seeded basis strings x.
Instance gen_classical(const Geometry &geom, uint64_t seed, size_t dim = 2);

/// Every face uses the same seeded state psi_v on register v, so all overlaps are singular.
/// Seed 0 uses |0> everywhere.
Instance gen_singular(const Geometry &geom, uint64_t seed, size_t dim = 2);

/// Per-register seeded basis {e_0, e_1, ...}. Terms meeting on a register only at that
/// register use orthogonal basis vectors there, so those pairs commute in a reducing way.
/// Throws InsufficientDimension when dim < 2.
Instance gen_reducing(const Geometry &geom, uint64_t seed, size_t dim = 2);

/// Conjugates every register by a seeded Haar unitary. Seed 0 is the identity.
Instance gen_conjugated(const Instance &inst, uint64_t seed);

struct MixedOptions {
    size_t dim = 2;
    /// Probability that the pair of opposite faces at a generic vertex is singular.
    double singular_probability = 0.5;
    /// Plant a product state annihilated by every term, so the instance is frustration free.
    bool plant_solution = true;
};

/// Vertex-placement grid mixing singular and reducing overlaps.
///
/// Vertices (i, j) with i + j even are generic: the NE/SW faces and the NW/SE faces form two
/// opposite pairs, and each pair independently is singular (same seeded state) or reducing
/// (a seeded state and an orthogonal one). Vertices with i + j odd alternate a seeded
/// orthonormal pair around the vertex, so edge-adjacent faces are orthogonal there and every
/// face pair commutes.
Instance gen_mixed(size_t rows, size_t cols, uint64_t seed, const MixedOptions &options = {});

/// Classical face terms plus the contradictory 1-local pair |0><0|, |1><1| on one seeded
/// register, then conjugated. lambda0 >= 1.
Instance gen_unsat(const Geometry &geom, uint64_t seed, size_t dim = 2);

}  // namespace clh

#endif
