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

#include "clh/generators.h"

#include <algorithm>
#include <map>

namespace clh {

namespace {

ComplexVector basis_vector(size_t d, size_t k) {
    ComplexVector v = ComplexVector::Zero(d);
    v(k) = 1;
    return v;
}

Instance skeleton(const Geometry &geom, size_t dim) {
    Instance inst;
    size_t n = geom.placement == Placement::Vertices ? geom.num_vertices : geom.edges.size();
    for (size_t r = 0; r < n; r++) {
        inst.registers.push_back({(int)r, dim});
    }
    inst.geometry = geom;
    return inst;
}

std::vector<int> face_support(const Geometry &geom, size_t i, size_t j) {
    if (geom.placement == Placement::Vertices) {
        return face_corners(geom, i, j);
    }
    return geom.faces[face_index(geom, i, j)];
}

ComplexMatrix product_projector(const std::vector<ComplexVector> &states) {
    ComplexMatrix m = identity(1);
    for (const auto &s : states) {
        m = kron(m, outer(s, s));
    }
    return m;
}

void add_face_term(Instance &inst, size_t i, size_t j, const std::vector<ComplexVector> &states) {
    LocalTerm t;
    t.id = (int)inst.terms.size();
    t.support = face_support(*inst.geometry, i, j);
    t.matrix = product_projector(states);
    t.rank = 1;
    t.cell = face_cell(i, j);
    inst.terms.push_back(std::move(t));
}

// A Haar-random unit vector orthogonal to every column of `avoid`.
ComplexVector random_orthogonal(const std::vector<ComplexVector> &avoid, size_t d, Rng &rng) {
    ComplexVector v = random_state(d, rng);
    for (int pass = 0; pass < 2; pass++) {
        for (const auto &a : avoid) {
            v -= a * (a.dot(v));
        }
    }
    v.normalize();
    phase_normalize(v);
    return v;
}

}  // namespace

Instance gen_classical(const Geometry &geom, uint64_t seed, size_t dim) {
    Instance inst = skeleton(geom, dim);
    Rng rng(seed);
    std::uniform_int_distribution<size_t> digit(0, dim - 1);
    for (size_t i = 0; i < geom.rows; i++) {
        for (size_t j = 0; j < geom.cols; j++) {
            std::vector<ComplexVector> states;
            for (int k = 0; k < 4; k++) {
                states.push_back(basis_vector(dim, digit(rng)));
            }
            add_face_term(inst, i, j, states);
        }
    }
    inst.provenance.push_back("gen_classical seed=" + std::to_string(seed));
    return inst;
}

Instance gen_singular(const Geometry &geom, uint64_t seed, size_t dim) {
    Instance inst = skeleton(geom, dim);
    Rng rng(seed);
    std::vector<ComplexVector> psi;
    for (size_t r = 0; r < inst.registers.size(); r++) {
        psi.push_back(seed == 0 ? basis_vector(dim, 0) : random_state(dim, rng));
    }
    for (size_t i = 0; i < geom.rows; i++) {
        for (size_t j = 0; j < geom.cols; j++) {
            std::vector<ComplexVector> states;
            for (int r : face_support(geom, i, j)) {
                states.push_back(psi[r]);
            }
            add_face_term(inst, i, j, states);
        }
    }
    inst.provenance.push_back("gen_singular seed=" + std::to_string(seed));
    return inst;
}

Instance gen_reducing(const Geometry &geom, uint64_t seed, size_t dim) {
    if (dim < 2) {
        fail(ErrorCode::InsufficientDimension, "reducing overlaps need register dimension at least 2");
    }
    Instance inst = skeleton(geom, dim);
    Rng rng(seed);
    std::vector<ComplexMatrix> basis;
    for (size_t r = 0; r < inst.registers.size(); r++) {
        basis.push_back(seed == 0 ? identity(dim) : random_unitary(dim, rng));
    }
    // Vertex placement: NW, NE corners get e_0 and SE, SW get e_1, so opposite faces at
    // every vertex differ. Edge placement: top, left get e_0 and right, bottom get e_1, so
    // the two faces at every edge differ.
    const int vertex_label[4] = {0, 0, 1, 1};
    const int edge_label[4] = {0, 1, 1, 0};
    const int *label = geom.placement == Placement::Vertices ? vertex_label : edge_label;
    for (size_t i = 0; i < geom.rows; i++) {
        for (size_t j = 0; j < geom.cols; j++) {
            std::vector<int> sup = face_support(geom, i, j);
            std::vector<ComplexVector> states;
            for (size_t c = 0; c < 4; c++) {
                states.push_back(basis[sup[c]].col(label[c]));
            }
            add_face_term(inst, i, j, states);
        }
    }
    inst.provenance.push_back("gen_reducing seed=" + std::to_string(seed));
    return inst;
}

Instance gen_conjugated(const Instance &inst, uint64_t seed) {
    Instance out = inst;
    if (seed == 0) {
        out.provenance.push_back("gen_conjugated seed=0 (identity)");
        return out;
    }
    Rng rng(seed);
    std::map<int, ComplexMatrix> u;
    for (const auto &r : inst.registers) {
        u[r.id] = random_unitary(r.dim, rng);
    }
    for (auto &t : out.terms) {
        ComplexMatrix w = identity(1);
        for (int r : t.support) {
            w = kron(w, u[r]);
        }
        t.matrix = w * t.matrix * w.adjoint();
        t.matrix = (t.matrix + t.matrix.adjoint()).eval() * 0.5;
    }
    out.provenance.push_back("gen_conjugated seed=" + std::to_string(seed));
    return out;
}

Instance gen_mixed(size_t rows, size_t cols, uint64_t seed, const MixedOptions &options) {
    size_t d = options.dim;
    if (d < 2) {
        fail(ErrorCode::InsufficientDimension, "gen_mixed needs register dimension at least 2");
    }
    Geometry geom = make_grid(rows, cols, Placement::Vertices);
    Instance inst = skeleton(geom, d);
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);

    // state[f][c]: the state of face f on its corner c (NW, NE, SE, SW).
    std::vector<std::vector<ComplexVector>> state(rows * cols, std::vector<ComplexVector>(4));
    std::vector<bool> killed(rows * cols, false);

    // Corner c of a face sees the vertex from the opposite side: the face lies to the
    // SE, SW, NW, NE of the vertex for c = NW, NE, SE, SW.
    auto face_at = [&](size_t vi, size_t vj, int side, size_t &f, int &corner) -> bool {
        // side: 0 = NW, 1 = NE, 2 = SE, 3 = SW of the vertex.
        long fi = (long)vi - (side == 0 || side == 1 ? 1 : 0);
        long fj = (long)vj - (side == 0 || side == 3 ? 1 : 0);
        if (fi < 0 || fj < 0 || fi >= (long)rows || fj >= (long)cols) {
            return false;
        }
        f = face_index(geom, fi, fj);
        corner = (side + 2) % 4;
        return true;
    };

    for (size_t vi = 0; vi <= rows; vi++) {
        for (size_t vj = 0; vj <= cols; vj++) {
            if ((vi + vj) % 2 == 0) {
                continue;
            }
            ComplexMatrix u = random_unitary(d, rng);
            int o = coin(rng);
            int planted = coin(rng);
            for (int side = 0; side < 4; side++) {
                size_t f;
                int c;
                if (!face_at(vi, vj, side, f, c)) {
                    continue;
                }
                int lab = side % 2 == 0 ? o : 1 - o;
                state[f][c] = u.col(lab);
                if (options.plant_solution && lab != planted) {
                    killed[f] = true;
                }
            }
        }
    }

    // Faces without an alternating witness pick one of their generic corners.
    std::vector<int> witness(rows * cols, -1);
    if (options.plant_solution) {
        for (size_t i = 0; i < rows; i++) {
            for (size_t j = 0; j < cols; j++) {
                size_t f = face_index(geom, i, j);
                bool pick = coin(rng);
                if (!killed[f]) {
                    witness[f] = (i + j) % 2 == 0 ? (pick ? 0 : 2) : (pick ? 1 : 3);
                }
            }
        }
    }

    size_t singular_pairs = 0, reducing_pairs = 0;
    for (size_t vi = 0; vi <= rows; vi++) {
        for (size_t vj = 0; vj <= cols; vj++) {
            if ((vi + vj) % 2 == 1) {
                continue;
            }
            ComplexVector s = random_state(d, rng);
            // Pair P = faces NE and SW of the vertex, pair Q = faces NW and SE.
            for (int pair = 0; pair < 2; pair++) {
                int sides[2] = {pair == 0 ? 1 : 0, pair == 0 ? 3 : 2};
                size_t f[2];
                int c[2];
                bool present[2], needy[2];
                for (int k = 0; k < 2; k++) {
                    present[k] = face_at(vi, vj, sides[k], f[k], c[k]);
                    needy[k] = present[k] && witness[f[k]] == c[k];
                }
                bool singular = unit(rng) < options.singular_probability;
                if (needy[0] && needy[1] && d == 2) {
                    singular = true;
                }
                std::vector<ComplexVector> avoid;
                if (needy[0] || needy[1]) {
                    avoid.push_back(s);
                }
                int first = needy[1] && !needy[0] ? 1 : 0;
                ComplexVector a = random_orthogonal(avoid, d, rng);
                ComplexVector b;
                if (singular) {
                    b = a;
                } else {
                    std::vector<ComplexVector> avoid_b{a};
                    if (needy[1 - first]) {
                        avoid_b.push_back(s);
                    }
                    b = random_orthogonal(avoid_b, d, rng);
                }
                if (present[first]) {
                    state[f[first]][c[first]] = a;
                }
                if (present[1 - first]) {
                    state[f[1 - first]][c[1 - first]] = b;
                }
                if (present[0] && present[1]) {
                    (singular ? singular_pairs : reducing_pairs)++;
                }
            }
        }
    }

    for (size_t i = 0; i < rows; i++) {
        for (size_t j = 0; j < cols; j++) {
            add_face_term(inst, i, j, state[face_index(geom, i, j)]);
        }
    }
    inst.provenance.push_back("gen_mixed seed=" + std::to_string(seed) + " singular_pairs=" +
                              std::to_string(singular_pairs) + " reducing_pairs=" + std::to_string(reducing_pairs) +
                              (options.plant_solution ? " planted" : ""));
    return inst;
}

Instance gen_unsat(const Geometry &geom, uint64_t seed, size_t dim) {
    Instance inst = gen_classical(geom, seed, dim);
    Rng rng(seed ^ 0x5bd1e995ULL);
    // Boundary registers are never triangle centers, so the contradiction survives puncturing.
    std::vector<int> boundary;
    if (geom.placement == Placement::Vertices) {
        for (size_t i = 0; i <= geom.rows; i++) {
            for (size_t j = 0; j <= geom.cols; j++) {
                if (i == 0 || j == 0 || i == geom.rows || j == geom.cols) {
                    boundary.push_back(grid_vertex(geom, i, j));
                }
            }
        }
    } else {
        for (size_t r = 0; r < geom.edges.size(); r++) {
            boundary.push_back((int)r);
        }
    }
    int r = boundary[std::uniform_int_distribution<size_t>(0, boundary.size() - 1)(rng)];
    std::string cell = geom.placement == Placement::Vertices
                           ? vertex_cell(r / (geom.cols + 1), r % (geom.cols + 1))
                           : "e:" + std::to_string(r);
    for (size_t k = 0; k < 2; k++) {
        LocalTerm t;
        t.id = inst.next_term_id();
        t.support = {r};
        ComplexVector e = basis_vector(dim, k);
        t.matrix = outer(e, e);
        t.rank = 1;
        t.cell = cell;
        inst.terms.push_back(t);
    }
    inst.provenance.push_back("gen_unsat contradiction on register " + std::to_string(r));
    return gen_conjugated(inst, seed + 1);
}

}  // namespace clh
