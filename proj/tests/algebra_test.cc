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

#include "clh/algebra.h"

#include <gtest/gtest.h>

#include "clh/generators.h"
#include "oracles.h"

using namespace clh;

namespace {

std::vector<std::pair<size_t, size_t>> random_shape(std::mt19937_64 &rng, size_t max_dim) {
    std::uniform_int_distribution<size_t> nb(1, 3), dd(1, 3);
    std::vector<std::pair<size_t, size_t>> blocks;
    size_t total = 0;
    size_t n = nb(rng);
    for (size_t b = 0; b < n; b++) {
        size_t d1 = dd(rng), d2 = dd(rng);
        if (total + d1 * d2 > max_dim) {
            break;
        }
        blocks.emplace_back(d1, d2);
        total += d1 * d2;
    }
    if (total < 2) {
        blocks.emplace_back(2, 1);
    }
    return blocks;
}

std::vector<size_t> sorted_dims(const std::vector<std::pair<size_t, size_t>> &blocks) {
    std::vector<size_t> out;
    for (auto [d1, d2] : blocks) {
        out.push_back(d1 * d2);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(algebra, closure_of_nothing_is_scalars) {
    auto basis = algebra_closure({}, 3);
    ASSERT_EQ(basis.size(), 1u);
}

TEST(algebra, pauli_x_generates_two_dimensional_algebra) {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    auto alg = make_algebra({x}, 2);
    EXPECT_EQ(alg.basis.size(), 2u);
    auto dec = structure_decompose(alg);
    ASSERT_EQ(dec.blocks.size(), 2u);
    EXPECT_EQ(dec.blocks[0].d1, 1u);
    EXPECT_EQ(dec.blocks[1].d1, 1u);
}

TEST(algebra, x_and_z_generate_full_matrix_algebra) {
    ComplexMatrix x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    auto alg = make_algebra({x, z}, 2);
    EXPECT_EQ(alg.basis.size(), 4u);
    auto dec = structure_decompose(alg);
    ASSERT_EQ(dec.blocks.size(), 1u);
    EXPECT_EQ(dec.blocks[0].d1, 2u);
    EXPECT_EQ(dec.blocks[0].d2, 1u);
}

TEST(algebra, planted_structure_recovered) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; trial++) {
        auto shape = random_shape(rng, 12);
        auto planted = oracle::planted_algebra(shape, 2, rng);
        auto alg = make_algebra(planted.generators, planted.dim);
        size_t expect_dim = 0;
        for (auto [d1, d2] : shape) {
            expect_dim += d1 * d1;
        }
        ASSERT_EQ(alg.basis.size(), expect_dim) << "trial " << trial;
        auto dec = structure_decompose(alg);
        std::vector<std::pair<size_t, size_t>> got;
        for (const auto &b : dec.blocks) {
            got.emplace_back(b.d1, b.d2);
        }
        auto want = shape;
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        EXPECT_EQ(got, want) << "trial " << trial;
        auto res = decomposition_residuals(alg, dec);
        EXPECT_LE(res.completeness, 1e-9);
        EXPECT_LE(res.off_diagonal, 1e-9);
        EXPECT_LE(res.tensor_form, 1e-9);
        EXPECT_EQ(res.fullness_gap, 0);
        for (size_t k = 1; k < dec.blocks.size(); k++) {
            EXPECT_GE(dec.blocks[k - 1].dim(), dec.blocks[k].dim());
        }
    }
}

TEST(algebra, center_and_commutant_dimensions) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; trial++) {
        auto shape = random_shape(rng, 8);
        auto planted = oracle::planted_algebra(shape, 2, rng);
        auto alg = make_algebra(planted.generators, planted.dim);
        EXPECT_EQ(center(alg).size(), shape.size());
        auto comm = commutant(planted.generators, planted.dim);
        size_t want = 0;
        for (auto [d1, d2] : shape) {
            want += d2 * d2;
        }
        EXPECT_EQ(comm.size(), want);
        EXPECT_EQ(oracle::commutant_dimension(planted.generators, planted.dim), want);
        EXPECT_LE(algebras_commutator(alg.basis, comm), 1e-8);
    }
}

TEST(algebra, span_distance_is_basis_independent) {
    std::mt19937_64 rng(3);
    auto planted = oracle::planted_algebra({{2, 1}, {1, 2}}, 2, rng);
    auto a = make_algebra(planted.generators, planted.dim);
    auto b = make_algebra({planted.generators[1], planted.generators[0]}, planted.dim);
    EXPECT_LE(span_distance(a.basis, b.basis), 1e-9);
}

TEST(algebra, induced_algebra_of_product_term) {
    Instance inst;
    inst.registers = {{0, 2}, {1, 2}};
    ComplexMatrix z(2, 2);
    z << 1, 0, 0, 0;
    ComplexMatrix x(2, 2);
    x << 0.5, 0.5, 0.5, 0.5;
    inst.terms.push_back({0, {0, 1}, kron(z, x), 1, std::nullopt});
    auto a0 = induced_algebra(inst, inst.terms[0], 0);
    EXPECT_EQ(a0.basis.size(), 2u);
    auto a1 = induced_algebra(inst, inst.terms[0], 1);
    EXPECT_EQ(a1.basis.size(), 2u);
    EXPECT_THROW(induced_algebra(inst, inst.terms[0], 5), Error);
}

TEST(algebra, rank1_classification_matches_marginals) {
    // Singular and reducing pairs from the 2D generators, checked against the marginal oracle.
    for (uint64_t seed = 1; seed <= 6; seed++) {
        Instance inst = gen_mixed(2, 2, seed);
        for (const auto &reg : inst.registers) {
            auto inc = inst.incident_terms(reg.id);
            for (size_t a = 0; a < inc.size(); a++) {
                for (size_t b = a + 1; b < inc.size(); b++) {
                    const auto &p = inst.term(inc[a]);
                    const auto &q = inst.term(inc[b]);
                    if (support_intersection(p.support, q.support).size() != 1) {
                        continue;
                    }
                    auto want = oracle::classify_by_marginals(inst, p, q, reg.id);
                    ASSERT_NE(want, oracle::PairKind::Neither);
                    auto got = rank1_classify(inst, p, q, reg.id);
                    if (want == oracle::PairKind::Singular) {
                        EXPECT_EQ(got.kind, Rank1Classification::Kind::Singular);
                        EXPECT_LE(singular_residual(inst, p, q, reg.id, got.psi), 1e-8);
                    } else {
                        EXPECT_EQ(got.kind, Rank1Classification::Kind::Reducing);
                        EXPECT_LE(reducing_residual(inst, p, q, reg.id, got.pi), 1e-8);
                    }
                }
            }
        }
    }
}

TEST(algebra, classical_register_detected_in_rotated_basis) {
    Geometry g = make_grid(2, 2, Placement::Vertices);
    Instance base = gen_classical(g, 5);
    auto basis = detect_classical(base, 4);
    ASSERT_TRUE(basis.has_value());
    EXPECT_LE((*basis - identity(2)).cwiseAbs().maxCoeff(), 1e-9);
    Instance rot = gen_conjugated(base, 9);
    auto rb = detect_classical(rot, 4);
    ASSERT_TRUE(rb.has_value());
    EXPECT_LE((rb->adjoint() * *rb - identity(2)).cwiseAbs().maxCoeff(), 1e-9);
    for (int t : rot.incident_terms(4)) {
        for (Eigen::Index k = 0; k < 2; k++) {
            ComplexMatrix pi = rb->col(k) * rb->col(k).adjoint();
            EXPECT_LE(term_projector_commutator(rot, rot.term(t), 4, pi), 1e-8);
        }
    }
}

TEST(algebra, bell_projector_register_is_not_classical) {
    Instance inst;
    inst.registers = {{0, 2}, {1, 2}};
    ComplexVector bell = ComplexVector::Zero(4);
    bell(0) = bell(3) = 1 / std::sqrt(2.0);
    inst.terms.push_back({0, {0, 1}, outer(bell, bell), 1, std::nullopt});
    EXPECT_FALSE(detect_classical(inst, 0).has_value());
}

TEST(algebra, semi_separable_on_classical_instance) {
    Geometry g = make_grid(2, 2, Placement::Vertices);
    Instance inst = gen_classical(g, 2);
    auto w = detect_semi_separable(inst, 4);
    ASSERT_TRUE(w.has_value());
    EXPECT_GE(w->projectors.size(), 2u);
    ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
    for (const auto &p : w->projectors) {
        sum += p;
    }
    EXPECT_LE((sum - identity(2)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_FALSE(w->exceptional_breaks);
}
