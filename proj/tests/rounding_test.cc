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

#include "clh/rounding.h"

#include <gtest/gtest.h>

#include "builders.h"
#include "clh/generators.h"
#include "clh/jordan.h"
#include "clh/oracle.h"
#include "clh/puncture.h"
#include "oracles.h"

using namespace clh;
using build::eye;

using build::proj;
using build::term;

namespace {

double min_eig(const ComplexMatrix &m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// Every (pi_P, pi_Q) block pair of a degree-4 wheel whose two pairs are reducing.
struct BlockPairs {
    int center = 0;
    std::vector<int> p_terms, q_terms;
    std::vector<ComplexMatrix> p_blocks, q_blocks;
};

BlockPairs block_pairs(const Instance &inst, int center) {
    BlockPairs b;
    b.center = center;
    AlternatingGrouping g = group_alternating(inst, center);
    b.p_terms = g.p_set;
    b.q_terms = g.q_set;
    b.p_blocks = puncture_blocks(inst, center, g.p_set);
    b.q_blocks = puncture_blocks(inst, center, g.q_set);
    return b;
}

}  // namespace

TEST(rounding, rank1_round_with_commuting_projector_restricts) {
    // Two registers; every term is diagonal on register 0, so pi = |0><0| commutes with all.
    Instance inst;
    inst.registers = {{0, 2}, {1, 2}};
    ComplexMatrix z0 = ComplexMatrix::Zero(2, 2), z1 = ComplexMatrix::Zero(2, 2);
    z0(0, 0) = 1;
    z1(1, 1) = 1;
    inst.terms.push_back(term(0, {0, 1}, build::kron(z1, z0)));
    inst.terms.push_back(term(1, {1}, z1));
    auto r = rank1_round(inst, 0, z0, z0);
    EXPECT_EQ(r.artifacts.p_term, -1);
    EXPECT_EQ(r.artifacts.q_term, -1);
    EXPECT_LE((r.artifacts.delta - z0).norm(), 1e-9);
    EXPECT_FALSE(r.artifacts.degenerate);
    EXPECT_TRUE(validate(r.instance).ok());
    // I - Delta kills everything outside range(pi); within it the rest is unchanged.
    EXPECT_EQ(oracle::frustration_free(r.instance), oracle::frustration_free(inst));
}

TEST(rounding, rank1_round_orthogonal_projectors_give_canonical_unsat) {
    Instance inst;
    inst.registers = {{0, 2}, {1, 2}};
    ComplexMatrix z0 = ComplexMatrix::Zero(2, 2), z1 = ComplexMatrix::Zero(2, 2);
    z0(0, 0) = 1;
    z1(1, 1) = 1;
    inst.terms.push_back(term(0, {0, 1}, build::kron(z0, z1)));
    auto r = rank1_round(inst, 0, z0, z1);
    EXPECT_TRUE(r.artifacts.degenerate);
    ASSERT_EQ(r.instance.registers.size(), 1u);
    EXPECT_EQ(r.instance.registers[0].dim, 1u);
    ASSERT_EQ(r.instance.terms.size(), 1u);
    EXPECT_NEAR(std::abs(r.instance.terms[0].matrix(0, 0) - 1.0), 0.0, 1e-12);
}

TEST(rounding, rank1_round_rejects_two_candidates_on_one_side) {
    build::WheelOptions opt;
    opt.singular = true;
    opt.pin_probability = 0;
    auto w = build::make_wheel(4, 11, opt);
    BlockPairs b = block_pairs(w.inst, 0);
    // Both Q terms survive pi_P = projector onto a generic state, and neither commutes with it.
    ComplexMatrix generic = proj(oracle::haar_unitary(2, *std::make_unique<std::mt19937_64>(3)).col(0));
    try {
        rank1_round(w.inst, 0, generic, b.q_blocks[0]);
        FAIL() << "expected HypothesisViolated";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::HypothesisViolated);
    }
}

TEST(rounding, rank1_round_commutes_and_preserves_ground_energy) {
    size_t instances = 0, sat = 0, unsat = 0;
    for (uint64_t seed = 0; instances < 200; seed++) {
        build::WheelOptions opt;
        opt.reducing = true;
        opt.center_dim = 2 + seed % 2;
        opt.pin_probability = 0.5 + 0.5 * ((seed / 2) % 2);
        opt.frustrate_probability = 0.3;
        auto w = build::make_wheel(4, 1000 + seed, opt);
        BlockPairs b = block_pairs(w.inst, 0);
        bool input_zero = oracle::frustration_free(w.inst);
        bool any_zero = false;
        for (const auto &pp : b.p_blocks) {
            for (const auto &pq : b.q_blocks) {
                auto r = rank1_round(w.inst, 0, pp, pq);
                auto rep = validate(r.instance);
                ASSERT_TRUE(rep.ok()) << "seed " << seed << " " << rep.violations[0].kind << ": "
                                      << rep.violations[0].detail;
                bool out_zero = oracle::frustration_free(r.instance);
                EXPECT_FALSE(out_zero && !input_zero) << "unsound choice, seed " << seed;
                any_zero |= out_zero;
                const auto &a = r.artifacts;
                if (a.degenerate) {
                    continue;
                }
                EXPECT_LE((a.pi_p_bprime + a.pi_qtilde_bprime - a.delta).norm(), 1e-8);
                EXPECT_LE((a.pi_p_bprime * a.pi_qtilde_bprime).norm(), 1e-8);
                EXPECT_LE((a.delta * a.delta - a.delta).norm(), 1e-8);
                ComplexMatrix pqp = a.p_tilde * a.q_tilde * a.p_tilde;
                EXPECT_GE(min_eig(a.delta - pqp), -1e-8);
                EXPECT_LE((a.p_tilde * a.p_tilde - a.p_tilde).norm(), 1e-8);
                EXPECT_LE((a.q_tilde * a.q_tilde - a.q_tilde).norm(), 1e-8);
            }
        }
        EXPECT_EQ(any_zero, input_zero) << "seed " << seed;
        (input_zero ? sat : unsat)++;
        instances++;
    }
    EXPECT_GT(sat, 20u);
    EXPECT_GT(unsat, 20u);
}

TEST(rounding, equiv_projector_single_identity_entry) {
    Instance inst = gen_classical(make_grid(1, 2), 5);
    std::vector<int> all;
    for (const auto &t : inst.terms) {
        all.push_back(t.id);
    }
    auto table = equiv_projector_check(inst, 0, {identity(2)}, 1, {identity(2)}, all, {});
    ASSERT_EQ(table.entries.size(), 1u);
    ASSERT_EQ(table.entries[0].size(), 1u);
    EXPECT_EQ(table.any_positive(), oracle::frustration_free(inst));
    EXPECT_GT(table.entries[0][0], 0.5);
}

TEST(rounding, equiv_projector_classical_unsat_has_no_positive_entry) {
    for (uint64_t seed = 1; seed <= 10; seed++) {
        Instance inst = gen_unsat(make_grid(1, 2), seed);
        ASSERT_FALSE(oracle::frustration_free(inst));
        auto table = equiv_projector_check(inst, 0, {identity(2)}, 1, {identity(2)}, {}, {});
        EXPECT_FALSE(table.any_positive());
        EXPECT_GE(table.min_entry(), -1e-8);
    }
}

TEST(rounding, equiv_projector_table_matches_oracle_and_rank1_round) {
    for (uint64_t seed = 0; seed < 100; seed++) {
        build::WheelOptions opt;
        opt.reducing = true;
        opt.pin_probability = 0.75;
        opt.frustrate_probability = 0.3;
        auto w = build::make_wheel(4, 5000 + seed, opt);
        BlockPairs b = block_pairs(w.inst, 0);
        auto table = equiv_projector_check(w.inst, 0, b.p_blocks, 0, b.q_blocks, b.p_terms, b.q_terms);
        EXPECT_EQ(table.any_positive(), oracle::frustration_free(w.inst)) << "seed " << seed;
        EXPECT_GE(table.min_entry(), -1e-8);
        for (size_t i = 0; i < b.p_blocks.size(); i++) {
            for (size_t j = 0; j < b.q_blocks.size(); j++) {
                auto r = rank1_round(w.inst, 0, b.p_blocks[i], b.q_blocks[j]);
                EXPECT_EQ(table.entries[i][j] > table.threshold, oracle::frustration_free(r.instance))
                    << "seed " << seed << " entry " << i << "," << j;
            }
        }
    }
}

TEST(rounding, equiv_projector_rejects_noncommuting_hypothesis) {
    auto w = build::make_wheel(4, 9, {});
    BlockPairs b = block_pairs(w.inst, 0);
    // With S empty every P term is required to commute with the Q family, which it does not.
    try {
        equiv_projector_check(w.inst, 0, b.q_blocks, 0, b.q_blocks, {}, {});
        FAIL() << "expected HypothesisViolated";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::HypothesisViolated);
    }
}

TEST(rounding, two_local_round_kills_orthogonal_block) {
    Instance inst;
    inst.registers = {{0, 2}, {1, 2}, {2, 2}};
    ComplexMatrix z0 = ComplexMatrix::Zero(2, 2), z1 = ComplexMatrix::Zero(2, 2);
    z0(0, 0) = 1;
    z1(1, 1) = 1;
    std::mt19937_64 rng(4);
    ComplexMatrix pa = proj(oracle::haar_unitary(2, rng).col(0));
    ComplexMatrix qc = proj(oracle::haar_unitary(2, rng).col(0));
    inst.terms.push_back(term(0, {0, 1}, build::kron(pa, z0)));
    inst.terms.push_back(term(1, {1, 2}, build::kron(z1, qc)));
    auto blocks = two_local_blocks(inst, 1);
    ASSERT_EQ(blocks.size(), 2u);
    Instance out = two_local_round(inst, 1, 0);
    EXPECT_FALSE(out.has_register(1));
    bool saw_first = false;
    for (const auto &t : out.terms) {
        EXPECT_NE(t.id, 1) << "the |1><1| term should vanish in block |0>";
        if (t.id == 0) {
            saw_first = true;
            EXPECT_EQ(t.support, std::vector<int>{0});
            EXPECT_LE((t.matrix - pa).norm(), 1e-9);
        }
    }
    EXPECT_TRUE(saw_first);
    EXPECT_THROW(two_local_round(inst, 1, 5), Error);
}

TEST(rounding, two_local_round_splits_product_register) {
    // Register 1 is C^2 (x) C^2; term 0 is entangled with the first factor, term 1 with the second.
    Instance inst;
    inst.registers = {{0, 2}, {1, 4}, {2, 2}};
    std::mt19937_64 rng(8);
    ComplexMatrix u = oracle::haar_unitary(4, rng);
    ComplexMatrix ab = proj(oracle::haar_unitary(4, rng).col(0));
    ComplexMatrix bc = proj(oracle::haar_unitary(4, rng).col(0));
    ComplexMatrix ua = build::kron(eye(2), u);
    inst.terms.push_back(term(0, {0, 1}, (ua * build::kron(ab, eye(2)) * ua.adjoint()).eval()));
    ComplexMatrix uc = build::kron(u, eye(2));
    inst.terms.push_back(term(1, {1, 2}, (uc * build::kron(eye(2), bc) * uc.adjoint()).eval()));
    ASSERT_TRUE(validate(inst).ok());
    auto blocks = two_local_blocks(inst, 1);
    ASSERT_EQ(blocks.size(), 1u);
    std::vector<size_t> dims = blocks[0].factor_dims;
    std::sort(dims.begin(), dims.end());
    EXPECT_EQ(dims, (std::vector<size_t>{2, 2}));
    Instance out = two_local_round(inst, 1, 0);
    EXPECT_EQ(out.registers.size(), 4u);
    ASSERT_EQ(out.terms.size(), 2u);
    EXPECT_NE(out.terms[0].support[1], out.terms[1].support[0]);
    EXPECT_EQ(oracle::frustration_free(out), oracle::frustration_free(inst));
}

namespace {

/// Rounds every register of a chain in order, trying every block; true if some path ends with
/// a frustration-free instance. Also checks that rounded terms meet only their own sub-register.
bool chain_sweep(const Instance &inst, size_t next, size_t n, size_t &paths) {
    if (next == n) {
        paths++;
        return oracle::frustration_free(inst);
    }
    int reg = int(next);
    if (inst.incident_terms(reg).empty()) {
        return chain_sweep(inst, next + 1, n, paths);
    }
    auto blocks = two_local_blocks(inst, reg);
    bool any = false;
    for (size_t b = 0; b < blocks.size(); b++) {
        Instance out = two_local_round(inst, reg, b);
        EXPECT_TRUE(validate(out).ok());
        // New sub-registers: each one is touched by at most one term.
        std::map<int, int> touch;
        for (const auto &r : out.registers) {
            if (!inst.has_register(r.id)) {
                touch[r.id] = 0;
            }
        }
        for (const auto &t : out.terms) {
            for (int r : t.support) {
                if (touch.count(r) && !acts_trivially_on(out, t, r)) {
                    touch[r]++;
                }
            }
        }
        for (auto [r, c] : touch) {
            EXPECT_LE(c, 1) << "sub-register " << r << " shared";
        }
        bool z = chain_sweep(out, next + 1, n, paths);
        EXPECT_FALSE(z && !oracle::frustration_free(inst)) << "unsound block choice";
        any |= z;
    }
    return any;
}

}  // namespace

TEST(rounding, two_local_chain_sweep_matches_oracle) {
    size_t sat = 0, unsat = 0;
    for (uint64_t seed = 0; seed < 60; seed++) {
        Instance inst = build::make_chain(3 + seed % 2, 300 + seed);
        ASSERT_TRUE(validate(inst).ok()) << "seed " << seed;
        size_t paths = 0;
        bool any = chain_sweep(inst, 0, inst.registers.size(), paths);
        bool zero = oracle::frustration_free(inst);
        EXPECT_EQ(any, zero) << "seed " << seed;
        (zero ? sat : unsat)++;
    }
    EXPECT_GT(sat, 5u);
    EXPECT_GT(unsat, 5u);
}

TEST(rounding, two_local_round_rejects_wide_overlap) {
    auto w = build::make_wheel(4, 2, {});
    try {
        two_local_round(w.inst, 0, 0);
        FAIL() << "expected OverlapViolation";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::OverlapViolation);
    }
}

TEST(rounding, classical_restrict_partitions_ground_space) {
    for (uint64_t seed = 0; seed < 20; seed++) {
        Instance inst = gen_conjugated(gen_classical(make_grid(1, 2), seed), seed + 1);
        // A pinning term makes some instances frustrated.
        if (seed % 3 == 0) {
            inst = gen_conjugated(gen_unsat(make_grid(1, 2), seed), 0);
        }
        int reg = 1;
        auto basis = detect_classical(inst, reg);
        ASSERT_TRUE(basis.has_value()) << "seed " << seed;
        oracle::Mat h = oracle::hamiltonian(inst);
        Eigen::SelfAdjointEigenSolver<oracle::Mat> es(h);
        bool zero = std::abs(es.eigenvalues()(0)) <= 1e-8;
        oracle::Mat ground = es.eigenvectors().leftCols(
            std::count_if(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size(),
                          [](double x) { return std::abs(x) <= 1e-8; }));
        auto dims = oracle::dims_of(inst);
        size_t pos = inst.register_index(reg);
        bool any = false;
        for (Eigen::Index i = 0; i < basis->cols(); i++) {
            Instance out = classical_restrict(inst, reg, i, *basis);
            EXPECT_FALSE(out.has_register(reg));
            bool z = oracle::frustration_free(out);
            any |= z;
            double weight = 0;
            if (zero) {
                oracle::Mat pi = oracle::embed(proj(basis->col(i)), {pos}, dims);
                weight = (pi * ground).norm();
            }
            EXPECT_EQ(z, weight > 1e-6) << "seed " << seed << " index " << i;
        }
        EXPECT_EQ(any, zero);
    }
}

TEST(rounding, classical_restrict_rejects_bad_basis) {
    Instance inst;
    inst.registers = {{0, 2}};
    ComplexMatrix x(2, 2);
    x << 0.5, 0.5, 0.5, 0.5;
    inst.terms.push_back(term(0, {0}, x));
    try {
        classical_restrict(inst, 0, 0, identity(2));
        FAIL() << "expected NotClassical";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotClassical);
    }
}

TEST(rounding, classical_restrict_at_singular_state) {
    Instance inst = gen_singular(make_grid(2, 2), 6);
    int reg = 4;
    auto basis = detect_classical(inst, reg);
    ASSERT_TRUE(basis.has_value());
    bool some_killed_all = false;
    for (Eigen::Index i = 0; i < basis->cols(); i++) {
        Instance out = classical_restrict(inst, reg, i, *basis);
        EXPECT_TRUE(validate(out).ok());
        EXPECT_FALSE(out.has_register(reg));
        some_killed_all |= out.terms.empty();
    }
    // The state orthogonal to the shared one removes every incident term.
    EXPECT_TRUE(some_killed_all);
}

TEST(rounding, semi_separable_plain_restriction) {
    for (uint64_t seed = 0; seed < 30; seed++) {
        build::Qutrit q = build::make_qutrit(seed, false);
        ASSERT_TRUE(validate(q.inst).ok());
        SemiSeparableWitness w{0, q.blocks, q.exceptional, false};
        bool any = false;
        for (size_t b = 0; b < 2; b++) {
            Instance out = semi_separable_reduce(q.inst, w, b);
            EXPECT_TRUE(validate(out).ok());
            any |= oracle::frustration_free(out);
        }
        EXPECT_EQ(any, oracle::frustration_free(q.inst)) << "seed " << seed;
    }
}

TEST(rounding, semi_separable_crossing_term_matches_oracle) {
    for (uint64_t seed = 0; seed < 30; seed++) {
        build::Qutrit q = build::make_qutrit(100 + seed, true);
        ASSERT_TRUE(validate(q.inst).ok()) << "seed " << seed;
        SemiSeparableWitness w{0, q.blocks, q.exceptional, true};
        bool any = false;
        for (size_t b = 0; b < 2; b++) {
            Instance out = semi_separable_reduce(q.inst, w, b);
            EXPECT_TRUE(validate(out).ok());
            // The crossing term has pi h pi eigenvalues strictly inside (0, 1): it rounds to zero.
            EXPECT_FALSE(out.has_term(q.exceptional));
            any |= oracle::frustration_free(out);
        }
        EXPECT_EQ(any, oracle::frustration_free(q.inst)) << "seed " << seed;
    }
}

TEST(rounding, semi_separable_rejects_bad_witness) {
    build::Qutrit q = build::make_qutrit(1, false);
    SemiSeparableWitness w{0, {q.blocks[0]}, q.exceptional, false};
    EXPECT_THROW(semi_separable_reduce(q.inst, w, 0), Error);
    SemiSeparableWitness ok{0, q.blocks, q.exceptional, false};
    try {
        semi_separable_reduce(q.inst, ok, 2);
        FAIL() << "expected BranchOutOfRange";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BranchOutOfRange);
    }
}
