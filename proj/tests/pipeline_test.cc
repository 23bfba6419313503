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


#include "clh/pipeline.h"

#include <gtest/gtest.h>

#include <set>

#include "builders.h"
#include "clh/generators.h"
#include "clh/oracle.h"
#include "oracles.h"

using namespace clh;
using build::eye;
using build::proj;
using build::term;
using oracle::Mat;
using oracle::Vec;

namespace {

/// Faces around interior vertex (i, j), computed directly from the grid layout.
std::set<size_t> faces_around(size_t cols, size_t i, size_t j) {
    return {(i - 1) * cols + (j - 1), (i - 1) * cols + j, i * cols + (j - 1), i * cols + j};
}

void expect_triangulation_sound(const Geometry &g, const Triangulation &t) {
    ASSERT_EQ(t.triangles.size(), t.centers.size());
    std::vector<int> cover(g.rows * g.cols, 0);
    std::set<int> centers;
    for (size_t k = 0; k < t.triangles.size(); k++) {
        std::set<size_t> faces(t.triangles[k].faces.begin(), t.triangles[k].faces.end());
        for (size_t f : faces) {
            cover[f]++;
        }
        int c = t.centers[k];
        size_t i = c / (g.cols + 1), j = c % (g.cols + 1);
        ASSERT_TRUE(i > 0 && j > 0 && i < g.rows && j < g.cols) << "center " << c << " is not interior";
        for (size_t f : faces_around(g.cols, i, j)) {
            EXPECT_TRUE(faces.count(f)) << "face " << f << " around center " << c << " leaves triangle " << k;
        }
        EXPECT_TRUE(centers.insert(c).second) << "center " << c << " used twice";
    }
    for (size_t f = 0; f < cover.size(); f++) {
        EXPECT_GE(cover[f], 1) << "face " << f << " uncovered";
        EXPECT_LE(cover[f], 2) << "face " << f << " in more than two triangles";
    }
}

Instance sat_grid(uint64_t seed) {
    return gen_mixed(2, 2, seed);
}

Instance one_qubit(std::vector<Mat> terms) {
    Instance inst;
    inst.registers = {{0, 2}};
    for (size_t k = 0; k < terms.size(); k++) {
        inst.terms.push_back(term((int)k, {0}, terms[k]));
    }
    return inst;
}

Vec basis(size_t d, size_t k) {
    Vec v = Vec::Zero(d);
    v(k) = 1;
    return v;
}

}  // namespace

TEST(triangulate, nine_by_nine_with_side_three) {
    Geometry g = make_grid(9, 9);
    Triangulation t = triangulate_grid(g, 3);
    EXPECT_EQ(t.triangles.size(), 18u);
    expect_triangulation_sound(g, t);
}

TEST(triangulate, small_grid_is_one_triangle) {
    Geometry g = make_grid(2, 2);
    Triangulation t = triangulate_grid(g, 3);
    ASSERT_EQ(t.triangles.size(), 1u);
    EXPECT_TRUE(t.triangles[0].whole_grid);
    EXPECT_EQ(t.centers[0], grid_vertex(g, 1, 1));
    expect_triangulation_sound(g, t);
}

TEST(triangulate, sound_across_sizes) {
    for (size_t r = 2; r <= 7; r++) {
        for (size_t c = 2; c <= 7; c++) {
            Geometry g = make_grid(r, c);
            auto l = smallest_triangle_size(g);
            ASSERT_TRUE(l.has_value()) << r << "x" << c;
            expect_triangulation_sound(g, triangulate_grid(g, *l));
        }
    }
}

TEST(triangulate, grid_without_interior_vertex_is_too_small) {
    for (auto [r, c] : std::vector<std::pair<size_t, size_t>>{{1, 1}, {1, 5}, {4, 1}}) {
        Geometry g = make_grid(r, c);
        for (size_t l = 2; l <= 6; l++) {
            try {
                triangulate_grid(g, l);
                FAIL() << r << "x" << c << " L=" << l << " triangulated";
            } catch (const Error &e) {
                EXPECT_EQ(e.code(), ErrorCode::GridTooSmall);
            }
        }
        EXPECT_FALSE(smallest_triangle_size(g).has_value());
    }
}

TEST(triangulate, rejects_edge_placement) {
    EXPECT_THROW(triangulate_grid(make_grid(3, 3, Placement::Edges), 2), Error);
}

TEST(reduce2d, grouping_partitions_and_paths_use_distinct_sides) {
    for (uint64_t seed = 1; seed <= 3; seed++) {
        for (auto [r, c] : std::vector<std::pair<size_t, size_t>>{{2, 2}, {3, 3}}) {
            Instance inst = gen_singular(make_grid(r, c), seed);
            ProverResult pr = prover_search(inst, 10000);
            ASSERT_TRUE(pr.guide.has_value()) << r << "x" << c << " seed " << seed;
            ReductionResult red = guided_reduce_2d(inst, *pr.guide);
            std::set<int> regs;
            for (const auto &reg : red.punctured.registers) {
                regs.insert(reg.id);
            }
            std::set<int> keys;
            for (auto [reg, group] : red.triangulation.grouping) {
                keys.insert(reg);
                EXPECT_TRUE(red.triangulation.grouping.count(group)) << "group id " << group << " is not a member";
                EXPECT_LE(group, reg);
            }
            EXPECT_EQ(keys, regs);
            std::set<std::pair<size_t, int>> sides;
            std::set<std::pair<int, int>> cuts;
            for (const auto &p : red.triangulation.co_paths) {
                EXPECT_TRUE(sides.insert({p.from_triangle, p.side}).second) << "side reused";
                for (const auto &e : p.cut_edges) {
                    EXPECT_TRUE(cuts.insert(e).second) << "edge cut twice";
                }
            }
            EXPECT_LE(max_group_support(red.reduced, {}), 2u);
            for (const auto &t : red.reduced.terms) {
                EXPECT_LE(t.support.size(), 2u);
            }
        }
    }
}

TEST(merge_groups, tensor_order_and_spectrum) {
    Instance inst;
    inst.registers = {{0, 2}, {1, 3}, {2, 2}};
    std::mt19937_64 rng(5);
    inst.terms.push_back(term(0, {2, 0}, build::random_projector_rank(4, 1, rng)));
    inst.terms.push_back(term(1, {1}, build::random_projector_rank(3, 1, rng)));
    Instance merged = merge_groups(inst, {{0, 0}, {1, 1}, {2, 0}});
    ASSERT_EQ(merged.registers.size(), 2u);
    EXPECT_NEAR(oracle::lambda0(merged), oracle::lambda0(inst), 1e-9);
    for (const auto &t : merged.terms) {
        EXPECT_EQ(t.support.size(), 1u);
    }
}

TEST(solve_two_local, one_local_instances) {
    EXPECT_TRUE(solve_two_local(one_qubit({proj(basis(2, 0))})).lambda0_is_zero);
    EXPECT_FALSE(solve_two_local(one_qubit({proj(basis(2, 0)), proj(basis(2, 1))})).lambda0_is_zero);
}

TEST(solve_two_local, rejects_wide_terms) {
    Instance inst;
    inst.registers = {{0, 2}, {1, 2}, {2, 2}};
    Mat p = Mat::Zero(8, 8);
    p(0, 0) = 1;
    inst.terms.push_back(term(0, {0, 1, 2}, p));
    try {
        solve_two_local(inst);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotTwoLocal);
    }
}

TEST(solve_two_local, rejects_non_commuting_pair) {
    Vec plus = (basis(2, 0) + basis(2, 1)) / std::sqrt(2.0);
    try {
        solve_two_local(one_qubit({proj(basis(2, 0)), proj(plus)}));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NonCommuting);
    }
}

TEST(solve_two_local, agrees_with_dense_on_chains) {
    size_t zero = 0, total = 0;
    for (uint64_t seed = 1; seed <= 60; seed++) {
        Instance inst = build::make_chain(2 + seed % 4, seed);
        if (inst.total_dim() > 4096) {
            continue;
        }
        bool dense = std::abs(lambda0_exact(inst).lambda0) <= 1e-8;
        TwoLocalSolution s = solve_two_local(inst);
        EXPECT_FALSE(s.heuristic);
        EXPECT_EQ(s.lambda0_is_zero, dense) << "seed " << seed;
        zero += dense;
        total++;
    }
    EXPECT_GT(zero, 0u);
    EXPECT_LT(zero, total);
}

TEST(prover, zero_budget_is_exhausted) {
    try {
        prover_search(sat_grid(1), 0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BudgetExhausted);
    }
}

TEST(prover, finds_guides_that_verify) {
    for (uint64_t seed = 1; seed <= 4; seed++) {
        Instance inst = sat_grid(seed);
        ASSERT_TRUE(oracle::frustration_free(inst));
        ProverResult pr = prover_search(inst, 10000);
        ASSERT_TRUE(pr.guide.has_value()) << "seed " << seed;
        VerifierVerdict v = verify(inst, *pr.guide);
        EXPECT_TRUE(v.accept) << verdict_json(v);
        ASSERT_TRUE(v.reduced_instance.has_value());
        for (const auto &t : v.reduced_instance->terms) {
            EXPECT_LE(t.support.size(), 2u);
        }
        EXPECT_TRUE(v.certificate && v.certificate->lambda0_is_zero);
        EXPECT_TRUE(std::abs(lambda0_exact(*v.reduced_instance).lambda0) <= 1e-8);
    }
}

TEST(prover, result_does_not_depend_on_jobs) {
    for (uint64_t seed = 1; seed <= 3; seed++) {
        Instance inst = sat_grid(seed);
        ProverOptions one, four;
        four.jobs = 4;
        ProverResult a = prover_search(inst, 10000, one);
        ProverResult b = prover_search(inst, 10000, four);
        ASSERT_EQ(a.guide.has_value(), b.guide.has_value());
        EXPECT_EQ(a.nodes, b.nodes);
        if (a.guide) {
            ASSERT_EQ(a.guide->moves.size(), b.guide->moves.size());
            for (size_t k = 0; k < a.guide->moves.size(); k++) {
                EXPECT_EQ(a.guide->moves[k].register_id, b.guide->moves[k].register_id);
                EXPECT_EQ(a.guide->moves[k].choices, b.guide->moves[k].choices);
            }
        }
    }
}

TEST(prover, unsat_instance_has_no_guide) {
    for (uint64_t seed = 1; seed <= 3; seed++) {
        Instance inst = gen_unsat(make_grid(2, 2), seed);
        ASSERT_FALSE(oracle::frustration_free(inst));
        ProverResult pr = prover_search(inst, 100000);
        EXPECT_FALSE(pr.guide.has_value()) << "seed " << seed;
    }
}

TEST(verify, non_projector_payload_rejects_at_that_move) {
    Instance inst = sat_grid(1);
    Guide guide = *prover_search(inst, 10000).guide;
    Move bad;
    bad.kind = MoveKind::Rank1Round;
    bad.register_id = guide.moves.empty() ? 0 : guide.moves[0].register_id;
    bad.pi_p = Mat::Identity(2, 2) * 0.5;
    bad.pi_q = Mat::Identity(2, 2);
    guide.moves.insert(guide.moves.begin(), bad);
    VerifierVerdict v = verify(inst, guide);
    EXPECT_FALSE(v.accept);
    ASSERT_TRUE(v.failure_step.has_value());
    EXPECT_EQ(*v.failure_step, 0u);
    ASSERT_TRUE(v.reason.has_value());
    EXPECT_NE(v.reason->find("NotProjector"), std::string::npos) << *v.reason;
}

TEST(verify, guide_for_another_instance_rejects) {
    for (uint64_t seed = 1; seed <= 3; seed++) {
        Guide guide = *prover_search(sat_grid(seed), 10000).guide;
        for (uint64_t other = 1; other <= 3; other++) {
            VerifierVerdict v = verify(gen_unsat(make_grid(2, 2), other), guide);
            EXPECT_FALSE(v.accept) << "guide " << seed << " on unsat " << other;
        }
    }
}

TEST(verify, malformed_instance_is_a_verdict) {
    Instance inst = one_qubit({Mat::Ones(2, 2) * Complex(0, 1)});
    VerifierVerdict v;
    EXPECT_NO_THROW(v = verify(inst, Guide{}));
    EXPECT_FALSE(v.accept);
    EXPECT_FALSE(v.failure_step.has_value());
    EXPECT_TRUE(v.reason.has_value());
}

TEST(verify, verdict_json_fields) {
    Instance inst = sat_grid(2);
    VerifierVerdict v = verify(inst, *prover_search(inst, 10000).guide);
    std::string j = verdict_json(v);
    for (const char *key : {"\"accept\":true", "\"failure_step\":null", "\"reason\":null", "\"certificate\"",
                            "\"lambda0_is_zero\":true"}) {
        EXPECT_NE(j.find(key), std::string::npos) << key << " in " << j;
    }
}

TEST(verify, zero_bit_unchanged_after_every_move) {
    for (uint64_t seed = 1; seed <= 4; seed++) {
        Instance inst = sat_grid(seed);
        Guide guide = *prover_search(inst, 10000).guide;
        bool zero = oracle::frustration_free(inst);
        Instance cur = inst;
        for (const auto &m : guide.moves) {
            cur = apply_move(cur, m);
            EXPECT_EQ(std::abs(lambda0_exact(cur).lambda0) <= 1e-8, zero) << "seed " << seed;
        }
    }
}

TEST(qlll, boundary) {
    EXPECT_TRUE(qlll_predicate(4, 2, 4, 1));
    EXPECT_FALSE(qlll_predicate(6, 2, 2, 1));
    EXPECT_FALSE(qlll_predicate(1, 2, 1, 1));
    EXPECT_TRUE(qlll_predicate(5, 2, 4, 1));
    EXPECT_FALSE(qlll_predicate(6, 2, 4, 1));
    EXPECT_THROW(qlll_predicate(0, 2, 4, 1), Error);
}
