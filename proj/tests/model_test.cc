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

#include <gtest/gtest.h>

#include "clh/generators.h"
#include "clh/model.h"
#include "clh/oracle.h"
#include "clh/serialize.h"
#include "oracles.h"

using namespace clh;

namespace {

Instance two_qubit(const ComplexMatrix &a, const ComplexMatrix &b) {
    Instance inst;
    inst.registers = {{0, 2}, {1, 2}, {2, 2}};
    inst.terms.push_back({0, {0, 1}, a, std::nullopt, std::nullopt});
    inst.terms.push_back({1, {1, 2}, b, std::nullopt, std::nullopt});
    return inst;
}

ComplexMatrix proj00() {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1;
    return m;
}

}  // namespace

TEST(model, validate_accepts_generated_instances) {
    for (uint64_t seed = 0; seed < 5; seed++) {
        Geometry g = make_grid(2, 2, Placement::Vertices);
        EXPECT_TRUE(validate(gen_classical(g, seed)).ok());
        EXPECT_TRUE(validate(gen_singular(g, seed)).ok());
        EXPECT_TRUE(validate(gen_reducing(g, seed)).ok());
        EXPECT_TRUE(validate(gen_mixed(2, 3, seed)).ok());
        EXPECT_TRUE(validate(gen_unsat(g, seed)).ok());
    }
}

TEST(model, validate_flags_problems) {
    ComplexMatrix x = ComplexMatrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1;
    ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
    ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
    zero(0, 0) = 1;
    Instance bad = two_qubit(kron(identity(2), zero), kron(plus, identity(2)));
    auto rep = validate(bad);
    EXPECT_TRUE(rep.has("NonCommuting"));

    Instance neg = two_qubit(-proj00(), proj00());
    EXPECT_TRUE(validate(neg).has("NotPSD"));

    Instance big = two_qubit(2.0 * proj00(), proj00());
    EXPECT_TRUE(validate(big).has("NormBound"));

    Instance nh = two_qubit(proj00(), proj00());
    nh.terms[0].matrix(0, 1) = 0.3;
    EXPECT_TRUE(validate(nh).has("NotHermitian"));

    Instance unknown = two_qubit(proj00(), proj00());
    unknown.terms[1].support = {1, 7};
    EXPECT_TRUE(validate(unknown).has("UnknownRegister"));

    Instance dup = two_qubit(proj00(), proj00());
    dup.terms[1].support = {0, 0};
    EXPECT_TRUE(validate(dup).has("DuplicateSupport"));

    Instance rank = two_qubit(proj00(), proj00());
    rank.terms[0].rank = 2;
    EXPECT_TRUE(validate(rank).has("RankMismatch"));
}

TEST(model, degree_counts_nontrivial_action) {
    Instance inst = two_qubit(proj00(), kron(identity(2), ComplexMatrix(proj00().topLeftCorner(2, 2))));
    auto rep = degree_report(inst);
    EXPECT_EQ(rep.degree.at(0), 1u);
    EXPECT_EQ(rep.degree.at(1), 1u);
    EXPECT_EQ(rep.degree.at(2), 1u);
    Instance g = gen_mixed(2, 2, 3);
    EXPECT_EQ(degree_report(g).max_degree, 4u);
}

TEST(model, canonical_unsat_has_positive_energy) {
    auto r = lambda0_exact(canonical_unsat());
    EXPECT_NEAR(r.lambda0, 1, 1e-12);
    EXPECT_FALSE(r.is_zero);
}

TEST(oracle_methods, dense_iterative_trace_agree) {
    for (uint64_t seed = 1; seed <= 6; seed++) {
        Instance inst = seed % 2 ? gen_mixed(2, 2, seed) : gen_unsat(make_grid(2, 2, Placement::Vertices), seed);
        double want = oracle::lambda0(inst);
        auto dense = lambda0_exact(inst, OracleMethod::Dense);
        auto iter = lambda0_exact(inst, OracleMethod::Iterative);
        auto trace = frustration_free_check(inst);
        EXPECT_NEAR(dense.lambda0, want, 1e-9);
        EXPECT_NEAR(iter.lambda0, want, 1e-7);
        EXPECT_EQ(trace.frustration_free, std::abs(want) <= 1e-8);
        EXPECT_EQ(dense.is_zero, std::abs(want) <= 1e-8);
    }
}

TEST(oracle_methods, trace_is_independent_of_jobs) {
    Instance inst = gen_mixed(2, 3, 4);
    auto one = frustration_free_check(inst, Tolerances::defaults(), 1);
    auto four = frustration_free_check(inst, Tolerances::defaults(), 4);
    EXPECT_EQ(one.trace, four.trace);
}

TEST(oracle_methods, rejects_oversized) {
    Instance inst;
    for (int r = 0; r < 13; r++) {
        inst.registers.push_back({r, 2});
    }
    inst.terms.push_back({0, {0}, identity(2), std::nullopt, std::nullopt});
    try {
        lambda0_exact(inst, OracleMethod::Dense);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::TooLarge);
    }
}

TEST(serialize, round_trip_is_bit_exact) {
    for (uint64_t seed = 0; seed < 10; seed++) {
        Instance inst = gen_mixed(2, 2, seed);
        std::string a = serialize_instance(inst);
        Instance back = deserialize_instance(a);
        EXPECT_EQ(serialize_instance(back), a);
        for (size_t t = 0; t < inst.terms.size(); t++) {
            EXPECT_TRUE((inst.terms[t].matrix.array() == back.terms[t].matrix.array()).all());
        }
    }
}

TEST(serialize, malformed_inputs_raise_parse_error) {
    const char *bad[] = {
        "",
        "{",
        "[]",
        R"({"version":2,"registers":[],"terms":[]})",
        R"({"version":1,"registers":[{"id":0}],"terms":[]})",
        R"({"version":1,"registers":[{"id":0,"dim":2}],"terms":[{"id":0,"support":[0],"matrix":{"dim":2,"entries":[[1,0]]}}]})",
        R"({"version":1,"registers":[{"id":0,"dim":2}],"terms":[{"id":0,"support":[0],"matrix":{"dim":1,"entries":[["a",0]]}}]})",
    };
    for (const char *text : bad) {
        try {
            deserialize_instance(text);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), ErrorCode::ParseError) << text;
        }
    }
}

TEST(serialize, malformed_guide_raises_parse_error) {
    try {
        deserialize_guide(R"({"version":1,"moves":[{"op":"teleport","register":0}]})");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
    }
}
