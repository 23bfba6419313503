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

#include "clh/numerics.h"

#include <gtest/gtest.h>

#include "oracles.h"

using namespace clh;

TEST(numerics, eig_of_identity_and_diagonal) {
    auto e = hermitian_eig(identity(2));
    EXPECT_NEAR(e.eigenvalues(0), 1, 1e-15);
    EXPECT_NEAR(e.eigenvalues(1), 1, 1e-15);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 3;
    d(1, 1) = -1;
    auto f = hermitian_eig(d);
    EXPECT_NEAR(f.eigenvalues(0), -1, 1e-15);
    EXPECT_NEAR(f.eigenvalues(1), 3, 1e-15);
    EXPECT_NEAR(std::abs(f.eigenvectors(1, 0)), 1, 1e-15);
}

TEST(numerics, eig_rejects_non_hermitian) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1;
    try {
        hermitian_eig(m);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
    }
}

TEST(numerics, eig_reconstruction_random) {
    Rng rng(1);
    for (int t = 0; t < 20; t++) {
        ComplexMatrix h = random_hermitian(8, rng);
        auto e = hermitian_eig(h);
        ComplexMatrix r = e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
        EXPECT_LE((r - h).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, h.cwiseAbs().maxCoeff()));
        EXPECT_LE((e.eigenvectors.adjoint() * e.eigenvectors - identity(8)).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(numerics, operator_schmidt_examples) {
    ComplexMatrix z(2, 2), x(2, 2);
    z << 1, 0, 0, -1;
    x << 0, 1, 1, 0;
    auto s = operator_schmidt(kron(z, x), 2, 2);
    ASSERT_EQ(s.triples.size(), 1u);
    EXPECT_NEAR(s.triples[0].coefficient, 2, 1e-12);
    Rng rng(4);
    for (int t = 0; t < 10; t++) {
        ComplexMatrix m = random_ginibre(6, 6, rng);
        auto r = operator_schmidt(m, 2, 3);
        EXPECT_LE((r.recombine() - m).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff()));
        for (size_t i = 0; i < r.triples.size(); i++) {
            for (size_t j = 0; j < r.triples.size(); j++) {
                Complex ia = (r.triples[i].a.adjoint() * r.triples[j].a).trace();
                Complex ib = (r.triples[i].b.adjoint() * r.triples[j].b).trace();
                EXPECT_NEAR(std::abs(ia), i == j ? 1.0 : 0.0, 1e-9);
                EXPECT_NEAR(std::abs(ib), i == j ? 1.0 : 0.0, 1e-9);
            }
        }
    }
}

TEST(numerics, embed_and_partial_trace_match_oracle) {
    Rng rng(9);
    std::vector<size_t> dims{2, 3, 2};
    ComplexMatrix op = random_ginibre(4, 4, rng);
    EXPECT_LE((embed_local(op, {2, 0}, dims) - oracle::embed(op, {2, 0}, dims)).cwiseAbs().maxCoeff(), 1e-12);
    ComplexMatrix m = random_ginibre(12, 12, rng);
    for (size_t pos = 0; pos < 3; pos++) {
        ComplexMatrix pt = partial_trace(m, {pos}, dims);
        EXPECT_LE((pt - oracle::marginal(m, dims, pos)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(numerics, permute_factors_round_trip) {
    Rng rng(2);
    std::vector<size_t> dims{2, 3, 4};
    ComplexMatrix a = random_ginibre(2, 2, rng), b = random_ginibre(3, 3, rng), c = random_ginibre(4, 4, rng);
    ComplexMatrix m = kron(kron(a, b), c);
    ComplexMatrix p = permute_factors(m, dims, {2, 0, 1});
    EXPECT_LE((p - kron(kron(c, a), b)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(numerics, compress_and_reduce_factor) {
    Rng rng(3);
    ComplexMatrix a = random_hermitian(2, rng), b = random_hermitian(3, rng);
    ComplexMatrix v = random_unitary(3, rng).leftCols(2);
    ComplexMatrix m = kron(a, b);
    ComplexMatrix c = compress_factor(m, {2, 3}, 1, v);
    EXPECT_LE((c - kron(a, v.adjoint() * b * v)).cwiseAbs().maxCoeff(), 1e-12);
    ComplexMatrix t = kron(identity(2), b);
    EXPECT_LE(identity_factor_residual(t, {2, 3}, 0), 1e-12);
    EXPECT_LE((reduce_factor(t, {2, 3}, 0) - b).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(identity_factor_residual(m, {2, 3}, 0), 1e-3);
}

TEST(numerics, round_spectrum_behaviour) {
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = 0.3;
    d(1, 1) = 1;
    ComplexMatrix r = round_spectrum(d);
    EXPECT_NEAR(r(0, 0).real(), 1, 1e-12);
    EXPECT_NEAR(r(1, 1).real(), 1, 1e-12);
    EXPECT_NEAR(r(2, 2).real(), 0, 1e-12);
    d(2, 2) = -0.5;
    try {
        round_spectrum(d);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotPSD);
    }
    d(2, 2) = 0;
    ComplexMatrix s = spectral_projector_at_least(d, 1 - 1e-6);
    EXPECT_NEAR(s(0, 0).real(), 0, 1e-12);
    EXPECT_NEAR(s(1, 1).real(), 1, 1e-12);
}

TEST(numerics, op_norm_agrees_with_svd) {
    Rng rng(8);
    for (int t = 0; t < 10; t++) {
        ComplexMatrix m = random_ginibre(7, 7, rng);
        EXPECT_NEAR(op_norm(m), oracle::opnorm(m), 1e-10);
        ComplexMatrix h = random_hermitian(7, rng);
        EXPECT_NEAR(op_norm(h), oracle::opnorm(h), 1e-10);
    }
}
