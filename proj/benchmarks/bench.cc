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


#include <benchmark/benchmark.h>

#include "clh/algebra.h"
#include "clh/generators.h"
#include "clh/jordan.h"
#include "clh/oracle.h"
#include "clh/pipeline.h"

using namespace clh;

namespace {

/// Two generators of U (M_3 (x) I_2 + M_2) U^dag.
std::vector<ComplexMatrix> block_generators(Rng &rng) {
    ComplexMatrix u = random_unitary(8, rng);
    std::vector<ComplexMatrix> gens;
    for (int g = 0; g < 2; g++) {
        ComplexMatrix m = ComplexMatrix::Zero(8, 8);
        m.topLeftCorner(6, 6) = kron(random_ginibre(3, 3, rng), identity(2));
        m.bottomRightCorner(2, 2) = random_ginibre(2, 2, rng);
        gens.push_back(u * m * u.adjoint());
    }
    return gens;
}

void BM_structure_decompose(benchmark::State &state) {
    Rng rng(1);
    InducedAlgebra alg = make_algebra(block_generators(rng), 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(structure_decompose(alg));
    }
}
BENCHMARK(BM_structure_decompose);

void BM_jordan_decompose(benchmark::State &state) {
    Rng rng(2);
    size_t d = state.range(0);
    ComplexMatrix p = random_projector(d, d / 2, rng), q = random_projector(d, d / 3, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(jordan_decompose(p, q));
    }
}
BENCHMARK(BM_jordan_decompose)->Arg(4)->Arg(16)->Arg(64);

void BM_lambda0(benchmark::State &state) {
    // Dense on 9 qubits, Lanczos on 12.
    bool dense = state.range(0) == 0;
    Instance inst = dense ? gen_mixed(2, 2, 1) : gen_mixed(2, 3, 1);
    OracleMethod method = dense ? OracleMethod::Dense : OracleMethod::Iterative;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lambda0_exact(inst, method));
    }
}
BENCHMARK(BM_lambda0)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_trace_test(benchmark::State &state) {
    Instance inst = gen_mixed(2, 2, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(frustration_free_check(inst, Tolerances::defaults(), state.range(0)));
    }
}
BENCHMARK(BM_trace_test)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_prove_and_verify(benchmark::State &state) {
    Instance inst = gen_mixed(2, 2, 1);
    for (auto _ : state) {
        ProverResult pr = prover_search(inst, 100000);
        benchmark::DoNotOptimize(verify(inst, *pr.guide));
    }
}
BENCHMARK(BM_prove_and_verify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
