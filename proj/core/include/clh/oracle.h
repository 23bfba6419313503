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

#ifndef CLH_ORACLE_H
#define CLH_ORACLE_H

#include <optional>

#include "clh/model.h"

namespace clh {

enum class OracleMethod { Auto, Dense, Iterative, TraceProduct };

const char *oracle_method_name(OracleMethod m);

struct OracleResult {
    double lambda0 = 0;
    OracleMethod method = OracleMethod::Dense;
    size_t dim = 0;
    std::optional<size_t> ground_degeneracy;
    /// Dense: |lambda0| <= 1e-8. Iterative: lambda0 < 0.5 (projector sums have integral spectrum).
    bool is_zero = false;
};

constexpr size_t kDenseLimit = size_t(1) << 12;
constexpr size_t kIterativeLimit = size_t(1) << 20;
/// Auto switches from Dense to Iterative above this dimension.
constexpr size_t kAutoDenseLimit = size_t(1) << 10;
constexpr size_t kTraceLimit = size_t(1) << 12;

/// Smallest eigenvalue of H. Dense up to 2^12, Lanczos up to 2^20; TooLarge beyond.
OracleResult lambda0_exact(const Instance &inst, OracleMethod method = OracleMethod::Auto);

/// y = H x without assembling H.
void apply_hamiltonian(const Instance &inst, const ComplexVector &x, ComplexVector &y);

struct TraceTest {
    double trace = 0;
    double threshold = 0;
    bool frustration_free = false;
};

/// tr prod_j (I - h_j) over the computational basis, compared against 1e-8 * dim.
/// Throws NonCommuting if the instance fails commutation validation.
TraceTest frustration_free_check(const Instance &inst, const Tolerances &tol = Tolerances::defaults(),
                                 unsigned jobs = 1);

/// tr[ prod_k ops_k ] where each op acts on its own support. Ops are applied right to left.
Complex trace_of_product(const Instance &inst, const std::vector<LocalTerm> &ops, unsigned jobs = 1);

struct CommutationAudit {
    /// Operator norm of the worst commutator.
    double max_norm = 0;
    /// Hilbert-Schmidt norm of that same commutator.
    double max_hs_norm = 0;
    std::optional<std::pair<int, int>> worst_pair;
    size_t pairs_checked = 0;
};

CommutationAudit commutation_audit(const Instance &inst);

}  // namespace clh

#endif
