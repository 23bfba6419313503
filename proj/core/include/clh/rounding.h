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

#ifndef CLH_ROUNDING_H
#define CLH_ROUNDING_H

#include <optional>
#include <vector>

#include "clh/algebra.h"
#include "clh/model.h"

namespace clh {

/// Entries tr[prod_S (pi1_i - pi1_i h pi1_i) prod_T (pi2_j - pi2_j h pi2_j) prod_rest (I - h)].
struct TraceTable {
    std::vector<std::vector<double>> entries;
    double threshold = 0;

    bool any_positive() const;
    double min_entry() const;
};

/// Verifies that each family is a complete set of orthogonal projectors on its register, that
/// terms outside T commute with family 1 and terms outside S with family 2, then fills the table.
TraceTable equiv_projector_check(const Instance &inst, int register1, const std::vector<ComplexMatrix> &povm1,
                                 int register2, const std::vector<ComplexMatrix> &povm2, const std::vector<int> &s,
                                 const std::vector<int> &t, const Tolerances &tol = Tolerances::defaults(),
                                 unsigned jobs = 1);

struct RoundingArtifacts {
    int register_id = 0;
    ComplexMatrix pi_p;
    ComplexMatrix pi_q;
    /// Terms P (commutes with pi_p, not with pi_q) and Q (vice versa); -1 when absent.
    int p_term = -1;
    int q_term = -1;
    std::vector<int> rest_terms;
    std::vector<int> dropped_terms;
    /// All operators below live on merged_support.
    std::vector<int> merged_support;
    ComplexMatrix p_tilde;
    ComplexMatrix q_tilde;
    ComplexMatrix delta;
    ComplexMatrix pi_p_bprime;
    ComplexMatrix pi_qtilde_bprime;
    ComplexMatrix bprime;
    bool degenerate = false;
    int merged_term = -1;
};

struct Rank1RoundResult {
    Instance instance;
    RoundingArtifacts artifacts;
};

/// Both projectors act on `register_id`. Terms killed by either projector are dropped, P and Q are
/// replaced by I - Delta on their union support, and the remaining terms are kept unchanged.
Rank1RoundResult rank1_round(const Instance &inst, int register_id, const ComplexMatrix &pi_p,
                             const ComplexMatrix &pi_q, const Tolerances &tol = Tolerances::defaults());

/// One leaf of the iterated two-term decomposition of a register whose incident terms pairwise
/// overlap only on it. The isometry maps (x)_h C^{factor_dims[h]} into the register.
struct TwoLocalBlock {
    ComplexMatrix isometry;
    std::vector<int> terms;
    std::vector<size_t> factor_dims;
};

/// check_commutation = false skips the pairwise commutator check for callers that already made it.
std::vector<TwoLocalBlock> two_local_blocks(const Instance &inst, int register_id,
                                            const Tolerances &tol = Tolerances::defaults(),
                                            bool check_commutation = true);

/// Replaces the register by one sub-register per incident term (dims > 1 only) inside the chosen
/// block; each term keeps only its own sub-register. New register ids are appended.
Instance two_local_round(const Instance &inst, int register_id, size_t block_index,
                         const Tolerances &tol = Tolerances::defaults());
/// two_local_round with the blocks of `register_id` already computed.
Instance apply_two_local_block(const Instance &inst, int register_id, const std::vector<TwoLocalBlock> &blocks,
                               size_t block_index, const Tolerances &tol = Tolerances::defaults());

/// Removes the register, replacing each incident h by <b_i| h |b_i>.
Instance classical_restrict(const Instance &inst, int register_id, size_t basis_index, const ComplexMatrix &basis,
                            const Tolerances &tol = Tolerances::defaults());

Instance semi_separable_reduce(const Instance &inst, const SemiSeparableWitness &witness, size_t branch,
                               const Tolerances &tol = Tolerances::defaults());

/// Restricts the register to range(V) (V an isometry, columns become the new basis) and
/// compresses every incident term. Terms that vanish are removed.
Instance restrict_register(const Instance &inst, int register_id, const ComplexMatrix &isometry,
                           const Tolerances &tol = Tolerances::defaults());

/// Removes the register by contracting every incident term with the state v.
Instance contract_register(const Instance &inst, int register_id, const ComplexVector &v,
                           const Tolerances &tol = Tolerances::defaults());

/// Drops terms with norm below EPS_COMM and removes registers with trivial action from supports.
Instance tidy(const Instance &inst, const Tolerances &tol = Tolerances::defaults());

}  // namespace clh

#endif
