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

#ifndef CLH_PUNCTURE_H
#define CLH_PUNCTURE_H

#include <optional>
#include <string>
#include <vector>

#include "clh/model.h"

namespace clh {

/// Terms acting non-trivially on a register in cyclic order h_1, ..., h_k, with
/// Q = {h_1, h_3, ...} and P = {h_2, h_4, ...}. For odd k, h_k joins Q merged into h_1.
struct AlternatingGrouping {
    int register_id = 0;
    std::vector<int> order;
    std::vector<int> p_set;
    std::vector<int> q_set;
    std::optional<std::pair<int, int>> merged_pair;
};

/// Throws NoCyclicOrder unless consecutive terms share at least two registers and all other
/// pairs share only the register.
AlternatingGrouping group_alternating(const Instance &inst, int register_id,
                                      const Tolerances &tol = Tolerances::defaults());

enum class RegisterFate { Retained, Classicalized, Removed };

const char *register_fate_name(RegisterFate f);

struct PunctureOutcome {
    /// 1: a single incident term survives; 2: one merged term; 3: nothing acts on the register.
    int case_tag = 0;
    std::vector<LocalTerm> new_terms;
    std::vector<int> removed_term_ids;
    std::optional<std::vector<int>> merged_support;
    RegisterFate register_fate = RegisterFate::Retained;
    Instance instance;
    /// <psi|phi>^2 (both singular) or alpha = <psi|pi_Q|psi> (one singular); 1 otherwise.
    double scalar = 1;
    std::string detail;
};

/// Block projectors the prover chooses from for one side of the grouping, in the order the
/// guide indexes them: descending dimension, then first basis index.
std::vector<ComplexMatrix> puncture_blocks(const Instance &inst, int register_id, const std::vector<int> &side,
                                           const Tolerances &tol = Tolerances::defaults());

/// Working copy with an odd grouping's pair merged into one term (Q1 + Qk - Q1 Qk).
Instance apply_grouping_merge(const Instance &inst, const AlternatingGrouping &g,
                              const Tolerances &tol = Tolerances::defaults());

/// choices = {block of the P side, block of the Q side}.
PunctureOutcome puncture_deg4(const Instance &inst, int register_id, const std::vector<size_t> &choices,
                              const Tolerances &tol = Tolerances::defaults());
PunctureOutcome puncture_general(const Instance &inst, int register_id, const std::vector<size_t> &choices,
                                 const Tolerances &tol = Tolerances::defaults());

/// Exactly two terms may act non-trivially on the register; they are decoupled by the 2-local
/// rounding with the chosen block.
PunctureOutcome resolve_blockage(const Instance &inst, int register_id, size_t block,
                                 const Tolerances &tol = Tolerances::defaults());

/// ids of incident terms acting non-trivially on the register, ascending.
std::vector<int> nontrivial_incident(const Instance &inst, int register_id,
                                     const Tolerances &tol = Tolerances::defaults());

}  // namespace clh

#endif
