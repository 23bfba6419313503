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

#ifndef CLH_GUIDE_H
#define CLH_GUIDE_H

#include <optional>
#include <string>
#include <vector>

#include "clh/numerics.h"

namespace clh {

enum class MoveKind {
    TwoLocalRound,
    Rank1Round,
    ClassicalRestrict,
    SemiSepBranch,
    PunctureChoice,
    ResolveBlockage,
};

std::string move_kind_name(MoveKind kind);
std::optional<MoveKind> parse_move_kind(const std::string &name);

/// One prover decision. Which payload fields are meaningful depends on `kind`:
///   TwoLocalRound, ResolveBlockage: index = block
///   Rank1Round: pi_p, pi_q
///   ClassicalRestrict: index = basis vector, basis (columns)
///   SemiSepBranch: index = branch, projectors, exceptional_term
///   PunctureChoice: choices = (a, b) block per pair
struct Move {
    MoveKind kind = MoveKind::TwoLocalRound;
    int register_id = 0;
    size_t index = 0;
    ComplexMatrix pi_p;
    ComplexMatrix pi_q;
    ComplexMatrix basis;
    std::vector<ComplexMatrix> projectors;
    int exceptional_term = -1;
    std::vector<size_t> choices;
};

struct Guide {
    std::vector<Move> moves;
    /// Set for guides that drive the 2D reduction pipeline.
    std::optional<size_t> triangle_size;
};

/// Problems with projector payloads (non-Hermitian or non-idempotent); empty if none.
std::vector<std::string> check_guide_payloads(const Guide &guide, const Tolerances &tol = Tolerances::defaults());

}  // namespace clh

#endif
