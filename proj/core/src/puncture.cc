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

#include "clh/puncture.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "clh/algebra.h"
#include "clh/rounding.h"

namespace clh {

namespace {

bool contains(const std::vector<int> &v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

size_t position_in(const LocalTerm &t, int register_id) {
    return std::find(t.support.begin(), t.support.end(), register_id) - t.support.begin();
}

double survival(const Instance &inst, const LocalTerm &h, int reg, const ComplexMatrix &pi) {
    ComplexMatrix l = embed_local(pi, {position_in(h, reg)}, inst.support_dims(h.support));
    return op_norm(l * h.matrix * l);
}

/// <v| h |v> on the register, with the register removed from the support.
LocalTerm contract_term(const Instance &inst, const LocalTerm &h, int reg, const ComplexVector &v) {
    LocalTerm out = h;
    size_t pos = position_in(h, reg);
    out.matrix = compress_factor(h.matrix, inst.support_dims(h.support), pos, ComplexMatrix(v));
    out.matrix = (out.matrix + out.matrix.adjoint()).eval() * 0.5;
    out.support.erase(out.support.begin() + pos);
    return out;
}

ComplexVector rank1_vector(const ComplexMatrix &pi, const Tolerances &tol) {
    HermitianEig e = hermitian_eig(pi, tol);
    ComplexVector v = e.eigenvectors.col(e.eigenvectors.cols() - 1);
    phase_normalize(v);
    return v;
}

void push_or_scalar(Instance &out, LocalTerm t, const Tolerances &tol) {
    if (op_norm(t.matrix) <= tol.comm) {
        return;
    }
    if (t.support.empty()) {
        int reg = out.next_register_id();
        out.registers.push_back({reg, 1});
        t.support = {reg};
    }
    if (t.rank) {
        t.rank = numerical_rank(t.matrix, tol);
    }
    out.terms.push_back(std::move(t));
}

void record_hole(PunctureOutcome &out, int reg, const std::vector<int> &incident) {
    if (!out.instance.geometry) {
        return;
    }
    Hole hole{reg, {}};
    for (const auto &t : out.instance.terms) {
        if (contains(incident, t.id) || contains(t.support, reg)) {
            hole.surviving_terms.push_back(t.id);
        }
    }
    out.instance.geometry->holes.push_back(std::move(hole));
}

}  // namespace

const char *register_fate_name(RegisterFate f) {
    switch (f) {
        case RegisterFate::Retained: return "retained";
        case RegisterFate::Classicalized: return "classicalized";
        case RegisterFate::Removed: return "removed";
    }
    return "unknown";
}

std::vector<int> nontrivial_incident(const Instance &inst, int register_id, const Tolerances &tol) {
    std::vector<int> out;
    for (int id : inst.incident_terms(register_id)) {
        if (!acts_trivially_on(inst, inst.term(id), register_id, tol)) {
            out.push_back(id);
        }
    }
    return out;
}

AlternatingGrouping group_alternating(const Instance &inst, int register_id, const Tolerances &tol) {
    std::vector<int> terms = nontrivial_incident(inst, register_id, tol);
    size_t k = terms.size();
    if (k < 3) {
        fail(ErrorCode::NoCyclicOrder, "register " + std::to_string(register_id) + " has only " +
                                           std::to_string(k) + " non-trivial terms");
    }
    std::vector<std::vector<size_t>> adj(k);
    for (size_t a = 0; a < k; a++) {
        for (size_t b = a + 1; b < k; b++) {
            auto ov = support_intersection(inst.term(terms[a]).support, inst.term(terms[b]).support);
            if (ov.size() >= 2) {
                adj[a].push_back(b);
                adj[b].push_back(a);
            }
        }
    }
    for (size_t a = 0; a < k; a++) {
        if (adj[a].size() != 2) {
            fail(ErrorCode::NoCyclicOrder, "term " + std::to_string(terms[a]) + " has " +
                                               std::to_string(adj[a].size()) + " edge-sharing neighbours");
        }
    }
    std::vector<size_t> order{0};
    size_t prev = 0, cur = std::min(adj[0][0], adj[0][1]);
    while (cur != 0) {
        order.push_back(cur);
        size_t next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
        prev = cur;
        cur = next;
        if (order.size() > k) {
            break;
        }
    }
    if (order.size() != k) {
        fail(ErrorCode::NoCyclicOrder, "edge-sharing terms around register " + std::to_string(register_id) +
                                           " do not form a single cycle");
    }
    AlternatingGrouping g;
    g.register_id = register_id;
    for (size_t i : order) {
        g.order.push_back(terms[i]);
    }
    for (size_t i = 0; i < k; i++) {
        for (size_t j = i + 2; j < k; j++) {
            if (i == 0 && j == k - 1) {
                continue;
            }
            auto ov = support_intersection(inst.term(g.order[i]).support, inst.term(g.order[j]).support);
            if (ov.size() != 1) {
                fail(ErrorCode::NoCyclicOrder, "non-consecutive terms " + std::to_string(g.order[i]) + " and " +
                                                   std::to_string(g.order[j]) + " share more than the register");
            }
        }
    }
    size_t even_k = k - (k % 2);
    for (size_t i = 0; i < even_k; i++) {
        (i % 2 == 0 ? g.q_set : g.p_set).push_back(g.order[i]);
    }
    if (k % 2) {
        g.merged_pair = std::make_pair(g.order[0], g.order[k - 1]);
    }
    return g;
}

Instance apply_grouping_merge(const Instance &inst, const AlternatingGrouping &g, const Tolerances &tol) {
    if (!g.merged_pair) {
        return inst;
    }
    auto [a, b] = *g.merged_pair;
    const LocalTerm &ta = inst.term(a);
    const LocalTerm &tb = inst.term(b);
    std::vector<int> u = support_union(ta.support, tb.support);
    ComplexMatrix ma = term_on(inst, ta, u), mb = term_on(inst, tb, u);
    LocalTerm merged = ta;
    merged.support = u;
    merged.matrix = ma + mb - ma * mb;
    merged.matrix = (merged.matrix + merged.matrix.adjoint()).eval() * 0.5;
    merged.rank = numerical_rank(merged.matrix, tol);
    Instance out = inst;
    out.terms.clear();
    for (const auto &t : inst.terms) {
        if (t.id == a) {
            out.terms.push_back(merged);
        } else if (t.id != b) {
            out.terms.push_back(t);
        }
    }
    out.provenance.push_back("merged terms " + std::to_string(a) + " and " + std::to_string(b) + " into " +
                             std::to_string(a));
    return out;
}

std::vector<ComplexMatrix> puncture_blocks(const Instance &inst, int register_id, const std::vector<int> &side,
                                           const Tolerances &tol) {
    InducedAlgebra alg = joint_induced_algebra(inst, side, register_id, tol);
    return block_projectors(structure_decompose(alg, tol));
}

PunctureOutcome puncture_general(const Instance &inst, int register_id, const std::vector<size_t> &choices,
                                 const Tolerances &tol) {
    std::vector<int> actors = nontrivial_incident(inst, register_id, tol);
    if (actors.size() < 4) {
        fail(ErrorCode::PreconditionViolated, "register " + std::to_string(register_id) + " has degree " +
                                                  std::to_string(actors.size()) + " < 4");
    }
    if (choices.size() != 2) {
        fail(ErrorCode::PreconditionViolated, "puncturing needs one block choice per side");
    }
    AlternatingGrouping g = group_alternating(inst, register_id, tol);
    Instance w = apply_grouping_merge(inst, g, tol);
    for (int id : g.order) {
        if (g.merged_pair && (id == g.merged_pair->first || id == g.merged_pair->second)) {
            continue;
        }
        if (numerical_rank(w.term(id).matrix, tol) != 1) {
            fail(ErrorCode::PreconditionViolated, "term " + std::to_string(id) + " is not rank 1");
        }
    }
    std::vector<ComplexMatrix> bp = puncture_blocks(w, register_id, g.p_set, tol);
    std::vector<ComplexMatrix> bq = puncture_blocks(w, register_id, g.q_set, tol);
    if (choices[0] >= bp.size() || choices[1] >= bq.size()) {
        fail(ErrorCode::BlockOutOfRange, "block choice (" + std::to_string(choices[0]) + ", " +
                                             std::to_string(choices[1]) + ") outside " + std::to_string(bp.size()) +
                                             " x " + std::to_string(bq.size()));
    }
    const ComplexMatrix &pi_p = bp[choices[0]];
    const ComplexMatrix &pi_q = bq[choices[1]];
    std::vector<int> sp, sq, killed;
    for (int id : g.p_set) {
        (survival(w, w.term(id), register_id, pi_p) > tol.comm ? sp : killed).push_back(id);
    }
    for (int id : g.q_set) {
        (survival(w, w.term(id), register_id, pi_q) > tol.comm ? sq : killed).push_back(id);
    }

    PunctureOutcome out;
    std::ostringstream detail;
    detail << "puncture register " << register_id << " blocks (" << choices[0] << ", " << choices[1]
           << ") survivors P=" << sp.size() << " Q=" << sq.size();

    if (sp.size() <= 1 && sq.size() <= 1) {
        Rank1RoundResult r = rank1_round(w, register_id, pi_p, pi_q, tol);
        out.instance = std::move(r.instance);
        out.removed_term_ids = killed;
        for (int id : {r.artifacts.p_term, r.artifacts.q_term}) {
            if (id >= 0) {
                out.removed_term_ids.push_back(id);
            }
        }
        bool merged_pair = r.artifacts.p_term >= 0 && r.artifacts.q_term >= 0;
        if (r.artifacts.degenerate) {
            detail << " degenerate";
        } else if (r.artifacts.p_term < 0 && r.artifacts.q_term < 0) {
            // I - Delta is 1-local on the register: equivalent to restricting it to B'.
            out.instance = tidy(restrict_register(out.instance, register_id, r.artifacts.bprime, tol), tol);
        } else {
            out.merged_support = r.artifacts.merged_support;
            for (const auto &t : out.instance.terms) {
                if (t.id == r.artifacts.merged_term) {
                    out.new_terms.push_back(t);
                }
            }
        }
        size_t remaining = out.instance.has_register(register_id)
                               ? nontrivial_incident(out.instance, register_id, tol).size()
                               : 0;
        if (merged_pair && !r.artifacts.degenerate) {
            out.case_tag = 2;
        } else {
            out.case_tag = remaining == 0 ? 3 : 1;
        }
        if (remaining == 0) {
            out.register_fate =
                out.instance.has_register(register_id) ? RegisterFate::Classicalized : RegisterFate::Removed;
        }
        detail << " remaining=" << remaining;
        out.detail = detail.str();
        out.instance.provenance.push_back(out.detail);
        record_hole(out, register_id, g.order);
        return out;
    }

    // At least one side keeps two or more terms: that block is one-dimensional and the register
    // is fixed to its state.
    bool p_major = sp.size() >= 2;
    const std::vector<int> &major = p_major ? sp : sq;
    const std::vector<int> &minor = p_major ? sq : sp;
    const ComplexMatrix &pi_major = p_major ? pi_p : pi_q;
    const ComplexMatrix &pi_minor = p_major ? pi_q : pi_p;
    if (numerical_rank(pi_major, tol) != 1) {
        fail(ErrorCode::PreconditionViolated, "several terms survive a block of dimension > 1");
    }
    ComplexVector psi = rank1_vector(pi_major, tol);
    std::optional<ComplexVector> phi;
    if (minor.size() >= 2) {
        if (numerical_rank(pi_minor, tol) != 1) {
            fail(ErrorCode::PreconditionViolated, "several terms survive a block of dimension > 1");
        }
        phi = rank1_vector(pi_minor, tol);
        out.scalar = std::norm(psi.dot(*phi));
        detail << " overlap^2=" << out.scalar;
    } else {
        out.scalar = (psi.adjoint() * pi_minor * psi)(0, 0).real();
        detail << " alpha=" << out.scalar;
    }
    if (out.scalar < 1e-12) {
        fail(ErrorCode::VacuousBlock, detail.str() + ": vanishing scalar, choose another block");
    }

    Instance res = w;
    res.terms.clear();
    res.registers.erase(std::remove_if(res.registers.begin(), res.registers.end(),
                                       [&](const Register &r) { return r.id == register_id; }),
                        res.registers.end());
    for (const auto &t : w.terms) {
        if (!contains(t.support, register_id)) {
            res.terms.push_back(t);
            continue;
        }
        if (contains(killed, t.id)) {
            out.removed_term_ids.push_back(t.id);
            continue;
        }
        LocalTerm nt;
        if (contains(major, t.id)) {
            nt = contract_term(w, t, register_id, psi);
        } else if (contains(minor, t.id)) {
            if (phi) {
                nt = contract_term(w, t, register_id, *phi);
            } else {
                // alpha psi - psi h psi rounds to psi - R(psi h psi): keep the support projector.
                nt = contract_term(w, t, register_id, psi);
                nt.matrix = round_spectrum(nt.matrix, tol);
            }
        } else {
            nt = contract_term(w, t, register_id, psi);
        }
        out.new_terms.push_back(nt);
        push_or_scalar(res, std::move(nt), tol);
    }
    out.case_tag = 3;
    out.register_fate = RegisterFate::Classicalized;
    out.instance = std::move(res);
    out.detail = detail.str();
    out.instance.provenance.push_back(out.detail);
    record_hole(out, register_id, g.order);
    return out;
}

PunctureOutcome puncture_deg4(const Instance &inst, int register_id, const std::vector<size_t> &choices,
                              const Tolerances &tol) {
    std::vector<int> actors = nontrivial_incident(inst, register_id, tol);
    if (actors.size() != 4) {
        fail(ErrorCode::PreconditionViolated, "register " + std::to_string(register_id) + " has degree " +
                                                  std::to_string(actors.size()) + ", expected 4");
    }
    return puncture_general(inst, register_id, choices, tol);
}

PunctureOutcome resolve_blockage(const Instance &inst, int register_id, size_t block, const Tolerances &tol) {
    std::vector<int> actors = nontrivial_incident(inst, register_id, tol);
    if (actors.size() > 2) {
        fail(ErrorCode::MoreThanTwoActors, "register " + std::to_string(register_id) + " has " +
                                               std::to_string(actors.size()) + " non-trivial terms");
    }
    Instance w = inst;
    for (auto &t : w.terms) {
        if (contains(t.support, register_id) && !contains(actors, t.id)) {
            size_t pos = position_in(t, register_id);
            std::vector<size_t> dims = inst.support_dims(t.support);
            t.matrix = reduce_factor(t.matrix, dims, pos);
            t.support.erase(t.support.begin() + pos);
        }
    }
    w.terms.erase(std::remove_if(w.terms.begin(), w.terms.end(), [](const LocalTerm &t) { return t.support.empty(); }),
                  w.terms.end());
    PunctureOutcome out;
    out.instance = two_local_round(w, register_id, block, tol);
    if (w.geometry) {
        out.instance.geometry = w.geometry;
        for (const auto &r : out.instance.registers) {
            if (!w.has_register(r.id)) {
                out.instance.geometry->grouping[r.id] = register_id;
            }
        }
    }
    out.register_fate = RegisterFate::Retained;
    std::vector<int> now;
    for (const auto &t : out.instance.terms) {
        if (contains(actors, t.id)) {
            now.push_back(t.id);
            out.new_terms.push_back(t);
        }
    }
    for (int id : actors) {
        if (!contains(now, id)) {
            out.removed_term_ids.push_back(id);
        }
    }
    out.case_tag = now.size() <= 1 ? 1 : 3;
    out.detail = "resolve_blockage register " + std::to_string(register_id) + " block " + std::to_string(block) +
                 " actors " + std::to_string(actors.size()) + " -> " + std::to_string(now.size());
    out.instance.provenance.push_back(out.detail);
    record_hole(out, register_id, actors);
    return out;
}

}  // namespace clh
