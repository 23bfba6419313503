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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clh/jordan.h"
#include "clh/oracle.h"

namespace clh {

namespace {

size_t position_in(const LocalTerm &t, int register_id) {
    auto it = std::find(t.support.begin(), t.support.end(), register_id);
    if (it == t.support.end()) {
        fail(ErrorCode::RegisterNotInSupport,
             "register " + std::to_string(register_id) + " not in support of term " + std::to_string(t.id));
    }
    return it - t.support.begin();
}

bool in_support(const LocalTerm &t, int register_id) {
    return std::find(t.support.begin(), t.support.end(), register_id) != t.support.end();
}

/// pi on the register, embedded into the term's support.
ComplexMatrix lift(const Instance &inst, const LocalTerm &t, int register_id, const ComplexMatrix &pi) {
    return embed_local(pi, {position_in(t, register_id)}, inst.support_dims(t.support));
}

void require_family(const std::vector<ComplexMatrix> &family, size_t d, const char *name, const Tolerances &tol) {
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (size_t i = 0; i < family.size(); i++) {
        if ((size_t)family[i].rows() != d || !is_projector(family[i], tol)) {
            fail(ErrorCode::HypothesisViolated,
                 std::string(name) + " element " + std::to_string(i) + " is not a projector on the register");
        }
        sum += family[i];
    }
    if (op_norm(sum - identity(d)) > scaled(tol.recon, 1.0) * 10) {
        fail(ErrorCode::HypothesisViolated, std::string(name) + " does not sum to the identity");
    }
}

bool contains(const std::vector<int> &v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

/// A 1x1 term on a fresh dimension-1 register, for scalars left when a support empties.
void add_scalar_term(Instance &out, double value, const std::string &why) {
    int reg = out.next_register_id();
    out.registers.push_back({reg, 1});
    LocalTerm t;
    t.id = out.next_term_id();
    t.support = {reg};
    t.matrix = ComplexMatrix::Constant(1, 1, value);
    t.rank = 1;
    out.terms.push_back(std::move(t));
    out.provenance.push_back(why);
}

void remove_register_entry(Instance &out, int register_id) {
    out.registers.erase(std::remove_if(out.registers.begin(), out.registers.end(),
                                       [&](const Register &r) { return r.id == register_id; }),
                        out.registers.end());
}

void set_rank(LocalTerm &t, const Tolerances &tol) {
    if (t.rank) {
        t.rank = numerical_rank(t.matrix, tol);
    }
}

}  // namespace

bool TraceTable::any_positive() const {
    for (const auto &row : entries) {
        for (double v : row) {
            if (v > threshold) {
                return true;
            }
        }
    }
    return false;
}

double TraceTable::min_entry() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto &row : entries) {
        for (double v : row) {
            m = std::min(m, v);
        }
    }
    return m;
}

TraceTable equiv_projector_check(const Instance &inst, int register1, const std::vector<ComplexMatrix> &povm1,
                                 int register2, const std::vector<ComplexMatrix> &povm2, const std::vector<int> &s,
                                 const std::vector<int> &t, const Tolerances &tol, unsigned jobs) {
    require_family(povm1, inst.register_dim(register1), "family 1", tol);
    require_family(povm2, inst.register_dim(register2), "family 2", tol);
    for (int id : s) {
        if (contains(t, id)) {
            fail(ErrorCode::HypothesisViolated, "term " + std::to_string(id) + " is in both S and T");
        }
    }
    auto check = [&](const std::vector<ComplexMatrix> &family, int reg, const std::vector<int> &exempt,
                     const char *name) {
        for (const auto &h : inst.terms) {
            if (contains(exempt, h.id) || !in_support(h, reg)) {
                continue;
            }
            for (size_t i = 0; i < family.size(); i++) {
                double c = op_norm(commutator(h.matrix, lift(inst, h, reg, family[i])));
                if (c > tol.comm) {
                    fail(ErrorCode::HypothesisViolated, "term " + std::to_string(h.id) + " does not commute with " +
                                                            name + " element " + std::to_string(i));
                }
            }
        }
    };
    check(povm1, register1, t, "family 1");
    check(povm2, register2, s, "family 2");

    auto factor = [&](const LocalTerm &h, int reg, const ComplexMatrix &pi) {
        LocalTerm f;
        f.id = h.id;
        f.support = support_union(h.support, {reg});
        ComplexMatrix hp = term_on(inst, h, f.support);
        ComplexMatrix pp = embed_local(pi, {(size_t)(std::find(f.support.begin(), f.support.end(), reg) -
                                                     f.support.begin())},
                                       inst.support_dims(f.support));
        f.matrix = pp - pp * hp * pp;
        return f;
    };
    auto bare = [&](int reg, const ComplexMatrix &pi) {
        LocalTerm f;
        f.support = {reg};
        f.matrix = pi;
        return f;
    };
    TraceTable table;
    table.threshold = tol.trace * (double)inst.total_dim();
    for (size_t i = 0; i < povm1.size(); i++) {
        std::vector<double> row;
        for (size_t j = 0; j < povm2.size(); j++) {
            std::vector<LocalTerm> ops;
            if (s.empty()) {
                ops.push_back(bare(register1, povm1[i]));
            }
            for (int id : s) {
                ops.push_back(factor(inst.term(id), register1, povm1[i]));
            }
            if (t.empty()) {
                ops.push_back(bare(register2, povm2[j]));
            }
            for (int id : t) {
                ops.push_back(factor(inst.term(id), register2, povm2[j]));
            }
            for (const auto &h : inst.terms) {
                if (!contains(s, h.id) && !contains(t, h.id)) {
                    LocalTerm f = h;
                    f.matrix = identity(h.matrix.rows()) - h.matrix;
                    ops.push_back(std::move(f));
                }
            }
            row.push_back(trace_of_product(inst, ops, jobs).real());
        }
        table.entries.push_back(std::move(row));
    }
    return table;
}

Rank1RoundResult rank1_round(const Instance &inst, int register_id, const ComplexMatrix &pi_p,
                             const ComplexMatrix &pi_q, const Tolerances &tol) {
    size_t d = inst.register_dim(register_id);
    for (const ComplexMatrix *pi : {&pi_p, &pi_q}) {
        if ((size_t)pi->rows() != d || (size_t)pi->cols() != d || !is_projector(*pi, tol)) {
            fail(ErrorCode::HypothesisViolated, "rounding projector is not a projector on register " +
                                                    std::to_string(register_id));
        }
    }
    Rank1RoundResult res;
    RoundingArtifacts &art = res.artifacts;
    art.register_id = register_id;
    art.pi_p = pi_p;
    art.pi_q = pi_q;

    std::vector<int> p_cands, q_cands;
    for (const auto &h : inst.terms) {
        if (!in_support(h, register_id)) {
            art.rest_terms.push_back(h.id);
            continue;
        }
        ComplexMatrix lp = lift(inst, h, register_id, pi_p);
        ComplexMatrix lq = lift(inst, h, register_id, pi_q);
        bool surv_p = op_norm(lp * h.matrix * lp) > tol.comm;
        bool surv_q = op_norm(lq * h.matrix * lq) > tol.comm;
        bool comm_p = op_norm(commutator(h.matrix, lp)) <= tol.comm;
        bool comm_q = op_norm(commutator(h.matrix, lq)) <= tol.comm;
        if (!surv_p || !surv_q) {
            // pi h pi = 0 forces h pi = 0, so killed terms drop out of every trace below.
            art.dropped_terms.push_back(h.id);
            continue;
        }
        if (!comm_q) {
            p_cands.push_back(h.id);
        } else if (!comm_p) {
            q_cands.push_back(h.id);
        } else {
            art.rest_terms.push_back(h.id);
        }
    }
    // A term failing both commutations would have to be both P and Q.
    for (int id : p_cands) {
        if (contains(q_cands, id)) {
            fail(ErrorCode::HypothesisViolated, "term " + std::to_string(id) + " commutes with neither projector");
        }
    }
    if (p_cands.size() > 1 || q_cands.size() > 1) {
        std::ostringstream msg;
        msg << "more than one surviving term fails to commute with a projector on register " << register_id << ":";
        for (int id : p_cands.size() > 1 ? p_cands : q_cands) {
            msg << " " << id;
        }
        fail(ErrorCode::HypothesisViolated, msg.str());
    }
    art.p_term = p_cands.empty() ? -1 : p_cands[0];
    art.q_term = q_cands.empty() ? -1 : q_cands[0];
    const LocalTerm *p = art.p_term >= 0 ? &inst.term(art.p_term) : nullptr;
    const LocalTerm *q = art.q_term >= 0 ? &inst.term(art.q_term) : nullptr;
    if (p) {
        ComplexMatrix lp = lift(inst, *p, register_id, pi_p);
        if (op_norm(commutator(p->matrix, lp)) > tol.comm) {
            fail(ErrorCode::HypothesisViolated, "P does not commute with its projector");
        }
    }
    if (q) {
        ComplexMatrix lq = lift(inst, *q, register_id, pi_q);
        if (op_norm(commutator(q->matrix, lq)) > tol.comm) {
            fail(ErrorCode::HypothesisViolated, "Q does not commute with its projector");
        }
    }

    std::vector<int> u{register_id};
    if (p) {
        u = support_union(u, p->support);
    }
    if (q) {
        u = support_union(u, q->support);
    }
    art.merged_support = u;
    std::vector<size_t> udims = inst.support_dims(u);
    ComplexMatrix ppu = embed_local(pi_p, {0}, udims);
    ComplexMatrix pqu = embed_local(pi_q, {0}, udims);
    ComplexMatrix pm = p ? term_on(inst, *p, u) : ComplexMatrix::Zero(ppu.rows(), ppu.cols());
    ComplexMatrix qm = q ? term_on(inst, *q, u) : ComplexMatrix::Zero(ppu.rows(), ppu.cols());
    art.p_tilde = ppu - ppu * pm * ppu;
    art.q_tilde = pqu - pqu * qm * pqu;
    art.p_tilde = (art.p_tilde + art.p_tilde.adjoint()).eval() * 0.5;
    art.q_tilde = (art.q_tilde + art.q_tilde.adjoint()).eval() * 0.5;

    JordanDecomposition jd = jordan_decompose(art.p_tilde, art.q_tilde, tol);
    size_t n = art.p_tilde.rows();
    art.pi_p_bprime = ComplexMatrix::Zero(n, n);
    art.pi_qtilde_bprime = ComplexMatrix::Zero(n, n);
    std::vector<ComplexVector> cols;
    for (const auto &b : jd.blocks) {
        if (b.dim == 2) {
            art.pi_p_bprime += *b.p_vec * b.p_vec->adjoint();
            art.pi_qtilde_bprime += *b.qtilde_vec * b.qtilde_vec->adjoint();
            cols.push_back(*b.p_vec);
            cols.push_back(*b.qtilde_vec);
        } else if (b.shared()) {
            art.pi_p_bprime += *b.p_vec * b.p_vec->adjoint();
            cols.push_back(*b.p_vec);
        }
    }
    art.bprime = ComplexMatrix(n, cols.size());
    for (size_t k = 0; k < cols.size(); k++) {
        art.bprime.col(k) = cols[k];
    }
    art.delta = art.pi_p_bprime + art.pi_qtilde_bprime;

    if (cols.empty()) {
        art.degenerate = true;
        res.instance = canonical_unsat();
        res.instance.provenance = inst.provenance;
        res.instance.provenance.push_back("rank1_round register " + std::to_string(register_id) +
                                          ": no surviving Jordan weight, canonical unsat");
        return res;
    }

    Instance out = inst;
    out.terms.clear();
    for (const auto &h : inst.terms) {
        if (contains(art.rest_terms, h.id)) {
            out.terms.push_back(h);
        }
    }
    LocalTerm merged;
    merged.id = inst.next_term_id();
    merged.support = u;
    merged.matrix = identity(n) - art.delta;
    merged.matrix = (merged.matrix + merged.matrix.adjoint()).eval() * 0.5;
    merged.rank = numerical_rank(merged.matrix, tol);
    art.merged_term = merged.id;
    std::ostringstream prov;
    prov << "rank1_round register " << register_id << ": P=" << art.p_term << " Q=" << art.q_term
         << " merged=" << merged.id << " dim(B')=" << cols.size() << " dropped=" << art.dropped_terms.size();
    out.provenance.push_back(prov.str());
    if (op_norm(merged.matrix) > tol.comm) {
        out.terms.push_back(strip_trivial(out, merged, tol));
    }
    res.instance = std::move(out);
    return res;
}

std::vector<TwoLocalBlock> two_local_blocks(const Instance &inst, int register_id, const Tolerances &tol,
                                            bool check_commutation) {
    std::vector<int> inc = inst.incident_terms(register_id);
    for (size_t a = 0; a < inc.size(); a++) {
        for (size_t b = a + 1; b < inc.size(); b++) {
            auto ov = support_intersection(inst.term(inc[a]).support, inst.term(inc[b]).support);
            if (ov.size() != 1) {
                fail(ErrorCode::OverlapViolation, "terms " + std::to_string(inc[a]) + " and " +
                                                      std::to_string(inc[b]) + " overlap on " +
                                                      std::to_string(ov.size()) + " registers");
            }
            if (check_commutation && pair_commutator_norm(inst, inst.term(inc[a]), inst.term(inc[b])) > tol.comm) {
                fail(ErrorCode::OverlapViolation, "terms " + std::to_string(inc[a]) + " and " +
                                                      std::to_string(inc[b]) + " do not commute");
            }
        }
    }
    size_t d = inst.register_dim(register_id);
    std::vector<std::vector<ComplexMatrix>> gens;
    for (int id : inc) {
        gens.push_back(induced_algebra(inst, inst.term(id), register_id, tol).basis);
    }
    struct Partial {
        ComplexMatrix isometry;
        std::vector<size_t> dims;
        size_t rest;
        std::vector<std::vector<ComplexMatrix>> remaining;
    };
    std::vector<Partial> frontier{{identity(d), {}, d, gens}};
    for (size_t level = 0; level < inc.size(); level++) {
        std::vector<Partial> next;
        for (auto &pt : frontier) {
            InducedAlgebra alg = make_algebra(pt.remaining[level], pt.rest, tol);
            StructureDecomposition dec = structure_decompose(alg, tol);
            size_t prefix = product(pt.dims);
            for (const auto &blk : dec.blocks) {
                Partial child;
                child.isometry = pt.isometry * kron(identity(prefix), blk.isometry);
                child.dims = pt.dims;
                child.dims.push_back(blk.d1);
                child.rest = blk.d2;
                for (size_t k = 0; k < pt.remaining.size(); k++) {
                    std::vector<ComplexMatrix> restricted;
                    if (k > level) {
                        for (const auto &g : pt.remaining[k]) {
                            restricted.push_back(
                                reduce_factor(blk.isometry.adjoint() * g * blk.isometry, {blk.d1, blk.d2}, 0));
                        }
                    }
                    child.remaining.push_back(std::move(restricted));
                }
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
    }
    std::vector<TwoLocalBlock> out;
    for (auto &pt : frontier) {
        TwoLocalBlock b;
        // A multiplicity no term acts on is fixed to its first basis vector.
        size_t prefix = product(pt.dims);
        ComplexMatrix first = ComplexMatrix::Zero(pt.rest, 1);
        first(0, 0) = 1;
        b.isometry = pt.isometry * kron(identity(prefix), first);
        b.terms = inc;
        b.factor_dims = pt.dims;
        out.push_back(std::move(b));
    }
    return out;
}

Instance two_local_round(const Instance &inst, int register_id, size_t block_index, const Tolerances &tol) {
    return apply_two_local_block(inst, register_id, two_local_blocks(inst, register_id, tol), block_index, tol);
}

Instance apply_two_local_block(const Instance &inst, int register_id, const std::vector<TwoLocalBlock> &blocks,
                               size_t block_index, const Tolerances &tol) {
    if (block_index >= blocks.size()) {
        fail(ErrorCode::BlockOutOfRange, "block " + std::to_string(block_index) + " of " +
                                             std::to_string(blocks.size()) + " on register " +
                                             std::to_string(register_id));
    }
    const TwoLocalBlock &blk = blocks[block_index];
    Instance out = inst;
    out.geometry.reset();
    remove_register_entry(out, register_id);
    std::vector<int> sub_ids(blk.terms.size(), -1);
    int next_reg = inst.next_register_id();
    for (size_t k = 0; k < blk.terms.size(); k++) {
        if (blk.factor_dims[k] > 1) {
            sub_ids[k] = next_reg++;
            out.registers.push_back({sub_ids[k], blk.factor_dims[k]});
        }
    }
    out.terms.clear();
    for (const auto &h : inst.terms) {
        auto it = std::find(blk.terms.begin(), blk.terms.end(), h.id);
        if (it == blk.terms.end()) {
            out.terms.push_back(h);
            continue;
        }
        size_t k = it - blk.terms.begin();
        size_t pos = position_in(h, register_id);
        std::vector<size_t> dims = inst.support_dims(h.support);
        ComplexMatrix c = compress_factor(h.matrix, dims, pos, blk.isometry);
        // Expand the register slot into the factor list, then trace out all factors but k.
        std::vector<size_t> split = dims;
        split.erase(split.begin() + pos);
        split.insert(split.begin() + pos, blk.factor_dims.begin(), blk.factor_dims.end());
        std::vector<size_t> keep;
        for (size_t f = 0; f < split.size(); f++) {
            bool is_factor = f >= pos && f < pos + blk.factor_dims.size();
            if (!is_factor || f == pos + k) {
                keep.push_back(f);
            }
        }
        double traced = (double)product(blk.factor_dims) / (double)blk.factor_dims[k];
        LocalTerm nt = h;
        nt.matrix = partial_trace(c, keep, split) / traced;
        nt.support.clear();
        for (size_t s = 0; s < h.support.size(); s++) {
            if (s == pos) {
                if (sub_ids[k] >= 0) {
                    nt.support.push_back(sub_ids[k]);
                }
            } else {
                nt.support.push_back(h.support[s]);
            }
        }
        if (nt.support.empty()) {
            double v = nt.matrix(0, 0).real();
            if (v > tol.comm) {
                add_scalar_term(out, v, "two_local_round: term " + std::to_string(h.id) + " became a scalar");
            }
            continue;
        }
        nt.matrix = (nt.matrix + nt.matrix.adjoint()).eval() * 0.5;
        if (op_norm(nt.matrix) <= tol.comm) {
            continue;
        }
        set_rank(nt, tol);
        out.terms.push_back(std::move(nt));
    }
    out.provenance.push_back("two_local_round register " + std::to_string(register_id) + " block " +
                             std::to_string(block_index) + " of " + std::to_string(blocks.size()));
    return out;
}

Instance contract_register(const Instance &inst, int register_id, const ComplexVector &v, const Tolerances &tol) {
    Instance out = inst;
    remove_register_entry(out, register_id);
    out.terms.clear();
    ComplexMatrix vm = v;
    for (const auto &h : inst.terms) {
        if (!in_support(h, register_id)) {
            out.terms.push_back(h);
            continue;
        }
        size_t pos = position_in(h, register_id);
        LocalTerm nt = h;
        nt.matrix = compress_factor(h.matrix, inst.support_dims(h.support), pos, vm);
        nt.matrix = (nt.matrix + nt.matrix.adjoint()).eval() * 0.5;
        nt.support.erase(nt.support.begin() + pos);
        if (nt.support.empty()) {
            double val = nt.matrix(0, 0).real();
            if (val > tol.comm) {
                add_scalar_term(out, val, "term " + std::to_string(h.id) + " became a scalar");
            }
            continue;
        }
        if (op_norm(nt.matrix) <= tol.comm) {
            continue;
        }
        set_rank(nt, tol);
        out.terms.push_back(std::move(nt));
    }
    return out;
}

Instance restrict_register(const Instance &inst, int register_id, const ComplexMatrix &isometry,
                           const Tolerances &tol) {
    size_t d = inst.register_dim(register_id);
    if ((size_t)isometry.rows() != d || isometry.cols() == 0 ||
        (isometry.adjoint() * isometry - identity(isometry.cols())).cwiseAbs().maxCoeff() > 1e-8) {
        fail(ErrorCode::InvalidArgument, "restriction map is not an isometry on register " +
                                             std::to_string(register_id));
    }
    Instance out = inst;
    for (auto &r : out.registers) {
        if (r.id == register_id) {
            r.dim = isometry.cols();
        }
    }
    out.terms.clear();
    for (const auto &h : inst.terms) {
        if (!in_support(h, register_id)) {
            out.terms.push_back(h);
            continue;
        }
        LocalTerm nt = h;
        nt.matrix = compress_factor(h.matrix, inst.support_dims(h.support), position_in(h, register_id), isometry);
        nt.matrix = (nt.matrix + nt.matrix.adjoint()).eval() * 0.5;
        if (op_norm(nt.matrix) <= tol.comm) {
            continue;
        }
        set_rank(nt, tol);
        out.terms.push_back(std::move(nt));
    }
    return out;
}

Instance classical_restrict(const Instance &inst, int register_id, size_t basis_index, const ComplexMatrix &basis,
                            const Tolerances &tol) {
    size_t d = inst.register_dim(register_id);
    if ((size_t)basis.rows() != d || (size_t)basis.cols() != d ||
        (basis.adjoint() * basis - identity(d)).cwiseAbs().maxCoeff() > 1e-8) {
        fail(ErrorCode::NotClassical, "basis is not unitary on register " + std::to_string(register_id));
    }
    if (basis_index >= d) {
        fail(ErrorCode::NotClassical, "basis index " + std::to_string(basis_index) + " out of range");
    }
    for (int id : inst.incident_terms(register_id)) {
        for (size_t k = 0; k < d; k++) {
            ComplexMatrix pi = basis.col(k) * basis.col(k).adjoint();
            if (term_projector_commutator(inst, inst.term(id), register_id, pi) > tol.comm) {
                fail(ErrorCode::NotClassical, "term " + std::to_string(id) + " does not preserve basis vector " +
                                                  std::to_string(k));
            }
        }
    }
    Instance out = contract_register(inst, register_id, basis.col(basis_index), tol);
    out.provenance.push_back("classical_restrict register " + std::to_string(register_id) + " index " +
                             std::to_string(basis_index));
    return out;
}

Instance semi_separable_reduce(const Instance &inst, const SemiSeparableWitness &witness, size_t branch,
                               const Tolerances &tol) {
    int reg = witness.register_id;
    size_t d = inst.register_dim(reg);
    if (witness.projectors.size() < 2) {
        fail(ErrorCode::InvalidWitness, "witness needs at least two projectors");
    }
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (size_t i = 0; i < witness.projectors.size(); i++) {
        const auto &p = witness.projectors[i];
        if ((size_t)p.rows() != d || !is_projector(p, tol) || numerical_rank(p, tol) == 0) {
            fail(ErrorCode::InvalidWitness, "witness element " + std::to_string(i) + " is not a nonzero projector");
        }
        sum += p;
    }
    if (op_norm(sum - identity(d)) > 1e-8) {
        fail(ErrorCode::InvalidWitness, "witness projectors do not sum to the identity");
    }
    if (witness.exceptional_term >= 0 && !inst.has_term(witness.exceptional_term)) {
        fail(ErrorCode::InvalidWitness, "unknown exceptional term " + std::to_string(witness.exceptional_term));
    }
    for (int id : inst.incident_terms(reg)) {
        if (id == witness.exceptional_term) {
            continue;
        }
        for (size_t i = 0; i < witness.projectors.size(); i++) {
            if (term_projector_commutator(inst, inst.term(id), reg, witness.projectors[i]) > tol.comm) {
                fail(ErrorCode::InvalidWitness, "term " + std::to_string(id) + " does not commute with element " +
                                                    std::to_string(i));
            }
        }
    }
    if (branch >= witness.projectors.size()) {
        fail(ErrorCode::BranchOutOfRange, "branch " + std::to_string(branch) + " of " +
                                              std::to_string(witness.projectors.size()));
    }
    HermitianEig e = hermitian_eig(witness.projectors[branch], tol);
    ComplexMatrix v = eigenspace(e, 0.5, 2.0);
    Instance out = restrict_register(inst, reg, v, tol);
    // The exceptional term keeps only the exact-1 eigenspace of pi h pi.
    for (auto &t : out.terms) {
        if (t.id == witness.exceptional_term) {
            t.matrix = spectral_projector_at_least(t.matrix, 1 - 1e-6, tol);
            set_rank(t, tol);
        }
    }
    out.terms.erase(std::remove_if(out.terms.begin(), out.terms.end(),
                                   [&](const LocalTerm &t) { return op_norm(t.matrix) <= tol.comm; }),
                    out.terms.end());
    out.provenance.push_back("semi_separable_reduce register " + std::to_string(reg) + " branch " +
                             std::to_string(branch) + " exceptional " + std::to_string(witness.exceptional_term));
    return out;
}

Instance tidy(const Instance &inst, const Tolerances &tol) {
    Instance out = inst;
    out.terms.clear();
    for (const auto &t : inst.terms) {
        if (op_norm(t.matrix) <= tol.comm) {
            continue;
        }
        LocalTerm s = strip_trivial(inst, t, tol);
        if (s.support.empty()) {
            add_scalar_term(out, s.matrix(0, 0).real(), "term " + std::to_string(t.id) + " acts as a scalar");
            continue;
        }
        out.terms.push_back(std::move(s));
    }
    return out;
}

}  // namespace clh
