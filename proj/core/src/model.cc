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

#include "clh/model.h"

#include <algorithm>
#include <set>

namespace clh {

bool Instance::has_register(int id) const {
    for (const auto &r : registers) {
        if (r.id == id) {
            return true;
        }
    }
    return false;
}

size_t Instance::register_index(int id) const {
    for (size_t k = 0; k < registers.size(); k++) {
        if (registers[k].id == id) {
            return k;
        }
    }
    fail(ErrorCode::UnknownRegister, "register " + std::to_string(id));
}

size_t Instance::register_dim(int id) const {
    return registers[register_index(id)].dim;
}

bool Instance::has_term(int id) const {
    for (const auto &t : terms) {
        if (t.id == id) {
            return true;
        }
    }
    return false;
}

const LocalTerm &Instance::term(int id) const {
    for (const auto &t : terms) {
        if (t.id == id) {
            return t;
        }
    }
    fail(ErrorCode::InvalidArgument, "no term with id " + std::to_string(id));
}

LocalTerm &Instance::term(int id) {
    for (auto &t : terms) {
        if (t.id == id) {
            return t;
        }
    }
    fail(ErrorCode::InvalidArgument, "no term with id " + std::to_string(id));
}

std::vector<size_t> Instance::dims() const {
    std::vector<size_t> d;
    for (const auto &r : registers) {
        d.push_back(r.dim);
    }
    return d;
}

size_t Instance::total_dim() const {
    size_t p = 1;
    for (const auto &r : registers) {
        if (r.dim != 0 && p > (size_t(1) << 40) / r.dim) {
            fail(ErrorCode::TooLarge, "total Hilbert dimension exceeds 2^40");
        }
        p *= r.dim;
    }
    return p;
}

int Instance::next_term_id() const {
    int m = -1;
    for (const auto &t : terms) {
        m = std::max(m, t.id);
    }
    return m + 1;
}

int Instance::next_register_id() const {
    int m = -1;
    for (const auto &r : registers) {
        m = std::max(m, r.id);
    }
    return m + 1;
}

std::vector<int> Instance::incident_terms(int register_id) const {
    std::vector<int> ids;
    for (const auto &t : terms) {
        if (std::find(t.support.begin(), t.support.end(), register_id) != t.support.end()) {
            ids.push_back(t.id);
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<size_t> Instance::support_dims(const std::vector<int> &support) const {
    std::vector<size_t> d;
    for (int r : support) {
        d.push_back(register_dim(r));
    }
    return d;
}

std::vector<int> support_union(const std::vector<int> &a, const std::vector<int> &b) {
    std::vector<int> r = a;
    for (int x : b) {
        if (std::find(r.begin(), r.end(), x) == r.end()) {
            r.push_back(x);
        }
    }
    return r;
}

std::vector<int> support_intersection(const std::vector<int> &a, const std::vector<int> &b) {
    std::vector<int> r;
    for (int x : a) {
        if (std::find(b.begin(), b.end(), x) != b.end()) {
            r.push_back(x);
        }
    }
    return r;
}

ComplexMatrix term_on(const Instance &inst, const LocalTerm &term, const std::vector<int> &super_support) {
    std::vector<size_t> positions;
    for (int r : term.support) {
        auto it = std::find(super_support.begin(), super_support.end(), r);
        if (it == super_support.end()) {
            fail(ErrorCode::RegisterNotInSupport, "register " + std::to_string(r) + " of term " +
                                                      std::to_string(term.id) + " missing from target support");
        }
        positions.push_back(it - super_support.begin());
    }
    return embed_local(term.matrix, positions, inst.support_dims(super_support));
}

ComplexMatrix term_full(const Instance &inst, const LocalTerm &term) {
    std::vector<int> all;
    for (const auto &r : inst.registers) {
        all.push_back(r.id);
    }
    return term_on(inst, term, all);
}

ComplexMatrix hamiltonian_dense(const Instance &inst) {
    size_t d = inst.total_dim();
    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    for (const auto &t : inst.terms) {
        h += term_full(inst, t);
    }
    return h;
}

namespace {

// The term's matrix with `register_id` moved to the most significant factor.
ComplexMatrix register_first(const Instance &inst, const LocalTerm &term, int register_id, size_t &rest_dim) {
    auto it = std::find(term.support.begin(), term.support.end(), register_id);
    if (it == term.support.end()) {
        fail(ErrorCode::RegisterNotInSupport,
             "register " + std::to_string(register_id) + " not in support of term " + std::to_string(term.id));
    }
    size_t pos = it - term.support.begin();
    std::vector<size_t> dims = inst.support_dims(term.support);
    std::vector<size_t> perm{pos};
    rest_dim = 1;
    for (size_t k = 0; k < dims.size(); k++) {
        if (k != pos) {
            perm.push_back(k);
            rest_dim *= dims[k];
        }
    }
    return permute_factors(term.matrix, dims, perm);
}

}  // namespace

bool acts_trivially_on(const Instance &inst, const LocalTerm &term, int register_id, const Tolerances &tol) {
    size_t rest = 1;
    ComplexMatrix m = register_first(inst, term, register_id, rest);
    size_t d = inst.register_dim(register_id);
    if (d == 1) {
        return true;
    }
    OperatorSchmidt s = operator_schmidt(m, d, rest, tol);
    if (s.triples.empty()) {
        return true;
    }
    if (s.triples.size() > 1) {
        return false;
    }
    const ComplexMatrix &a = s.triples[0].a;
    Complex mean = a.trace() / (double)d;
    return op_norm(a - mean * identity(d)) <= scaled(tol.recon, op_norm(a)) * 10;
}

LocalTerm strip_trivial(const Instance &inst, const LocalTerm &term, const Tolerances &tol) {
    LocalTerm out = term;
    std::vector<int> keep;
    for (int r : term.support) {
        if (!acts_trivially_on(inst, term, r, tol)) {
            keep.push_back(r);
        }
    }
    if (keep.size() == term.support.size()) {
        return out;
    }
    std::vector<size_t> dims = inst.support_dims(term.support);
    std::vector<size_t> keep_pos;
    double traced = 1;
    for (size_t k = 0; k < term.support.size(); k++) {
        if (std::find(keep.begin(), keep.end(), term.support[k]) != keep.end()) {
            keep_pos.push_back(k);
        } else {
            traced *= (double)dims[k];
        }
    }
    out.matrix = partial_trace(term.matrix, keep_pos, dims) / traced;
    out.support = keep;
    if (out.rank) {
        out.rank = numerical_rank(out.matrix, tol);
    }
    return out;
}

size_t numerical_rank(const ComplexMatrix &m, const Tolerances &tol) {
    if (m.rows() == 0) {
        return 0;
    }
    RealVector ev = hermitian_eigenvalues(m, tol);
    double n = ev.cwiseAbs().maxCoeff();
    size_t r = 0;
    for (Eigen::Index k = 0; k < ev.size(); k++) {
        if (ev(k) > scaled(tol.eig, n)) {
            r++;
        }
    }
    return r;
}

double pair_commutator_norm(const Instance &inst, const LocalTerm &a, const LocalTerm &b) {
    if (support_intersection(a.support, b.support).empty()) {
        return 0;
    }
    std::vector<int> u = support_union(a.support, b.support);
    if (product(inst.support_dims(u)) <= 512) {
        ComplexMatrix ma = term_on(inst, a, u);
        ComplexMatrix mb = term_on(inst, b, u);
        return op_norm(commutator(ma, mb));
    }
    // [a, b] = sum_ij s_i t_j x_i (x) [alpha_i, beta_j] (x) y_j over operator-Schmidt factors on
    // (a only, overlap) and (overlap, b only); orthonormal outer factors give its HS norm.
    std::vector<int> overlap = support_intersection(a.support, b.support);
    std::vector<int> a_only, b_only;
    for (int r : a.support) {
        if (std::find(overlap.begin(), overlap.end(), r) == overlap.end()) {
            a_only.push_back(r);
        }
    }
    for (int r : b.support) {
        if (std::find(overlap.begin(), overlap.end(), r) == overlap.end()) {
            b_only.push_back(r);
        }
    }
    std::vector<int> a_order = a_only, b_order = overlap;
    a_order.insert(a_order.end(), overlap.begin(), overlap.end());
    b_order.insert(b_order.end(), b_only.begin(), b_only.end());
    size_t d_overlap = product(inst.support_dims(overlap));
    OperatorSchmidt sa = operator_schmidt(term_on(inst, a, a_order), product(inst.support_dims(a_only)), d_overlap);
    OperatorSchmidt sb = operator_schmidt(term_on(inst, b, b_order), d_overlap, product(inst.support_dims(b_only)));
    double hs2 = 0;
    for (const auto &x : sa.triples) {
        for (const auto &y : sb.triples) {
            double c = x.coefficient * y.coefficient;
            hs2 += c * c * commutator(x.b, y.a).squaredNorm();
        }
    }
    return std::sqrt(hs2);
}

Instance without_terms(const Instance &inst, const std::vector<int> &ids) {
    Instance out = inst;
    out.terms.clear();
    for (const auto &t : inst.terms) {
        if (std::find(ids.begin(), ids.end(), t.id) == ids.end()) {
            out.terms.push_back(t);
        }
    }
    return out;
}

bool ValidationReport::has(const std::string &kind) const {
    for (const auto &v : violations) {
        if (v.kind == kind) {
            return true;
        }
    }
    return false;
}

ValidationReport validate(const Instance &inst, const Tolerances &tol) {
    ValidationReport rep;
    auto add = [&](std::string kind, std::vector<int> ids, std::string detail) {
        rep.violations.push_back({std::move(kind), std::move(ids), std::move(detail)});
    };

    std::set<int> reg_ids;
    for (const auto &r : inst.registers) {
        if (!reg_ids.insert(r.id).second) {
            add("DuplicateRegister", {r.id}, "register id used twice");
        }
        if (r.dim < 1) {
            add("BadDimension", {r.id}, "register dimension must be at least 1");
        }
    }

    std::set<int> term_ids;
    std::vector<bool> sound(inst.terms.size(), false);
    for (size_t k = 0; k < inst.terms.size(); k++) {
        const auto &t = inst.terms[k];
        if (!term_ids.insert(t.id).second) {
            add("DuplicateTerm", {t.id}, "term id used twice");
        }
        std::set<int> seen;
        bool support_ok = true;
        size_t d = 1;
        for (int r : t.support) {
            if (!reg_ids.count(r)) {
                add("UnknownRegister", {t.id, r}, "support references a missing register");
                support_ok = false;
            } else if (!seen.insert(r).second) {
                add("DuplicateSupport", {t.id, r}, "register listed twice in support");
                support_ok = false;
            } else {
                d *= inst.register_dim(r);
            }
        }
        if (!support_ok) {
            continue;
        }
        if ((size_t)t.matrix.rows() != d || (size_t)t.matrix.cols() != d) {
            add("DimensionMismatch", {t.id},
                "matrix is " + std::to_string(t.matrix.rows()) + "x" + std::to_string(t.matrix.cols()) +
                    ", support dimension is " + std::to_string(d));
            continue;
        }
        if (!all_finite(t.matrix)) {
            add("NonFinite", {t.id}, "matrix has NaN or Inf entries");
            continue;
        }
        double n = op_norm(t.matrix);
        if (op_norm(t.matrix - t.matrix.adjoint()) > scaled(tol.herm, n)) {
            add("NotHermitian", {t.id}, "matrix is not Hermitian");
            continue;
        }
        RealVector ev = hermitian_eigenvalues(t.matrix, tol);
        if (ev.size() > 0 && ev(0) < -scaled(tol.eig, n)) {
            add("NotPSD", {t.id}, "smallest eigenvalue " + std::to_string(ev(0)));
        }
        if (n > 1 + tol.comm) {
            add("NormBound", {t.id}, "operator norm " + std::to_string(n) + " exceeds 1");
        }
        if (t.rank) {
            size_t r = 0;
            for (Eigen::Index i = 0; i < ev.size(); i++) {
                r += ev(i) > scaled(tol.eig, n);
            }
            if (r != *t.rank) {
                add("RankMismatch", {t.id},
                    "declared rank " + std::to_string(*t.rank) + ", numerical rank " + std::to_string(r));
            }
        }
        sound[k] = true;
    }

    for (size_t a = 0; a < inst.terms.size(); a++) {
        if (!sound[a]) {
            continue;
        }
        for (size_t b = a + 1; b < inst.terms.size(); b++) {
            if (!sound[b]) {
                continue;
            }
            double c = pair_commutator_norm(inst, inst.terms[a], inst.terms[b]);
            rep.max_commutator = std::max(rep.max_commutator, c);
            if (c > tol.comm) {
                add("NonCommuting", {inst.terms[a].id, inst.terms[b].id}, "commutator norm " + std::to_string(c));
            }
        }
    }

    if (inst.geometry) {
        for (const auto &p : check_geometry(*inst.geometry)) {
            add("Geometry", {}, p);
        }
    }
    return rep;
}

DegreeReport degree_report(const Instance &inst, const Tolerances &tol) {
    DegreeReport rep;
    for (const auto &r : inst.registers) {
        rep.degree[r.id] = 0;
    }
    for (const auto &t : inst.terms) {
        for (int r : t.support) {
            if (!acts_trivially_on(inst, t, r, tol)) {
                rep.degree[r]++;
            }
        }
    }
    for (const auto &[id, deg] : rep.degree) {
        rep.max_degree = std::max(rep.max_degree, deg);
    }
    return rep;
}

Instance canonical_unsat() {
    Instance inst;
    inst.registers.push_back({0, 1});
    LocalTerm t;
    t.id = 0;
    t.support = {0};
    t.matrix = identity(1);
    t.rank = 1;
    inst.terms.push_back(t);
    inst.provenance.push_back("canonical-unsat");
    return inst;
}

}  // namespace clh
