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

#include "clh/algebra.h"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace clh {

namespace {

Complex hs_inner(const ComplexMatrix &a, const ComplexMatrix &b) {
    return (a.adjoint() * b).trace();
}

// Gram-Schmidt step in the Hilbert-Schmidt inner product. Adds the normalized residual of
// `cand` if its norm exceeds the absolute cutoff. Candidates are products of unit-norm
// elements, so round-off residue stays far below the cutoff.
bool try_add(std::vector<ComplexMatrix> &basis, const ComplexMatrix &cand, double cutoff) {
    ComplexMatrix r = cand;
    for (int pass = 0; pass < 2; pass++) {
        for (const auto &b : basis) {
            r -= hs_inner(b, r) * b;
        }
    }
    double n = r.norm();
    if (n <= cutoff) {
        return false;
    }
    basis.push_back(r / n);
    return true;
}

// Orthonormal Hermitian spanning set of a *-closed span.
std::vector<ComplexMatrix> hermitian_basis(const std::vector<ComplexMatrix> &basis, double cutoff) {
    std::vector<ComplexMatrix> out;
    for (const auto &b : basis) {
        try_add(out, (b + b.adjoint()) * 0.5, cutoff);
        try_add(out, (b - b.adjoint()) * Complex(0, -0.5), cutoff);
    }
    for (auto &h : out) {
        h = (h + h.adjoint()).eval() * 0.5;
    }
    return out;
}

ComplexMatrix random_element(const std::vector<ComplexMatrix> &herm, Rng &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexMatrix x = ComplexMatrix::Zero(herm[0].rows(), herm[0].cols());
    for (const auto &h : herm) {
        x += u(rng) * h;
    }
    return x;
}

// Clusters of an ascending spectrum: consecutive eigenvalues closer than `merge` share a
// cluster. `min_gap` reports the smallest gap between different clusters.
std::vector<std::pair<size_t, size_t>> clusters(const RealVector &ev, double merge, double &min_gap) {
    std::vector<std::pair<size_t, size_t>> out;
    min_gap = std::numeric_limits<double>::infinity();
    size_t start = 0;
    for (size_t k = 1; k <= (size_t)ev.size(); k++) {
        if (k == (size_t)ev.size() || ev(k) - ev(k - 1) > merge) {
            out.emplace_back(start, k);
            if (k < (size_t)ev.size()) {
                min_gap = std::min(min_gap, ev(k) - ev(k - 1));
            }
            start = k;
        }
    }
    return out;
}

// Columns: Gram-Schmidt of the projector applied to computational basis vectors.
ComplexMatrix canonical_range(const ComplexMatrix &proj, size_t rank) {
    size_t d = proj.rows();
    ComplexMatrix cols(d, rank);
    size_t have = 0;
    for (size_t i = 0; i < d && have < rank; i++) {
        ComplexVector v = proj.col(i);
        for (int pass = 0; pass < 2; pass++) {
            for (size_t k = 0; k < have; k++) {
                v -= cols.col(k) * cols.col(k).dot(v);
            }
        }
        double n = v.norm();
        if (n > 1e-6) {
            v /= n;
            phase_normalize(v);
            cols.col(have++) = v;
        }
    }
    if (have != rank) {
        fail(ErrorCode::Numerical, "could not span projector range");
    }
    return cols;
}

size_t span_rank(const std::vector<ComplexMatrix> &mats) {
    if (mats.empty()) {
        return 0;
    }
    size_t len = mats[0].size();
    ComplexMatrix g(len, mats.size());
    for (size_t k = 0; k < mats.size(); k++) {
        g.col(k) = vectorize(mats[k]);
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(g);
    const RealVector &s = svd.singularValues();
    size_t r = 0;
    for (Eigen::Index k = 0; k < s.size(); k++) {
        r += s(k) > 1e-8 * std::max(1.0, s(0));
    }
    return r;
}

std::vector<ComplexMatrix> with_adjoints(const std::vector<ComplexMatrix> &gens) {
    std::vector<ComplexMatrix> all;
    for (const auto &g : gens) {
        all.push_back(g);
        all.push_back(g.adjoint());
    }
    return all;
}

}  // namespace

std::vector<ComplexMatrix> algebra_closure(const std::vector<ComplexMatrix> &generators, size_t dim,
                                           const Tolerances &tol) {
    std::vector<ComplexMatrix> basis{identity(dim) / std::sqrt((double)dim)};
    std::vector<ComplexMatrix> gens;
    for (const auto &g : with_adjoints(generators)) {
        if ((size_t)g.rows() != dim || (size_t)g.cols() != dim) {
            fail(ErrorCode::DimensionMismatch, "algebra generator has the wrong dimension");
        }
        double n = g.norm();
        if (n > tol.recon) {
            gens.push_back(g / n);
        }
    }
    std::vector<size_t> queue;
    for (const auto &g : gens) {
        if (try_add(basis, g, tol.comm)) {
            queue.push_back(basis.size() - 1);
        }
    }
    while (!queue.empty() && basis.size() < dim * dim) {
        size_t f = queue.back();
        queue.pop_back();
        for (const auto &g : gens) {
            if (try_add(basis, g * basis[f], tol.comm)) {
                queue.push_back(basis.size() - 1);
            }
        }
    }
    return basis;
}

InducedAlgebra make_algebra(const std::vector<ComplexMatrix> &generators, size_t dim, const Tolerances &tol) {
    InducedAlgebra a;
    a.dim = dim;
    a.generators = generators;
    a.basis = algebra_closure(generators, dim, tol);
    return a;
}

InducedAlgebra induced_algebra(const Instance &inst, const LocalTerm &term, int register_id, const Tolerances &tol) {
    auto it = std::find(term.support.begin(), term.support.end(), register_id);
    if (it == term.support.end()) {
        fail(ErrorCode::RegisterNotInSupport,
             "register " + std::to_string(register_id) + " not in support of term " + std::to_string(term.id));
    }
    size_t pos = it - term.support.begin();
    std::vector<size_t> dims = inst.support_dims(term.support);
    std::vector<size_t> perm{pos};
    size_t rest = 1;
    for (size_t k = 0; k < dims.size(); k++) {
        if (k != pos) {
            perm.push_back(k);
            rest *= dims[k];
        }
    }
    ComplexMatrix m = permute_factors(term.matrix, dims, perm);
    OperatorSchmidt s = operator_schmidt(m, dims[pos], rest, tol);
    std::vector<ComplexMatrix> gens;
    for (const auto &t : s.triples) {
        gens.push_back(t.a);
    }
    InducedAlgebra a = make_algebra(gens, dims[pos], tol);
    a.register_id = register_id;
    a.generator_terms = {term.id};
    return a;
}

InducedAlgebra joint_induced_algebra(const Instance &inst, const std::vector<int> &term_ids, int register_id,
                                     const Tolerances &tol) {
    std::vector<ComplexMatrix> gens;
    for (int id : term_ids) {
        InducedAlgebra a = induced_algebra(inst, inst.term(id), register_id, tol);
        gens.insert(gens.end(), a.basis.begin(), a.basis.end());
    }
    InducedAlgebra j = make_algebra(gens, inst.register_dim(register_id), tol);
    j.register_id = register_id;
    j.generator_terms = term_ids;
    return j;
}

double span_residual(const std::vector<ComplexMatrix> &basis, const ComplexMatrix &m) {
    double n = m.norm();
    if (n == 0) {
        return 0;
    }
    ComplexMatrix r = m / n;
    for (int pass = 0; pass < 2; pass++) {
        for (const auto &b : basis) {
            r -= hs_inner(b, r) * b;
        }
    }
    return r.norm();
}

double span_distance(const std::vector<ComplexMatrix> &a, const std::vector<ComplexMatrix> &b) {
    double worst = 0;
    for (const auto &m : b) {
        worst = std::max(worst, span_residual(a, m));
    }
    for (const auto &m : a) {
        worst = std::max(worst, span_residual(b, m));
    }
    return worst;
}

std::vector<ComplexMatrix> commutant(const std::vector<ComplexMatrix> &operators, size_t dim, const Tolerances &tol) {
    size_t n = dim * dim;
    ComplexMatrix gram = ComplexMatrix::Zero(n, n);
    ComplexMatrix id = identity(dim);
    for (const auto &b : with_adjoints(operators)) {
        double nb = b.norm();
        if (nb == 0) {
            continue;
        }
        ComplexMatrix bn = b / nb;
        // Row-major vec: vec(X b - b X) = (I (x) b^T - b (x) I) vec(X).
        ComplexMatrix l = kron(id, bn.transpose()) - kron(bn, id);
        gram += l.adjoint() * l;
    }
    HermitianEig e = hermitian_eig(gram, tol);
    double scale = std::max(1.0, e.eigenvalues.cwiseAbs().maxCoeff());
    std::vector<ComplexMatrix> out;
    for (size_t k = 0; k < n; k++) {
        if (e.eigenvalues(k) <= 1e-12 * scale) {
            try_add(out, unvectorize(e.eigenvectors.col(k), dim), tol.comm);
        }
    }
    return out;
}

std::vector<ComplexMatrix> center(const InducedAlgebra &algebra, const Tolerances &tol) {
    const auto &basis = algebra.basis;
    size_t d = algebra.dim;
    std::vector<ComplexMatrix> gens = algebra.generators.empty() ? basis : with_adjoints(algebra.generators);
    size_t n = basis.size();
    ComplexMatrix gram = ComplexMatrix::Zero(n, n);
    for (const auto &g : gens) {
        double ng = g.norm();
        if (ng == 0) {
            continue;
        }
        ComplexMatrix cols(d * d, n);
        for (size_t i = 0; i < n; i++) {
            cols.col(i) = vectorize(commutator(basis[i], g / ng));
        }
        gram += cols.adjoint() * cols;
    }
    HermitianEig e = hermitian_eig(gram, tol);
    double scale = std::max(1.0, e.eigenvalues.size() ? e.eigenvalues.cwiseAbs().maxCoeff() : 0.0);
    std::vector<ComplexMatrix> raw;
    for (size_t k = 0; k < n; k++) {
        if (e.eigenvalues(k) <= 1e-12 * scale) {
            ComplexMatrix x = ComplexMatrix::Zero(d, d);
            for (size_t i = 0; i < n; i++) {
                x += e.eigenvectors(i, k) * basis[i];
            }
            raw.push_back(x);
        }
    }
    return hermitian_basis(raw, tol.comm);
}

double algebras_commutator(const std::vector<ComplexMatrix> &a, const std::vector<ComplexMatrix> &b) {
    double worst = 0;
    for (const auto &x : a) {
        for (const auto &y : b) {
            worst = std::max(worst, op_norm(commutator(x, y)));
        }
    }
    return worst;
}

StructureDecomposition structure_decompose(const InducedAlgebra &algebra, const Tolerances &tol) {
    size_t d = algebra.dim;
    StructureDecomposition dec;
    dec.dim = d;
    std::vector<ComplexMatrix> z = center(algebra, tol);
    std::vector<ComplexMatrix> herm = hermitian_basis(algebra.basis, tol.comm);
    Rng rng(tol.seed ^ (uint64_t)d);

    const int max_tries = 6;
    for (int attempt = 0; attempt < max_tries; attempt++) {
        // Central element: its eigenspaces are the blocks.
        ComplexMatrix c = random_element(z, rng);
        HermitianEig ec = hermitian_eig(c, tol);
        double gap;
        auto cl = clusters(ec.eigenvalues, 10 * tol.eig, gap);
        if (cl.size() != z.size() || gap < 1e-6) {
            continue;
        }
        std::vector<AlgebraBlock> blocks;
        bool ok = true;
        for (auto [lo, hi] : cl) {
            size_t m = hi - lo;
            ComplexMatrix vc = canonical_range(projector_onto(ec.eigenvectors.middleCols(lo, m)), m);
            std::vector<ComplexMatrix> restricted;
            for (const auto &b : algebra.basis) {
                restricted.push_back(vc.adjoint() * b * vc);
            }
            size_t rank = span_rank(restricted);
            size_t d1 = (size_t)std::llround(std::sqrt((double)rank));
            if (d1 == 0 || d1 * d1 != rank || m % d1 != 0) {
                ok = false;
                break;
            }
            size_t d2 = m / d1;
            AlgebraBlock blk;
            blk.d1 = d1;
            blk.d2 = d2;
            if (d1 == 1) {
                blk.isometry = vc;
                blocks.push_back(blk);
                continue;
            }
            // Minimal projector e_11 (x) I: lowest eigenspace of a random restricted element.
            std::vector<ComplexMatrix> rherm;
            for (const auto &h : herm) {
                rherm.push_back(vc.adjoint() * h * vc);
            }
            ComplexMatrix x = random_element(rherm, rng);
            x = (x + x.adjoint()).eval() * 0.5;
            HermitianEig ex = hermitian_eig(x, tol);
            double xgap;
            auto xcl = clusters(ex.eigenvalues, 10 * tol.eig, xgap);
            if (xcl.size() != d1 || xcl[0].second - xcl[0].first != d2 || xgap < 1e-6) {
                ok = false;
                break;
            }
            ComplexMatrix f = ex.eigenvectors.leftCols(d2);
            // Images of the first vector of range(e_11) under the algebra span C^{d1} (x) f_0.
            ComplexMatrix g(m, restricted.size());
            for (size_t i = 0; i < restricted.size(); i++) {
                g.col(i) = restricted[i] * f.col(0);
            }
            Eigen::JacobiSVD<ComplexMatrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
            ComplexMatrix cols(m, m);
            for (size_t k = 0; k < d1; k++) {
                double s = svd.singularValues()(k);
                if (s <= 1e-8) {
                    ok = false;
                    break;
                }
                ComplexMatrix t = ComplexMatrix::Zero(m, m);
                for (size_t i = 0; i < restricted.size(); i++) {
                    t += (svd.matrixV()(i, k) / s) * restricted[i];
                }
                ComplexMatrix tf = t * f;
                for (size_t j = 0; j < d2; j++) {
                    cols.col(k * d2 + j) = tf.col(j);
                }
            }
            if (!ok) {
                break;
            }
            if ((cols.adjoint() * cols - identity(m)).cwiseAbs().maxCoeff() > 1e-7) {
                ok = false;
                break;
            }
            blk.isometry = vc * cols;
            blocks.push_back(blk);
        }
        if (!ok) {
            continue;
        }
        auto key = [](const AlgebraBlock &b) {
            ComplexMatrix p = b.projector();
            Eigen::Index first = 0;
            while (first < p.rows() && p(first, first).real() <= 1e-8) {
                first++;
            }
            double weight = first < p.rows() ? p(first, first).real() : 0.0;
            return std::make_tuple(-(long)b.dim(), (long)first, -weight);
        };
        std::stable_sort(blocks.begin(), blocks.end(),
                         [&](const AlgebraBlock &a, const AlgebraBlock &b) { return key(a) < key(b); });
        dec.blocks = std::move(blocks);
        return dec;
    }
    fail(ErrorCode::Numerical, "structure decomposition: block separation ambiguous after retries");
}

DecompositionResiduals decomposition_residuals(const InducedAlgebra &algebra, const StructureDecomposition &dec) {
    DecompositionResiduals r;
    ComplexMatrix sum = ComplexMatrix::Zero(dec.dim, dec.dim);
    for (const auto &b : dec.blocks) {
        sum += b.projector();
    }
    r.completeness = op_norm(sum - identity(dec.dim));
    for (size_t i = 0; i < dec.blocks.size(); i++) {
        const auto &bi = dec.blocks[i];
        std::vector<ComplexMatrix> restricted;
        for (const auto &a : algebra.basis) {
            ComplexMatrix x = bi.isometry.adjoint() * a * bi.isometry;
            restricted.push_back(x);
            r.tensor_form = std::max(r.tensor_form, identity_factor_residual(x, {bi.d1, bi.d2}, 1));
            for (size_t j = 0; j < dec.blocks.size(); j++) {
                if (j != i) {
                    r.off_diagonal =
                        std::max(r.off_diagonal, op_norm(dec.blocks[j].isometry.adjoint() * a * bi.isometry));
                }
            }
        }
        long gap = (long)span_rank(restricted) - (long)(bi.d1 * bi.d1);
        if (std::abs(gap) > std::abs(r.fullness_gap)) {
            r.fullness_gap = gap;
        }
    }
    return r;
}

namespace {

size_t position_of(const LocalTerm &t, int register_id) {
    auto it = std::find(t.support.begin(), t.support.end(), register_id);
    if (it == t.support.end()) {
        fail(ErrorCode::RegisterNotInSupport,
             "register " + std::to_string(register_id) + " not in support of term " + std::to_string(t.id));
    }
    return it - t.support.begin();
}

void require_pair(const Instance &inst, const LocalTerm &h, const LocalTerm &h2, int register_id,
                  const Tolerances &tol) {
    position_of(h, register_id);
    position_of(h2, register_id);
    auto overlap = support_intersection(h.support, h2.support);
    if (overlap.size() != 1) {
        fail(ErrorCode::OverlapNotSingleton, "terms " + std::to_string(h.id) + " and " + std::to_string(h2.id) +
                                                 " overlap on " + std::to_string(overlap.size()) + " registers");
    }
    double c = pair_commutator_norm(inst, h, h2);
    if (c > tol.comm) {
        fail(ErrorCode::NonCommuting, "terms " + std::to_string(h.id) + " and " + std::to_string(h2.id) +
                                          " have commutator norm " + std::to_string(c));
    }
}

// The term with the register moved to the front: returns the matrix and the rest dimension.
ComplexMatrix front(const Instance &inst, const LocalTerm &t, int register_id, size_t &rest) {
    size_t pos = position_of(t, register_id);
    std::vector<size_t> dims = inst.support_dims(t.support);
    std::vector<size_t> perm{pos};
    rest = 1;
    for (size_t k = 0; k < dims.size(); k++) {
        if (k != pos) {
            perm.push_back(k);
            rest *= dims[k];
        }
    }
    return permute_factors(t.matrix, dims, perm);
}

void require_rank1(const Instance &inst, const LocalTerm &t, const Tolerances &tol) {
    (void)inst;
    size_t r = numerical_rank(t.matrix, tol);
    if (r != 1 || !is_projector(t.matrix, tol)) {
        fail(ErrorCode::NotRank1, "term " + std::to_string(t.id) + " is not a rank-1 projector");
    }
}

ComplexMatrix complement_basis(const ComplexMatrix &cols, size_t d) {
    ComplexMatrix p = identity(d) - projector_onto(cols);
    size_t r = d - cols.cols();
    if (r == 0) {
        return ComplexMatrix(d, 0);
    }
    return canonical_range(p, r);
}

}  // namespace

TwoTermStructure two_term_structure(const Instance &inst, const LocalTerm &h, const LocalTerm &h2, int register_id,
                                    const Tolerances &tol) {
    require_pair(inst, h, h2, register_id, tol);
    TwoTermStructure out;
    out.decomposition = structure_decompose(induced_algebra(inst, h, register_id, tol), tol);
    for (const auto &blk : out.decomposition.blocks) {
        TwoTermBlock tb;
        for (int which = 0; which < 2; which++) {
            const LocalTerm &t = which == 0 ? h : h2;
            size_t pos = position_of(t, register_id);
            std::vector<size_t> dims = inst.support_dims(t.support);
            ComplexMatrix c = compress_factor(t.matrix, dims, pos, blk.isometry);
            std::vector<size_t> split = dims;
            split[pos] = blk.d2;
            split.insert(split.begin() + pos, blk.d1);
            // h keeps factor 1 (drop factor 2 at pos + 1); h2 keeps factor 2 (drop factor 1 at pos).
            size_t drop = which == 0 ? pos + 1 : pos;
            double res = identity_factor_residual(c, split, drop);
            ComplexMatrix reduced = reduce_factor(c, split, drop);
            if (which == 0) {
                tb.h_factor = reduced;
                tb.h_residual = res;
            } else {
                tb.h2_factor = reduced;
                tb.h2_residual = res;
            }
        }
        out.blocks.push_back(std::move(tb));
    }
    return out;
}

Rank1Overlap rank1_overlap_decompose(const Instance &inst, const LocalTerm &p, const LocalTerm &q, int register_id,
                                     const Tolerances &tol) {
    require_rank1(inst, p, tol);
    require_pair(inst, p, q, register_id, tol);
    Rank1Overlap out;
    size_t d = inst.register_dim(register_id);
    size_t rest_p = 1, rest_q = 1;
    ComplexMatrix pf = front(inst, p, register_id, rest_p);
    ComplexMatrix qf = front(inst, q, register_id, rest_q);
    HermitianEig e = hermitian_eig(pf, tol);
    ComplexVector psi = e.eigenvectors.col(e.eigenvectors.cols() - 1);
    phase_normalize(psi);
    out.psi = psi;
    ComplexMatrix psi_mat(d, rest_p);
    for (size_t a = 0; a < d; a++) {
        for (size_t r = 0; r < rest_p; r++) {
            psi_mat(a, r) = psi(a * rest_p + r);
        }
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(psi_mat, Eigen::ComputeThinU);
    size_t k = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); i++) {
        k += svd.singularValues()(i) > 1e-8;
    }
    out.b_p = canonical_range(projector_onto(svd.matrixU().leftCols(k)), k);
    out.b_q = complement_basis(out.b_p, d);
    ComplexMatrix qs = compress_factor(qf, {d, rest_q}, 0, out.b_p);
    out.q_tilde = reduce_factor(qs, {k, rest_q}, 0);
    out.trivial_residual = identity_factor_residual(qs, {k, rest_q}, 0);
    out.p_zero_residual = out.b_q.cols() ? op_norm(compress_factor(pf, {d, rest_p}, 0, out.b_q)) : 0.0;
    return out;
}

Rank1Classification rank1_classify(const Instance &inst, const LocalTerm &p, const LocalTerm &q, int register_id,
                                   const Tolerances &tol) {
    require_rank1(inst, p, tol);
    require_rank1(inst, q, tol);
    require_pair(inst, p, q, register_id, tol);
    Rank1Classification c;
    size_t d = inst.register_dim(register_id);
    if (d == 1) {
        c.kind = Rank1Classification::Kind::Singular;
        c.psi = ComplexVector::Ones(1);
        return c;
    }
    Rank1Overlap ov = rank1_overlap_decompose(inst, p, q, register_id, tol);
    if (op_norm(ov.q_tilde) > 1e-6) {
        // Q is nonzero on B_P, which forces B_P to be one-dimensional: the register marginal of
        // P's state is pure.
        size_t rest = 1;
        ComplexMatrix pf = front(inst, p, register_id, rest);
        ComplexMatrix rho = partial_trace(pf, {0}, {d, rest});
        double purity = (rho * rho).trace().real();
        if (1 - purity > 1e-9 || ov.b_p.cols() != 1) {
            fail(ErrorCode::Numerical, "singular overlap with a mixed register marginal");
        }
        HermitianEig er = hermitian_eig(rho, tol);
        ComplexVector psi = er.eigenvectors.col(d - 1);
        phase_normalize(psi);
        c.kind = Rank1Classification::Kind::Singular;
        c.psi = psi;
    } else {
        c.kind = Rank1Classification::Kind::Reducing;
        c.pi = projector_onto(ov.b_p);
    }
    return c;
}

double singular_residual(const Instance &inst, const LocalTerm &p, const LocalTerm &q, int register_id,
                         const ComplexVector &psi) {
    double worst = 0;
    size_t d = inst.register_dim(register_id);
    ComplexMatrix v = psi;
    for (const LocalTerm *t : {&p, &q}) {
        size_t rest = 1;
        ComplexMatrix f = front(inst, *t, register_id, rest);
        ComplexMatrix r = compress_factor(f, {d, rest}, 0, v);
        worst = std::max(worst, op_norm(f - kron(outer(psi, psi), r)));
    }
    return worst;
}

double reducing_residual(const Instance &inst, const LocalTerm &p, const LocalTerm &q, int register_id,
                         const ComplexMatrix &pi) {
    auto ext = [&](const LocalTerm &t) {
        return embed_local(pi, {position_of(t, register_id)}, inst.support_dims(t.support));
    };
    ComplexMatrix pp = ext(p), pq = ext(q);
    return std::max(op_norm(pp * p.matrix * pp - p.matrix), op_norm(pq * q.matrix * pq));
}

std::vector<size_t> decomposition_signature(const Instance &inst, const LocalTerm &p, const LocalTerm &q,
                                            int register_id, const Tolerances &tol) {
    require_pair(inst, p, q, register_id, tol);
    StructureDecomposition dec = structure_decompose(induced_algebra(inst, p, register_id, tol), tol);
    std::vector<size_t> sig;
    for (const auto &b : dec.blocks) {
        sig.push_back(b.dim());
    }
    std::sort(sig.begin(), sig.end());
    return sig;
}

double term_projector_commutator(const Instance &inst, const LocalTerm &h, int register_id, const ComplexMatrix &pi) {
    ComplexMatrix e = embed_local(pi, {position_of(h, register_id)}, inst.support_dims(h.support));
    return op_norm(commutator(h.matrix, e));
}

std::optional<SemiSeparableWitness> detect_semi_separable(const Instance &inst, int register_id,
                                                          const Tolerances &tol) {
    std::vector<int> incident = inst.incident_terms(register_id);
    size_t d = inst.register_dim(register_id);
    for (int e : incident) {
        std::vector<int> others;
        for (int t : incident) {
            if (t != e) {
                others.push_back(t);
            }
        }
        InducedAlgebra j = others.empty() ? make_algebra({}, d, tol)
                                          : joint_induced_algebra(inst, others, register_id, tol);
        StructureDecomposition dec = structure_decompose(j, tol);
        std::vector<ComplexMatrix> pieces;
        for (const auto &b : dec.blocks) {
            for (size_t col = 0; col < b.d2; col++) {
                ComplexMatrix v(d, b.d1);
                for (size_t k = 0; k < b.d1; k++) {
                    v.col(k) = b.isometry.col(k * b.d2 + col);
                }
                pieces.push_back(projector_onto(v));
            }
        }
        if (pieces.size() < 2) {
            continue;
        }
        SemiSeparableWitness w;
        w.register_id = register_id;
        w.projectors = std::move(pieces);
        w.exceptional_term = e;
        for (const auto &pi : w.projectors) {
            if (term_projector_commutator(inst, inst.term(e), register_id, pi) > 10 * tol.comm) {
                w.exceptional_breaks = true;
            }
        }
        return w;
    }
    return std::nullopt;
}

std::vector<ComplexMatrix> block_projectors(const StructureDecomposition &dec) {
    std::vector<ComplexMatrix> out;
    for (const auto &b : dec.blocks) {
        out.push_back(b.projector());
    }
    return out;
}

std::optional<ComplexMatrix> detect_classical(const Instance &inst, int register_id, const Tolerances &tol) {
    std::vector<int> incident = inst.incident_terms(register_id);
    size_t d = inst.register_dim(register_id);
    InducedAlgebra j = incident.empty() ? make_algebra({}, d, tol)
                                        : joint_induced_algebra(inst, incident, register_id, tol);
    StructureDecomposition dec = structure_decompose(j, tol);
    std::vector<ComplexVector> cols;
    for (const auto &b : dec.blocks) {
        if (b.d1 != 1) {
            return std::nullopt;
        }
        for (Eigen::Index k = 0; k < b.isometry.cols(); k++) {
            cols.push_back(b.isometry.col(k));
        }
    }
    auto lead = [](const ComplexVector &v) {
        Eigen::Index i = 0;
        while (i < v.size() && std::abs(v(i)) <= 1e-8) {
            i++;
        }
        return std::make_pair(i, -std::abs(i < v.size() ? v(i) : Complex(0)));
    };
    std::stable_sort(cols.begin(), cols.end(),
                     [&](const ComplexVector &a, const ComplexVector &b) { return lead(a) < lead(b); });
    ComplexMatrix u(d, d);
    for (size_t k = 0; k < d; k++) {
        u.col(k) = cols[k];
    }
    return u;
}

}  // namespace clh
