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

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace clh {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::Numerical: return "Numerical";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::UnknownRegister: return "UnknownRegister";
        case ErrorCode::RegisterNotInSupport: return "RegisterNotInSupport";
        case ErrorCode::NonCommuting: return "NonCommuting";
        case ErrorCode::OverlapNotSingleton: return "OverlapNotSingleton";
        case ErrorCode::NotRank1: return "NotRank1";
        case ErrorCode::NotProjector: return "NotProjector";
        case ErrorCode::HypothesisViolated: return "HypothesisViolated";
        case ErrorCode::OverlapViolation: return "OverlapViolation";
        case ErrorCode::BlockOutOfRange: return "BlockOutOfRange";
        case ErrorCode::NotClassical: return "NotClassical";
        case ErrorCode::InvalidWitness: return "InvalidWitness";
        case ErrorCode::BranchOutOfRange: return "BranchOutOfRange";
        case ErrorCode::NoCyclicOrder: return "NoCyclicOrder";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::VacuousBlock: return "VacuousBlock";
        case ErrorCode::MoreThanTwoActors: return "MoreThanTwoActors";
        case ErrorCode::GridTooSmall: return "GridTooSmall";
        case ErrorCode::RoutingFailed: return "RoutingFailed";
        case ErrorCode::NotTwoLocal: return "NotTwoLocal";
        case ErrorCode::BudgetExhausted: return "BudgetExhausted";
        case ErrorCode::GatesDoNotCommute: return "GatesDoNotCommute";
        case ErrorCode::NotProjectors: return "NotProjectors";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InsufficientDimension: return "InsufficientDimension";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

void fail(ErrorCode code, const std::string &message) {
    throw Error(code, message);
}

const Tolerances &Tolerances::defaults() {
    static const Tolerances t{};
    return t;
}

double op_norm(const ComplexMatrix &m) {
    if (m.size() == 0) {
        return 0;
    }
    if (m.rows() == m.cols() && m.rows() <= 1024) {
        double scale = m.cwiseAbs().maxCoeff();
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * scale) {
            ComplexMatrix h = (m + m.adjoint()) * 0.5;
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
            return solver.eigenvalues().cwiseAbs().maxCoeff();
        }
        if ((m + m.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * scale) {
            ComplexMatrix h = (m - m.adjoint()) * Complex(0, -0.5);
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
            return solver.eigenvalues().cwiseAbs().maxCoeff();
        }
    }
    if (m.rows() <= 512 && m.cols() <= 512) {
        Eigen::BDCSVD<ComplexMatrix> svd(m);
        return svd.singularValues()(0);
    }
    double n1 = m.cwiseAbs().colwise().sum().maxCoeff();
    double ninf = m.cwiseAbs().rowwise().sum().maxCoeff();
    return std::sqrt(n1 * ninf);
}

bool all_finite(const ComplexMatrix &m) {
    for (Eigen::Index i = 0; i < m.size(); i++) {
        if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) {
            return false;
        }
    }
    return true;
}

bool is_hermitian(const ComplexMatrix &m, const Tolerances &tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    return op_norm(m - m.adjoint()) <= scaled(tol.herm, op_norm(m));
}

bool is_projector(const ComplexMatrix &m, const Tolerances &tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    double s = scaled(tol.recon, op_norm(m));
    return op_norm(m - m.adjoint()) <= s && op_norm(m * m - m) <= s;
}

ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    return a * b - b * a;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return r;
}

ComplexMatrix identity(size_t d) {
    return ComplexMatrix::Identity(d, d);
}

ComplexMatrix outer(const ComplexVector &a, const ComplexVector &b) {
    return a * b.adjoint();
}

ComplexMatrix projector_onto(const ComplexMatrix &columns) {
    return columns * columns.adjoint();
}

size_t product(const std::vector<size_t> &dims) {
    size_t p = 1;
    for (size_t d : dims) {
        p *= d;
    }
    return p;
}

void phase_normalize(ComplexVector &v, double cutoff) {
    double best = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); i++) {
        if (std::abs(v(i)) > cutoff * best) {
            Complex phase = std::conj(v(i)) / std::abs(v(i));
            v *= phase;
            return;
        }
    }
}

namespace {

void check_hermitian_input(const ComplexMatrix &m, const Tolerances &tol) {
    if (m.rows() != m.cols()) {
        fail(ErrorCode::DimensionMismatch, "hermitian_eig needs a square matrix");
    }
    if (!all_finite(m)) {
        fail(ErrorCode::Numerical, "matrix has non-finite entries");
    }
    double n = op_norm(m);
    double asym = op_norm(m - m.adjoint());
    if (asym > scaled(tol.herm, n)) {
        fail(ErrorCode::NotHermitian, "||M - M^dag|| = " + std::to_string(asym));
    }
}

// Position of the first entry that is not negligible, used for deterministic ordering
// of eigenvectors inside a degenerate cluster.
std::pair<Eigen::Index, double> lead_key(const ComplexVector &v) {
    double best = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); i++) {
        if (std::abs(v(i)) > 1e-8 * best) {
            return {i, -std::abs(v(i))};
        }
    }
    return {v.size(), 0};
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix &m, const Tolerances &tol) {
    check_hermitian_input(m, tol);
    HermitianEig out;
    if (m.rows() == 0) {
        out.eigenvalues = RealVector(0);
        out.eigenvectors = ComplexMatrix(0, 0);
        return out;
    }
    ComplexMatrix h = (m + m.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        fail(ErrorCode::Numerical, "eigensolver did not converge");
    }
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    Eigen::Index n = out.eigenvalues.size();
    double gap = scaled(tol.eig, std::max(std::abs(out.eigenvalues(0)), std::abs(out.eigenvalues(n - 1))));
    for (Eigen::Index k = 0; k < n; k++) {
        ComplexVector v = out.eigenvectors.col(k);
        phase_normalize(v);
        out.eigenvectors.col(k) = v;
    }
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && out.eigenvalues(end) - out.eigenvalues(end - 1) <= gap) {
            end++;
        }
        if (end - start > 1) {
            std::vector<Eigen::Index> order(end - start);
            std::iota(order.begin(), order.end(), start);
            std::vector<std::pair<Eigen::Index, double>> keys(n);
            for (Eigen::Index k = start; k < end; k++) {
                keys[k] = lead_key(out.eigenvectors.col(k));
            }
            std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
                return keys[a] < keys[b];
            });
            ComplexMatrix cols(m.rows(), end - start);
            for (size_t k = 0; k < order.size(); k++) {
                cols.col(k) = out.eigenvectors.col(order[k]);
            }
            out.eigenvectors.middleCols(start, end - start) = cols;
        }
        start = end;
    }
    return out;
}

RealVector hermitian_eigenvalues(const ComplexMatrix &m, const Tolerances &tol) {
    check_hermitian_input(m, tol);
    if (m.rows() == 0) {
        return RealVector(0);
    }
    ComplexMatrix h = (m + m.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        fail(ErrorCode::Numerical, "eigensolver did not converge");
    }
    return solver.eigenvalues();
}

ComplexMatrix eigenspace(const HermitianEig &e, double lo, double hi) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index k = 0; k < e.eigenvalues.size(); k++) {
        if (e.eigenvalues(k) > lo && e.eigenvalues(k) <= hi) {
            cols.push_back(k);
        }
    }
    ComplexMatrix r(e.eigenvectors.rows(), (Eigen::Index)cols.size());
    for (size_t k = 0; k < cols.size(); k++) {
        r.col(k) = e.eigenvectors.col(cols[k]);
    }
    return r;
}

ComplexMatrix OperatorSchmidt::recombine() const {
    ComplexMatrix r = ComplexMatrix::Zero(dim_a * dim_b, dim_a * dim_b);
    for (const auto &t : triples) {
        r += t.coefficient * kron(t.a, t.b);
    }
    return r;
}

OperatorSchmidt operator_schmidt(const ComplexMatrix &m, size_t dim_a, size_t dim_b, const Tolerances &tol) {
    size_t n = dim_a * dim_b;
    if ((size_t)m.rows() != n || (size_t)m.cols() != n) {
        fail(ErrorCode::DimensionMismatch,
             "operator_schmidt: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                 ", cut is " + std::to_string(dim_a) + "x" + std::to_string(dim_b));
    }
    ComplexMatrix r(dim_a * dim_a, dim_b * dim_b);
    for (size_t a = 0; a < dim_a; a++) {
        for (size_t ap = 0; ap < dim_a; ap++) {
            for (size_t b = 0; b < dim_b; b++) {
                for (size_t bp = 0; bp < dim_b; bp++) {
                    r(a * dim_a + ap, b * dim_b + bp) = m(a * dim_b + b, ap * dim_b + bp);
                }
            }
        }
    }
    OperatorSchmidt out;
    out.dim_a = dim_a;
    out.dim_b = dim_b;
    Eigen::JacobiSVD<ComplexMatrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector &s = svd.singularValues();
    if (s.size() == 0) {
        return out;
    }
    double cutoff = scaled(tol.recon, s(0));
    for (Eigen::Index i = 0; i < s.size(); i++) {
        if (s(i) <= cutoff) {
            break;
        }
        SchmidtTriple t;
        t.coefficient = s(i);
        t.a = ComplexMatrix(dim_a, dim_a);
        t.b = ComplexMatrix(dim_b, dim_b);
        for (size_t a = 0; a < dim_a; a++) {
            for (size_t ap = 0; ap < dim_a; ap++) {
                t.a(a, ap) = svd.matrixU()(a * dim_a + ap, i);
            }
        }
        for (size_t b = 0; b < dim_b; b++) {
            for (size_t bp = 0; bp < dim_b; bp++) {
                t.b(b, bp) = std::conj(svd.matrixV()(b * dim_b + bp, i));
            }
        }
        out.triples.push_back(std::move(t));
    }
    return out;
}

ComplexMatrix spectral_projector_at_least(const ComplexMatrix &b, double threshold, const Tolerances &tol) {
    HermitianEig e = hermitian_eig(b, tol);
    std::vector<Eigen::Index> cols;
    for (Eigen::Index k = 0; k < e.eigenvalues.size(); k++) {
        if (e.eigenvalues(k) >= threshold) {
            cols.push_back(k);
        }
    }
    ComplexMatrix keep(b.rows(), (Eigen::Index)cols.size());
    for (size_t k = 0; k < cols.size(); k++) {
        keep.col(k) = e.eigenvectors.col(cols[k]);
    }
    return projector_onto(keep);
}

ComplexMatrix round_spectrum(const ComplexMatrix &b, const Tolerances &tol) {
    HermitianEig e = hermitian_eig(b, tol);
    if (e.eigenvalues.size() == 0) {
        return b;
    }
    double n = std::max(std::abs(e.eigenvalues(0)), std::abs(e.eigenvalues(e.eigenvalues.size() - 1)));
    double eps = scaled(tol.eig, n);
    if (e.eigenvalues(0) < -eps) {
        fail(ErrorCode::NotPSD, "smallest eigenvalue " + std::to_string(e.eigenvalues(0)));
    }
    return projector_onto(eigenspace(e, eps, std::numeric_limits<double>::infinity()));
}

LocalIndexer::LocalIndexer(const std::vector<size_t> &dims, const std::vector<size_t> &positions) {
    size_t n = dims.size();
    std::vector<size_t> strides(n, 1);
    for (size_t k = n; k-- > 1;) {
        strides[k - 1] = strides[k] * dims[k];
    }
    total_ = n == 0 ? 1 : strides[0] * dims[0];
    std::vector<bool> in_support(n, false);
    for (size_t p : positions) {
        if (p >= n || in_support[p]) {
            fail(ErrorCode::DimensionMismatch, "bad factor position in LocalIndexer");
        }
        in_support[p] = true;
    }
    size_t local = 1;
    for (size_t p : positions) {
        local *= dims[p];
    }
    local_offsets_.assign(local, 0);
    for (size_t l = 0; l < local; l++) {
        size_t rem = l;
        size_t off = 0;
        for (size_t k = positions.size(); k-- > 0;) {
            size_t p = positions[k];
            off += (rem % dims[p]) * strides[p];
            rem /= dims[p];
        }
        local_offsets_[l] = off;
    }
    std::vector<size_t> rest;
    for (size_t k = 0; k < n; k++) {
        if (!in_support[k]) {
            rest.push_back(k);
        }
    }
    size_t nb = total_ / local;
    bases_.assign(nb, 0);
    for (size_t c = 0; c < nb; c++) {
        size_t rem = c;
        size_t off = 0;
        for (size_t k = rest.size(); k-- > 0;) {
            size_t p = rest[k];
            off += (rem % dims[p]) * strides[p];
            rem /= dims[p];
        }
        bases_[c] = off;
    }
}

ComplexMatrix embed_local(const ComplexMatrix &op, const std::vector<size_t> &positions, const std::vector<size_t> &dims) {
    LocalIndexer ix(dims, positions);
    if ((size_t)op.rows() != ix.local_dim() || (size_t)op.cols() != ix.local_dim()) {
        fail(ErrorCode::DimensionMismatch, "embed_local: operator does not match support dimension");
    }
    size_t d = ix.total_dim();
    ComplexMatrix r = ComplexMatrix::Zero(d, d);
    const auto &off = ix.local_offsets();
    for (size_t base : ix.bases()) {
        for (size_t i = 0; i < off.size(); i++) {
            for (size_t j = 0; j < off.size(); j++) {
                r(base + off[i], base + off[j]) = op(i, j);
            }
        }
    }
    return r;
}

void apply_local(const ComplexMatrix &op, const LocalIndexer &indexer, const ComplexMatrix &x, ComplexMatrix &y) {
    const auto &off = indexer.local_offsets();
    const auto &bases = indexer.bases();
    size_t ld = off.size();
    Eigen::Index cols = x.cols();
    y.resize(x.rows(), cols);
    ComplexMatrix gathered(ld, cols);
    for (size_t base : bases) {
        for (size_t i = 0; i < ld; i++) {
            gathered.row(i) = x.row(base + off[i]);
        }
        ComplexMatrix out = op * gathered;
        for (size_t i = 0; i < ld; i++) {
            y.row(base + off[i]) = out.row(i);
        }
    }
}

ComplexMatrix permute_factors(const ComplexMatrix &m, const std::vector<size_t> &dims, const std::vector<size_t> &perm) {
    size_t n = dims.size();
    if (perm.size() != n) {
        fail(ErrorCode::DimensionMismatch, "permute_factors: permutation size");
    }
    size_t d = product(dims);
    if ((size_t)m.rows() != d || (size_t)m.cols() != d) {
        fail(ErrorCode::DimensionMismatch, "permute_factors: matrix size");
    }
    std::vector<size_t> old_strides(n, 1);
    for (size_t k = n; k-- > 1;) {
        old_strides[k - 1] = old_strides[k] * dims[k];
    }
    std::vector<size_t> map(d);
    for (size_t idx = 0; idx < d; idx++) {
        size_t rem = idx;
        size_t old = 0;
        for (size_t k = n; k-- > 0;) {
            size_t dk = dims[perm[k]];
            old += (rem % dk) * old_strides[perm[k]];
            rem /= dk;
        }
        map[idx] = old;
    }
    ComplexMatrix r(d, d);
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            r(i, j) = m(map[i], map[j]);
        }
    }
    return r;
}

ComplexMatrix partial_trace(const ComplexMatrix &m, const std::vector<size_t> &keep, const std::vector<size_t> &dims) {
    size_t n = dims.size();
    size_t d = product(dims);
    if ((size_t)m.rows() != d || (size_t)m.cols() != d) {
        fail(ErrorCode::DimensionMismatch, "partial_trace: matrix does not match dims");
    }
    std::vector<bool> kept(n, false);
    std::vector<size_t> perm;
    for (size_t k : keep) {
        if (k >= n || kept[k]) {
            fail(ErrorCode::DimensionMismatch, "partial_trace: bad keep list");
        }
        kept[k] = true;
        perm.push_back(k);
    }
    size_t dk = 1;
    for (size_t k : keep) {
        dk *= dims[k];
    }
    for (size_t k = 0; k < n; k++) {
        if (!kept[k]) {
            perm.push_back(k);
        }
    }
    ComplexMatrix p = permute_factors(m, dims, perm);
    size_t dc = d / dk;
    ComplexMatrix r = ComplexMatrix::Zero(dk, dk);
    for (size_t a = 0; a < dk; a++) {
        for (size_t b = 0; b < dk; b++) {
            Complex s = 0;
            for (size_t c = 0; c < dc; c++) {
                s += p(a * dc + c, b * dc + c);
            }
            r(a, b) = s;
        }
    }
    return r;
}

ComplexMatrix compress_factor(const ComplexMatrix &m, const std::vector<size_t> &dims, size_t pos, const ComplexMatrix &v) {
    size_t n = dims.size();
    if (pos >= n || (size_t)v.rows() != dims[pos]) {
        fail(ErrorCode::DimensionMismatch, "compress_factor: isometry does not match factor");
    }
    std::vector<size_t> to_front{pos};
    size_t rest = 1;
    for (size_t k = 0; k < n; k++) {
        if (k != pos) {
            to_front.push_back(k);
            rest *= dims[k];
        }
    }
    ComplexMatrix f = permute_factors(m, dims, to_front);
    ComplexMatrix w = kron(v, identity(rest));
    ComplexMatrix c = w.adjoint() * f * w;
    std::vector<size_t> new_dims{(size_t)v.cols()};
    for (size_t k = 0; k < n; k++) {
        if (k != pos) {
            new_dims.push_back(dims[k]);
        }
    }
    // Factor 0 of c is the compressed one; move it back to slot pos.
    std::vector<size_t> back;
    for (size_t k = 1; k <= pos; k++) {
        back.push_back(k);
    }
    back.insert(back.begin() + pos, 0);
    for (size_t k = pos + 1; k < n; k++) {
        back.push_back(k);
    }
    return permute_factors(c, new_dims, back);
}

ComplexMatrix reduce_factor(const ComplexMatrix &m, const std::vector<size_t> &dims, size_t pos) {
    std::vector<size_t> keep;
    for (size_t k = 0; k < dims.size(); k++) {
        if (k != pos) {
            keep.push_back(k);
        }
    }
    return partial_trace(m, keep, dims) / (double)dims[pos];
}

double identity_factor_residual(const ComplexMatrix &m, const std::vector<size_t> &dims, size_t pos) {
    ComplexMatrix r = reduce_factor(m, dims, pos);
    std::vector<size_t> positions;
    for (size_t k = 0; k < dims.size(); k++) {
        if (k != pos) {
            positions.push_back(k);
        }
    }
    return op_norm(m - embed_local(r, positions, dims));
}

ComplexVector vectorize(const ComplexMatrix &m) {
    ComplexVector v(m.size());
    Eigen::Index d = m.cols();
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        for (Eigen::Index j = 0; j < d; j++) {
            v(i * d + j) = m(i, j);
        }
    }
    return v;
}

ComplexMatrix unvectorize(const ComplexVector &v, size_t d) {
    ComplexMatrix m(d, d);
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            m(i, j) = v(i * d + j);
        }
    }
    return m;
}

ComplexMatrix random_ginibre(size_t rows, size_t cols, Rng &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (size_t i = 0; i < rows; i++) {
        for (size_t j = 0; j < cols; j++) {
            double re = g(rng);
            double im = g(rng);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

ComplexMatrix random_unitary(size_t d, Rng &rng) {
    ComplexMatrix z = random_ginibre(d, d, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (size_t k = 0; k < d; k++) {
        Complex diag = r(k, k);
        Complex phase = std::abs(diag) > 0 ? diag / std::abs(diag) : Complex(1, 0);
        q.col(k) *= phase;
    }
    return q;
}

ComplexMatrix random_hermitian(size_t d, Rng &rng) {
    ComplexMatrix z = random_ginibre(d, d, rng);
    return (z + z.adjoint()) * 0.5;
}

ComplexVector random_state(size_t d, Rng &rng) {
    ComplexVector v = random_ginibre(d, 1, rng).col(0);
    v.normalize();
    phase_normalize(v);
    return v;
}

ComplexMatrix random_projector(size_t d, size_t k, Rng &rng) {
    ComplexMatrix u = random_unitary(d, rng);
    return projector_onto(u.leftCols(k));
}

}  // namespace clh
