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

#include "clh/jordan.h"

#include <cmath>

namespace clh {

namespace {

void require_projector(const ComplexMatrix &m, const char *name, const Tolerances &tol) {
    if (!is_projector(m, tol)) {
        fail(ErrorCode::NotProjector, std::string(name) + " is not a Hermitian idempotent");
    }
}

ComplexMatrix range_of(const ComplexMatrix &proj, const Tolerances &tol) {
    HermitianEig e = hermitian_eig(proj, tol);
    return eigenspace(e, 0.5, 2.0);
}

JordanBlock one_dim(const ComplexVector &v, bool in_p, bool in_q) {
    JordanBlock b;
    b.dim = 1;
    b.basis = v;
    if (in_p) {
        b.p_vec = v;
    }
    if (in_q) {
        b.q_vec = v;
    }
    b.eta = in_p && in_q ? 1.0 : 0.0;
    return b;
}

}  // namespace

JordanDecomposition jordan_decompose(const ComplexMatrix &p, const ComplexMatrix &q, const Tolerances &tol) {
    if (p.rows() != q.rows() || p.cols() != q.cols()) {
        fail(ErrorCode::DimensionMismatch, "projector pair with different dimensions");
    }
    require_projector(p, "P", tol);
    require_projector(q, "Q", tol);
    size_t d = p.rows();
    JordanDecomposition dec;
    dec.dim = d;
    std::vector<JordanBlock> two, shared, p_only, q_only, null;

    ComplexMatrix vp = range_of(p, tol);
    ComplexMatrix covered = ComplexMatrix::Zero(d, 0);
    auto cover = [&](const ComplexVector &v) {
        covered.conservativeResize(d, covered.cols() + 1);
        covered.col(covered.cols() - 1) = v;
    };
    if (vp.cols() > 0) {
        ComplexMatrix m = vp.adjoint() * q * vp;
        m = (m + m.adjoint()).eval() * 0.5;
        HermitianEig e = hermitian_eig(m, tol);
        for (Eigen::Index k = 0; k < e.eigenvalues.size(); k++) {
            double eta = std::clamp(e.eigenvalues(k), 0.0, 1.0);
            ComplexVector pv = vp * e.eigenvectors.col(k);
            pv.normalize();
            phase_normalize(pv);
            if (eta >= 1 - tol.eig) {
                shared.push_back(one_dim(pv, true, true));
                cover(pv);
            } else if (eta <= tol.eig) {
                p_only.push_back(one_dim(pv, true, false));
                cover(pv);
            } else {
                ComplexVector qv = q * pv;
                qv.normalize();
                ComplexVector qt = qv - pv * pv.dot(qv);
                qt.normalize();
                JordanBlock b;
                b.dim = 2;
                b.basis = ComplexMatrix(d, 2);
                b.basis.col(0) = pv;
                b.basis.col(1) = qt;
                b.p_vec = pv;
                b.q_vec = qv;
                b.qtilde_vec = qt;
                b.eta = eta;
                two.push_back(std::move(b));
                cover(pv);
                cover(qt);
            }
        }
    }
    // The rest is orthogonal to range(P) and invariant under Q.
    ComplexMatrix rest_proj = identity(d) - projector_onto(covered);
    rest_proj = (rest_proj + rest_proj.adjoint()).eval() * 0.5;
    ComplexMatrix w = range_of(rest_proj, tol);
    if (w.cols() > 0) {
        ComplexMatrix m = w.adjoint() * q * w;
        m = (m + m.adjoint()).eval() * 0.5;
        HermitianEig e = hermitian_eig(m, tol);
        for (Eigen::Index k = e.eigenvalues.size(); k-- > 0;) {
            ComplexVector v = w * e.eigenvectors.col(k);
            v.normalize();
            phase_normalize(v);
            if (e.eigenvalues(k) > 0.5) {
                q_only.push_back(one_dim(v, false, true));
            } else {
                null.push_back(one_dim(v, false, false));
            }
        }
    }
    for (auto *group : {&two, &shared, &p_only, &q_only, &null}) {
        for (auto &b : *group) {
            dec.blocks.push_back(std::move(b));
        }
    }
    return dec;
}

ComplexMatrix jordan_product_form(const JordanDecomposition &dec) {
    ComplexMatrix out = ComplexMatrix::Zero(dec.dim, dec.dim);
    for (const auto &b : dec.blocks) {
        if (b.dim == 2) {
            out += std::sqrt(b.eta) * *b.p_vec * b.q_vec->adjoint();
        } else if (b.shared()) {
            out += *b.p_vec * b.p_vec->adjoint();
        }
    }
    return out;
}

JordanResiduals jordan_residuals(const JordanDecomposition &dec, const ComplexMatrix &p, const ComplexMatrix &q) {
    JordanResiduals r;
    size_t d = dec.dim;
    ComplexMatrix all(d, 0);
    ComplexMatrix prec = ComplexMatrix::Zero(d, d), qrec = ComplexMatrix::Zero(d, d);
    for (const auto &b : dec.blocks) {
        ComplexMatrix proj = projector_onto(b.basis);
        for (const ComplexMatrix *op : {&p, &q}) {
            ComplexMatrix img = *op * b.basis;
            r.invariance = std::max(r.invariance, (img - proj * img).cwiseAbs().maxCoeff());
        }
        if (b.p_vec) {
            prec += *b.p_vec * b.p_vec->adjoint();
        }
        if (b.q_vec) {
            qrec += *b.q_vec * b.q_vec->adjoint();
        }
        Eigen::Index n = all.cols();
        all.conservativeResize(d, n + b.basis.cols());
        all.rightCols(b.basis.cols()) = b.basis;
    }
    if (all.cols() > 0) {
        r.orthogonality = (all.adjoint() * all - identity(all.cols())).cwiseAbs().maxCoeff();
    }
    if ((size_t)all.cols() != d) {
        r.orthogonality = std::max(r.orthogonality, 1.0);
    }
    r.reconstruction = std::max((prec - p).cwiseAbs().maxCoeff(), (qrec - q).cwiseAbs().maxCoeff());
    return r;
}

}  // namespace clh
