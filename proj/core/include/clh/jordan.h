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

#ifndef CLH_JORDAN_H
#define CLH_JORDAN_H

#include <optional>
#include <vector>

#include "clh/numerics.h"

namespace clh {

/// A 1- or 2-dimensional subspace invariant under both projectors.
///
/// 1-dim blocks: p_vec is present iff P acts as 1, q_vec iff Q acts as 1.
/// 2-dim blocks: basis = [p_vec, qtilde_vec] and q_vec = sqrt(eta) p_vec + sqrt(1 - eta) qtilde_vec.
struct JordanBlock {
    size_t dim = 1;
    ComplexMatrix basis;
    std::optional<ComplexVector> p_vec;
    std::optional<ComplexVector> q_vec;
    /// |<p|q>|^2; 1 for shared 1-dim blocks, 0 for other 1-dim blocks.
    double eta = 0;
    std::optional<ComplexVector> qtilde_vec;

    bool shared() const {
        return dim == 1 && p_vec && q_vec;
    }
};

struct JordanDecomposition {
    size_t dim = 0;
    /// 2-dim blocks in ascending eta, then shared, P-only, Q-only, and null 1-dim blocks.
    std::vector<JordanBlock> blocks;
};

JordanDecomposition jordan_decompose(const ComplexMatrix &p, const ComplexMatrix &q,
                                     const Tolerances &tol = Tolerances::defaults());

/// sum_b sqrt(eta_b) |p_b><q_b| over 2-dim blocks plus |p><p| over shared blocks; equals P Q.
ComplexMatrix jordan_product_form(const JordanDecomposition &dec);

/// sum_b f(eta_b) |v_b><v_b| with v_b = p_b (which = 0) or v_b = q_b (which = 1), over 2-dim
/// and shared blocks.
template <typename F>
ComplexMatrix jordan_calculus(const JordanDecomposition &dec, int which, F f) {
    ComplexMatrix out = ComplexMatrix::Zero(dec.dim, dec.dim);
    for (const auto &b : dec.blocks) {
        if (b.dim == 2 || b.shared()) {
            const ComplexVector &v = which == 0 ? *b.p_vec : *b.q_vec;
            out += f(b.eta) * v * v.adjoint();
        }
    }
    return out;
}

struct JordanResiduals {
    double invariance = 0;
    double orthogonality = 0;
    double reconstruction = 0;
};

JordanResiduals jordan_residuals(const JordanDecomposition &dec, const ComplexMatrix &p, const ComplexMatrix &q);

}  // namespace clh

#endif
