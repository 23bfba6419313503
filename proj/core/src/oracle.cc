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

#include "clh/oracle.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <thread>

namespace clh {

const char *oracle_method_name(OracleMethod m) {
    switch (m) {
        case OracleMethod::Auto: return "auto";
        case OracleMethod::Dense: return "dense";
        case OracleMethod::Iterative: return "iterative";
        case OracleMethod::TraceProduct: return "trace";
    }
    return "unknown";
}

namespace {

struct LocalOp {
    const ComplexMatrix *matrix;
    LocalIndexer indexer;
};

std::vector<LocalOp> local_ops(const Instance &inst, const std::vector<LocalTerm> &terms) {
    std::vector<size_t> dims = inst.dims();
    std::vector<LocalOp> ops;
    for (const auto &t : terms) {
        std::vector<size_t> pos;
        for (int r : t.support) {
            pos.push_back(inst.register_index(r));
        }
        ops.push_back({&t.matrix, LocalIndexer(dims, pos)});
    }
    return ops;
}

void apply_sum(const std::vector<LocalOp> &ops, const ComplexVector &x, ComplexVector &y) {
    y = ComplexVector::Zero(x.size());
    ComplexMatrix tmp;
    ComplexMatrix xm = x;
    for (const auto &op : ops) {
        apply_local(*op.matrix, op.indexer, xm, tmp);
        y += tmp.col(0);
    }
}

double dense_lambda0(const Instance &inst, OracleResult &res) {
    ComplexMatrix h = hamiltonian_dense(inst);
    RealVector ev = hermitian_eigenvalues(h);
    double l0 = ev(0);
    size_t deg = 0;
    for (Eigen::Index k = 0; k < ev.size(); k++) {
        deg += ev(k) <= l0 + 1e-8;
    }
    res.ground_degeneracy = deg;
    return l0;
}

double lanczos_lambda0(const Instance &inst) {
    size_t d = inst.total_dim();
    std::vector<LocalOp> ops = local_ops(inst, inst.terms);
    double hnorm = 0;
    for (const auto &t : inst.terms) {
        hnorm += op_norm(t.matrix);
    }
    size_t m = std::min<size_t>(d, 40);
    Rng rng(12345);
    ComplexVector v = random_state(d, rng);
    double theta = 0;
    for (int restart = 0; restart < 200; restart++) {
        ComplexMatrix basis(d, m + 1);
        std::vector<double> alpha, beta;
        basis.col(0) = v;
        ComplexVector w;
        size_t k = 0;
        for (; k < m; k++) {
            apply_sum(ops, basis.col(k), w);
            double a = basis.col(k).dot(w).real();
            alpha.push_back(a);
            w -= a * basis.col(k);
            if (k > 0) {
                w -= beta[k - 1] * basis.col(k - 1);
            }
            for (int pass = 0; pass < 2; pass++) {
                ComplexVector overlaps = basis.leftCols(k + 1).adjoint() * w;
                w -= basis.leftCols(k + 1) * overlaps;
            }
            double b = w.norm();
            beta.push_back(b);
            if (b <= 1e-12 * std::max(1.0, hnorm) || k + 1 == d) {
                k++;
                break;
            }
            basis.col(k + 1) = w / b;
        }
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
        for (size_t i = 0; i < k; i++) {
            tri(i, i) = alpha[i];
            if (i + 1 < k) {
                tri(i, i + 1) = tri(i + 1, i) = beta[i];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
        theta = es.eigenvalues()(0);
        Eigen::VectorXcd y = es.eigenvectors().col(0).cast<Complex>();
        v = basis.leftCols(k) * y;
        v.normalize();
        ComplexVector hv;
        apply_sum(ops, v, hv);
        double residual = (hv - theta * v).norm();
        if (residual <= 1e-8 * std::max(1.0, std::abs(theta))) {
            return theta;
        }
    }
    fail(ErrorCode::Numerical, "Lanczos did not reach residual 1e-8");
}

}  // namespace

void apply_hamiltonian(const Instance &inst, const ComplexVector &x, ComplexVector &y) {
    apply_sum(local_ops(inst, inst.terms), x, y);
}

OracleResult lambda0_exact(const Instance &inst, OracleMethod method) {
    OracleResult res;
    res.dim = inst.total_dim();
    if (method == OracleMethod::Auto) {
        method = res.dim <= kAutoDenseLimit ? OracleMethod::Dense : OracleMethod::Iterative;
    }
    if (method == OracleMethod::TraceProduct) {
        TraceTest t = frustration_free_check(inst);
        res.method = method;
        res.is_zero = t.frustration_free;
        res.lambda0 = t.frustration_free ? 0.0 : 1.0;
        return res;
    }
    if (inst.terms.empty()) {
        res.method = method;
        res.lambda0 = 0;
        res.is_zero = true;
        res.ground_degeneracy = res.dim;
        return res;
    }
    if (method == OracleMethod::Dense) {
        if (res.dim > kDenseLimit) {
            fail(ErrorCode::TooLarge, "dense oracle limited to dimension 2^12, got " + std::to_string(res.dim));
        }
        res.method = method;
        res.lambda0 = dense_lambda0(inst, res);
        res.is_zero = std::abs(res.lambda0) <= 1e-8;
        return res;
    }
    if (res.dim > kIterativeLimit) {
        fail(ErrorCode::TooLarge, "iterative oracle limited to dimension 2^20, got " + std::to_string(res.dim));
    }
    res.method = OracleMethod::Iterative;
    res.lambda0 = lanczos_lambda0(inst);
    res.is_zero = res.lambda0 < 0.5;
    return res;
}

Complex trace_of_product(const Instance &inst, const std::vector<LocalTerm> &terms, unsigned jobs) {
    size_t d = inst.total_dim();
    if (d > kTraceLimit) {
        fail(ErrorCode::TooLarge, "trace products limited to dimension 2^12, got " + std::to_string(d));
    }
    std::vector<LocalOp> ops = local_ops(inst, terms);
    const size_t chunk = 64;
    size_t nchunks = (d + chunk - 1) / chunk;
    std::vector<Complex> partial(nchunks, 0);
    auto work = [&](size_t first, size_t stride) {
        ComplexMatrix x, y;
        for (size_t c = first; c < nchunks; c += stride) {
            size_t lo = c * chunk;
            size_t n = std::min(chunk, d - lo);
            x = ComplexMatrix::Zero(d, n);
            for (size_t k = 0; k < n; k++) {
                x(lo + k, k) = 1;
            }
            for (size_t o = ops.size(); o-- > 0;) {
                apply_local(*ops[o].matrix, ops[o].indexer, x, y);
                std::swap(x, y);
            }
            Complex s = 0;
            for (size_t k = 0; k < n; k++) {
                s += x(lo + k, k);
            }
            partial[c] = s;
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, (unsigned)nchunks));
    if (jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; j++) {
            pool.emplace_back(work, j, jobs);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    // Pairwise reduction keeps the sum independent of the number of workers.
    while (partial.size() > 1) {
        std::vector<Complex> next;
        for (size_t k = 0; k + 1 < partial.size(); k += 2) {
            next.push_back(partial[k] + partial[k + 1]);
        }
        if (partial.size() % 2) {
            next.push_back(partial.back());
        }
        partial.swap(next);
    }
    return partial.empty() ? Complex(0) : partial[0];
}

TraceTest frustration_free_check(const Instance &inst, const Tolerances &tol, unsigned jobs) {
    ValidationReport rep = validate(inst, tol);
    for (const auto &v : rep.violations) {
        if (v.kind == "NonCommuting") {
            fail(ErrorCode::NonCommuting,
                 "terms " + std::to_string(v.ids[0]) + " and " + std::to_string(v.ids[1]) + ": " + v.detail);
        }
    }
    std::vector<LocalTerm> factors;
    for (const auto &t : inst.terms) {
        LocalTerm f = t;
        f.matrix = identity(t.matrix.rows()) - t.matrix;
        factors.push_back(std::move(f));
    }
    TraceTest res;
    size_t d = inst.total_dim();
    res.trace = trace_of_product(inst, factors, jobs).real();
    res.threshold = tol.trace * (double)d;
    res.frustration_free = res.trace > res.threshold;
    return res;
}

CommutationAudit commutation_audit(const Instance &inst) {
    CommutationAudit audit;
    for (size_t a = 0; a < inst.terms.size(); a++) {
        for (size_t b = a + 1; b < inst.terms.size(); b++) {
            const auto &ta = inst.terms[a];
            const auto &tb = inst.terms[b];
            if (support_intersection(ta.support, tb.support).empty()) {
                continue;
            }
            audit.pairs_checked++;
            std::vector<int> u = support_union(ta.support, tb.support);
            ComplexMatrix c = commutator(term_on(inst, ta, u), term_on(inst, tb, u));
            double n = op_norm(c);
            if (!audit.worst_pair || n > audit.max_norm) {
                audit.max_norm = n;
                audit.max_hs_norm = c.norm();
                audit.worst_pair = std::make_pair(ta.id, tb.id);
            }
        }
    }
    return audit;
}

}  // namespace clh
