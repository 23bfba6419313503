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

// Brute-force reference computations. These use only Eigen and explicit index loops so they
// stay independent of the library routines they check.

#ifndef CLH_TESTS_ORACLES_H
#define CLH_TESTS_ORACLES_H

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "clh/model.h"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using cd = std::complex<double>;

/// Digits of a global basis index, factor 0 most significant.
inline std::vector<size_t> digits(size_t idx, const std::vector<size_t> &dims) {
    std::vector<size_t> out(dims.size());
    for (size_t k = dims.size(); k-- > 0;) {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    return out;
}

/// The local operator on the given factor positions, tensored with identity elsewhere.
inline Mat embed(const Mat &op, const std::vector<size_t> &pos, const std::vector<size_t> &dims) {
    size_t total = 1;
    for (size_t d : dims) {
        total *= d;
    }
    Mat out = Mat::Zero(total, total);
    for (size_t r = 0; r < total; r++) {
        auto dr = digits(r, dims);
        for (size_t c = 0; c < total; c++) {
            auto dc = digits(c, dims);
            bool same = true;
            for (size_t k = 0; k < dims.size() && same; k++) {
                bool local = std::find(pos.begin(), pos.end(), k) != pos.end();
                same = local || dr[k] == dc[k];
            }
            if (!same) {
                continue;
            }
            size_t lr = 0, lc = 0;
            for (size_t p : pos) {
                lr = lr * dims[p] + dr[p];
                lc = lc * dims[p] + dc[p];
            }
            out(r, c) = op(lr, lc);
        }
    }
    return out;
}

inline std::vector<size_t> positions(const clh::Instance &inst, const std::vector<int> &support) {
    std::vector<size_t> pos;
    for (int r : support) {
        for (size_t k = 0; k < inst.registers.size(); k++) {
            if (inst.registers[k].id == r) {
                pos.push_back(k);
            }
        }
    }
    return pos;
}

inline std::vector<size_t> dims_of(const clh::Instance &inst) {
    std::vector<size_t> d;
    for (const auto &r : inst.registers) {
        d.push_back(r.dim);
    }
    return d;
}

inline Mat hamiltonian(const clh::Instance &inst) {
    auto dims = dims_of(inst);
    size_t total = 1;
    for (size_t d : dims) {
        total *= d;
    }
    Mat h = Mat::Zero(total, total);
    for (const auto &t : inst.terms) {
        h += embed(t.matrix, positions(inst, t.support), dims);
    }
    return h;
}

inline double lambda0(const clh::Instance &inst) {
    Mat h = hamiltonian(inst);
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

inline bool frustration_free(const clh::Instance &inst) {
    return std::abs(lambda0(inst)) <= 1e-8;
}

inline double opnorm(const Mat &m) {
    if (m.size() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

/// Register marginal tr_rest(M) with the register at position `pos` of the term's support.
inline Mat marginal(const Mat &m, const std::vector<size_t> &dims, size_t pos) {
    size_t total = m.rows();
    Mat out = Mat::Zero(dims[pos], dims[pos]);
    for (size_t r = 0; r < total; r++) {
        auto dr = digits(r, dims);
        for (size_t c = 0; c < total; c++) {
            auto dc = digits(c, dims);
            bool same = true;
            for (size_t k = 0; k < dims.size(); k++) {
                if (k != pos && dr[k] != dc[k]) {
                    same = false;
                }
            }
            if (same) {
                out(dr[pos], dc[pos]) += m(r, c);
            }
        }
    }
    return out;
}

inline size_t rank_of(const Mat &m, double tol = 1e-8) {
    Eigen::JacobiSVD<Mat> svd(m);
    size_t r = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); k++) {
        r += svd.singularValues()(k) > tol;
    }
    return r;
}

/// Rank-1 commuting pair sharing one register: singular iff both register marginals are the
/// same pure state; otherwise the marginals have orthogonal supports (reducing).
enum class PairKind { Singular, Reducing, Neither };

inline PairKind classify_by_marginals(const clh::Instance &inst, const clh::LocalTerm &p, const clh::LocalTerm &q,
                                      int reg) {
    auto local = [&](const clh::LocalTerm &t) {
        std::vector<size_t> dims;
        size_t pos = 0;
        for (size_t k = 0; k < t.support.size(); k++) {
            dims.push_back(inst.register_dim(t.support[k]));
            if (t.support[k] == reg) {
                pos = k;
            }
        }
        Mat rho = marginal(t.matrix, dims, pos);
        return Mat(rho / rho.trace());
    };
    Mat rp = local(p), rq = local(q);
    if (rp.rows() == 1) {
        return PairKind::Singular;
    }
    if (rank_of(rp, 1e-6) == 1 && rank_of(rq, 1e-6) == 1 && (rp - rq).cwiseAbs().maxCoeff() < 1e-6) {
        return PairKind::Singular;
    }
    if ((rp * rq).cwiseAbs().maxCoeff() < 1e-6) {
        return PairKind::Reducing;
    }
    return PairKind::Neither;
}

inline Mat haar_unitary(size_t d, std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0, 1);
    Mat g(d, d);
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            g(i, j) = cd(n(rng), n(rng));
        }
    }
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR();
    for (size_t j = 0; j < d; j++) {
        cd ph = r(j, j) / std::abs(r(j, j));
        q.col(j) *= ph;
    }
    return q;
}

inline Mat random_matrix(size_t d, std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0, 1);
    Mat g(d, d);
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            g(i, j) = cd(n(rng), n(rng));
        }
    }
    return g;
}

/// Generators of U (sum_b M_{d1_b} (x) I_{d2_b}) U^dag with a known block structure.
struct PlantedAlgebra {
    std::vector<std::pair<size_t, size_t>> blocks;
    size_t dim = 0;
    Mat unitary;
    std::vector<Mat> generators;
};

inline PlantedAlgebra planted_algebra(const std::vector<std::pair<size_t, size_t>> &blocks, size_t num_generators,
                                      std::mt19937_64 &rng) {
    PlantedAlgebra a;
    a.blocks = blocks;
    for (auto [d1, d2] : blocks) {
        a.dim += d1 * d2;
    }
    a.unitary = haar_unitary(a.dim, rng);
    for (size_t g = 0; g < num_generators; g++) {
        Mat m = Mat::Zero(a.dim, a.dim);
        size_t off = 0;
        for (auto [d1, d2] : blocks) {
            Mat x = random_matrix(d1, rng);
            for (size_t i = 0; i < d1; i++) {
                for (size_t j = 0; j < d1; j++) {
                    for (size_t k = 0; k < d2; k++) {
                        m(off + i * d2 + k, off + j * d2 + k) = x(i, j);
                    }
                }
            }
            off += d1 * d2;
        }
        a.generators.push_back(a.unitary * m * a.unitary.adjoint());
    }
    return a;
}

/// Dimension of {X : [X, g] = 0 for all g}, by rank of the stacked commutation map.
inline size_t commutant_dimension(const std::vector<Mat> &gens, size_t d) {
    Mat big = Mat::Zero(gens.size() * 2 * d * d, d * d);
    size_t row = 0;
    for (const auto &g0 : gens) {
        for (const Mat &g : {g0, Mat(g0.adjoint())}) {
            for (size_t e = 0; e < d * d; e++) {
                Mat x = Mat::Zero(d, d);
                x(e / d, e % d) = 1;
                Mat c = x * g - g * x;
                for (size_t k = 0; k < d * d; k++) {
                    big(row + k, e) = c(k / d, k % d);
                }
            }
            row += d * d;
        }
    }
    Eigen::JacobiSVD<Mat> svd(big);
    const auto &sv = svd.singularValues();
    size_t rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); k++) {
        rank += sv(k) > 1e-9 * std::max(1.0, sv(0));
    }
    return d * d - rank;
}

/// Brute-force satisfiability of a diagonal instance over all assignments.
inline bool classical_satisfiable(const clh::Instance &inst) {
    auto dims = dims_of(inst);
    size_t total = 1;
    for (size_t d : dims) {
        total *= d;
    }
    for (size_t a = 0; a < total; a++) {
        auto dg = digits(a, dims);
        bool ok = true;
        for (const auto &t : inst.terms) {
            auto pos = positions(inst, t.support);
            size_t li = 0;
            for (size_t p : pos) {
                li = li * dims[p] + dg[p];
            }
            if (std::abs(t.matrix(li, li)) > 1e-9) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return true;
        }
    }
    return false;
}

/// Dims of the term's support and the position of `reg` in it.
inline std::pair<std::vector<size_t>, size_t> term_layout(const clh::Instance &inst, const clh::LocalTerm &t, int reg) {
    std::vector<size_t> dims;
    size_t pos = 0;
    for (size_t k = 0; k < t.support.size(); k++) {
        dims.push_back(inst.register_dim(t.support[k]));
        if (t.support[k] == reg) {
            pos = k;
        }
    }
    return {dims, pos};
}

/// Whether m commutes with every matrix unit on factor pos, i.e. acts there as the identity.
inline bool acts_as_identity_on(const Mat &m, const std::vector<size_t> &dims, size_t pos, double tol = 1e-8) {
    size_t d = dims[pos];
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            Mat e = Mat::Zero(d, d);
            e(i, j) = 1;
            Mat x = embed(e, {pos}, dims);
            if ((x * m - m * x).cwiseAbs().maxCoeff() > tol) {
                return false;
            }
        }
    }
    return true;
}

/// Searches every projector spanned by a subset of a basis diagonalizing both register marginals
/// for one that keeps P and kills Q.
inline bool reducing_projector_exists(const clh::Instance &inst, const clh::LocalTerm &p, const clh::LocalTerm &q,
                                      int reg, double tol = 1e-8) {
    auto [dp, pp] = term_layout(inst, p, reg);
    auto [dq, pq] = term_layout(inst, q, reg);
    Mat rp = marginal(p.matrix, dp, pp), rq = marginal(q.matrix, dq, pq);
    Eigen::SelfAdjointEigenSolver<Mat> es(rp + 3.14159 * rq);
    const Mat &basis = es.eigenvectors();
    size_t d = basis.rows();
    for (size_t mask = 0; mask < (size_t(1) << d); mask++) {
        Mat pi = Mat::Zero(d, d);
        for (size_t k = 0; k < d; k++) {
            if (mask >> k & 1) {
                pi += basis.col(k) * basis.col(k).adjoint();
            }
        }
        Mat ep = embed(pi, {pp}, dp), eq = embed(pi, {pq}, dq);
        if ((ep * p.matrix * ep - p.matrix).cwiseAbs().maxCoeff() <= tol &&
            (eq * q.matrix * eq).cwiseAbs().maxCoeff() <= tol) {
            return true;
        }
    }
    return false;
}

/// Whether both terms lie under |psi><psi| (x) I for the top marginal state psi of P.
inline bool shared_singular_state(const clh::Instance &inst, const clh::LocalTerm &p, const clh::LocalTerm &q,
                                  int reg, double tol = 1e-8) {
    auto [dp, pp] = term_layout(inst, p, reg);
    auto [dq, pq] = term_layout(inst, q, reg);
    Eigen::SelfAdjointEigenSolver<Mat> es(marginal(p.matrix, dp, pp));
    Vec psi = es.eigenvectors().col(es.eigenvectors().cols() - 1);
    Mat pr = psi * psi.adjoint();
    Mat ep = embed(pr, {pp}, dp), eq = embed(pr, {pq}, dq);
    return (ep * p.matrix * ep - p.matrix).cwiseAbs().maxCoeff() <= tol &&
           (eq * q.matrix * eq - q.matrix).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace oracle

#endif
