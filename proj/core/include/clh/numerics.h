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

#ifndef CLH_NUMERICS_H
#define CLH_NUMERICS_H

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "clh/error.h"

namespace clh {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerance ladder. Every cutoff is multiplied by max(||operand||, 1), so operators of
/// norm at most one (all local terms) see the absolute values below.
struct Tolerances {
    double herm = 1e-10;
    double eig = 1e-9;
    double recon = 1e-9;
    double comm = 1e-8;
    double trace = 1e-8;
    /// Seed for the randomized steps of the algebra decomposition.
    uint64_t seed = 0x9e3779b97f4a7c15ULL;

    static const Tolerances &defaults();
};

inline double scaled(double eps, double norm) {
    return eps * (norm > 1.0 ? norm : 1.0);
}

/// Operator norm. Exact up to dimension 512 (1024 for Hermitian or anti-Hermitian input), a cheap upper
/// bound sqrt(||M||_1 ||M||_inf) above that.
double op_norm(const ComplexMatrix &m);
bool all_finite(const ComplexMatrix &m);
bool is_hermitian(const ComplexMatrix &m, const Tolerances &tol = Tolerances::defaults());
bool is_projector(const ComplexMatrix &m, const Tolerances &tol = Tolerances::defaults());
ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix identity(size_t d);
ComplexMatrix outer(const ComplexVector &a, const ComplexVector &b);
ComplexMatrix projector_onto(const ComplexMatrix &columns);
size_t product(const std::vector<size_t> &dims);

struct HermitianEig {
    RealVector eigenvalues;  // ascending
    ComplexMatrix eigenvectors;
};

HermitianEig hermitian_eig(const ComplexMatrix &m, const Tolerances &tol = Tolerances::defaults());
RealVector hermitian_eigenvalues(const ComplexMatrix &m, const Tolerances &tol = Tolerances::defaults());

/// Multiplies v by the phase that makes its first non-negligible entry real positive.
void phase_normalize(ComplexVector &v, double cutoff = 1e-8);

/// Orthonormal basis of the eigenspace(s) whose eigenvalue satisfies lo < lambda <= hi.
ComplexMatrix eigenspace(const HermitianEig &e, double lo, double hi);

struct SchmidtTriple {
    double coefficient;
    ComplexMatrix a;
    ComplexMatrix b;
};

struct OperatorSchmidt {
    std::vector<SchmidtTriple> triples;
    size_t dim_a = 0;
    size_t dim_b = 0;

    ComplexMatrix recombine() const;
};

OperatorSchmidt operator_schmidt(
    const ComplexMatrix &m, size_t dim_a, size_t dim_b, const Tolerances &tol = Tolerances::defaults());

/// Spectral rounding: the projector onto the span of eigenvectors with eigenvalue > EPS_EIG.
ComplexMatrix round_spectrum(const ComplexMatrix &b, const Tolerances &tol = Tolerances::defaults());
/// Projector onto the span of eigenvectors whose eigenvalue is at least `threshold`.
ComplexMatrix spectral_projector_at_least(
    const ComplexMatrix &b, double threshold, const Tolerances &tol = Tolerances::defaults());

/// Index arithmetic for an operator acting on a subset of tensor factors.
/// Factor 0 is the most significant digit of a global basis index.
class LocalIndexer {
   public:
    LocalIndexer(const std::vector<size_t> &dims, const std::vector<size_t> &positions);

    size_t total_dim() const {
        return total_;
    }
    size_t local_dim() const {
        return local_offsets_.size();
    }
    const std::vector<size_t> &local_offsets() const {
        return local_offsets_;
    }
    const std::vector<size_t> &bases() const {
        return bases_;
    }

   private:
    size_t total_;
    std::vector<size_t> local_offsets_;
    std::vector<size_t> bases_;
};

/// op (on the factors listed in `positions`, in that order) tensored with identity elsewhere.
ComplexMatrix embed_local(
    const ComplexMatrix &op, const std::vector<size_t> &positions, const std::vector<size_t> &dims);
/// y = (op on positions) x, without assembling the full matrix. Works column-wise on X.
void apply_local(
    const ComplexMatrix &op,
    const LocalIndexer &indexer,
    const ComplexMatrix &x,
    ComplexMatrix &y);
/// Reorders tensor factors: factor k of the result is factor perm[k] of m.
ComplexMatrix permute_factors(const ComplexMatrix &m, const std::vector<size_t> &dims, const std::vector<size_t> &perm);
ComplexMatrix partial_trace(const ComplexMatrix &m, const std::vector<size_t> &keep, const std::vector<size_t> &dims);
/// (I (x) V)^dag m (I (x) V) with V acting on factor `pos`; that factor's dimension becomes V.cols().
ComplexMatrix compress_factor(const ComplexMatrix &m, const std::vector<size_t> &dims, size_t pos, const ComplexMatrix &v);
/// || m - (tr_pos m / d_pos) (x) I_pos ||, zero exactly when m acts as identity on factor pos.
double identity_factor_residual(const ComplexMatrix &m, const std::vector<size_t> &dims, size_t pos);
/// m with factor pos traced out and divided by its dimension.
ComplexMatrix reduce_factor(const ComplexMatrix &m, const std::vector<size_t> &dims, size_t pos);

/// Column-major style vectorization used by the algebra routines (row-major reshape).
ComplexVector vectorize(const ComplexMatrix &m);
ComplexMatrix unvectorize(const ComplexVector &v, size_t d);

using Rng = std::mt19937_64;
ComplexMatrix random_ginibre(size_t rows, size_t cols, Rng &rng);
ComplexMatrix random_unitary(size_t d, Rng &rng);
ComplexMatrix random_hermitian(size_t d, Rng &rng);
ComplexVector random_state(size_t d, Rng &rng);
/// Random rank-k orthogonal projector in dimension d.
ComplexMatrix random_projector(size_t d, size_t k, Rng &rng);

}  // namespace clh

#endif
