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

#ifndef CLH_ALGEBRA_H
#define CLH_ALGEBRA_H

#include <optional>
#include <vector>

#include "clh/model.h"

namespace clh {

/// A unital *-subalgebra of M_d, stored as a Hilbert-Schmidt orthonormal basis.
struct InducedAlgebra {
    int register_id = -1;
    size_t dim = 0;
    std::vector<ComplexMatrix> basis;
    /// Matrices the algebra was generated from (identity excluded).
    std::vector<ComplexMatrix> generators;
    std::vector<int> generator_terms;
};

/// Smallest unital *-algebra containing the generators, as an HS-orthonormal basis.
std::vector<ComplexMatrix> algebra_closure(const std::vector<ComplexMatrix> &generators, size_t dim,
                                           const Tolerances &tol = Tolerances::defaults());
InducedAlgebra make_algebra(const std::vector<ComplexMatrix> &generators, size_t dim,
                            const Tolerances &tol = Tolerances::defaults());

/// Algebra generated on `register_id` by the register-side operator-Schmidt factors of the term.
InducedAlgebra induced_algebra(const Instance &inst, const LocalTerm &term, int register_id,
                               const Tolerances &tol = Tolerances::defaults());
/// Algebra generated by the induced algebras of several terms on one register.
InducedAlgebra joint_induced_algebra(const Instance &inst, const std::vector<int> &term_ids, int register_id,
                                     const Tolerances &tol = Tolerances::defaults());

/// Largest HS distance from an element of `b` to span(a), in both directions.
double span_distance(const std::vector<ComplexMatrix> &a, const std::vector<ComplexMatrix> &b);
/// Residual of projecting m onto span(basis), relative to ||m||_HS.
double span_residual(const std::vector<ComplexMatrix> &basis, const ComplexMatrix &m);

std::vector<ComplexMatrix> commutant(const std::vector<ComplexMatrix> &operators, size_t dim,
                                     const Tolerances &tol = Tolerances::defaults());
std::vector<ComplexMatrix> center(const InducedAlgebra &algebra, const Tolerances &tol = Tolerances::defaults());

/// Largest ||[a, b]|| over the two bases.
double algebras_commutator(const std::vector<ComplexMatrix> &a, const std::vector<ComplexMatrix> &b);

/// One block of the structure decomposition. Column k * d2 + j of the isometry is e_k (x) f_j,
/// so every algebra element x satisfies V^dag x V = x_1 (x) I_{d2}.
struct AlgebraBlock {
    ComplexMatrix isometry;
    size_t d1 = 1;
    size_t d2 = 1;

    size_t dim() const {
        return d1 * d2;
    }
    ComplexMatrix projector() const {
        return isometry * isometry.adjoint();
    }
};

struct StructureDecomposition {
    size_t dim = 0;
    /// Sorted by descending block dimension, then by the first basis index the block touches.
    std::vector<AlgebraBlock> blocks;
};

StructureDecomposition structure_decompose(const InducedAlgebra &algebra,
                                           const Tolerances &tol = Tolerances::defaults());

/// Largest off-block-diagonal norm and largest deviation from x_1 (x) I over the basis.
struct DecompositionResiduals {
    double completeness = 0;
    double off_diagonal = 0;
    double tensor_form = 0;
    /// Restricted algebra dimension minus d1^2, maximized over blocks (0 when full).
    long fullness_gap = 0;
};

DecompositionResiduals decomposition_residuals(const InducedAlgebra &algebra, const StructureDecomposition &dec);

/// Per block: h acting on factor 1 and h2 on factor 2 with the register split as (d1, d2).
struct TwoTermBlock {
    /// h on its support with the register replaced by factor 1 (same position).
    ComplexMatrix h_factor;
    /// h2 on its support with the register replaced by factor 2.
    ComplexMatrix h2_factor;
    double h_residual = 0;
    double h2_residual = 0;
};

struct TwoTermStructure {
    StructureDecomposition decomposition;
    std::vector<TwoTermBlock> blocks;
};

TwoTermStructure two_term_structure(const Instance &inst, const LocalTerm &h, const LocalTerm &h2, int register_id,
                                    const Tolerances &tol = Tolerances::defaults());

struct Rank1Overlap {
    /// P's state on its support.
    ComplexVector psi;
    /// Isometry onto the span of the register-side Schmidt vectors of psi.
    ComplexMatrix b_p;
    /// Isometry onto the orthogonal complement, where P vanishes.
    ComplexMatrix b_q;
    /// Q restricted to B_P equals id_{B_P} (x) q_tilde; q_tilde lives on supp(Q) minus the register.
    ComplexMatrix q_tilde;
    double trivial_residual = 0;
    double p_zero_residual = 0;
};

Rank1Overlap rank1_overlap_decompose(const Instance &inst, const LocalTerm &p, const LocalTerm &q, int register_id,
                                     const Tolerances &tol = Tolerances::defaults());

struct Rank1Classification {
    enum class Kind { Singular, Reducing };
    Kind kind = Kind::Singular;
    /// Singular: the shared state on the register.
    ComplexVector psi;
    /// Reducing: projector on the register keeping P and killing Q.
    ComplexMatrix pi;
};

Rank1Classification rank1_classify(const Instance &inst, const LocalTerm &p, const LocalTerm &q, int register_id,
                                   const Tolerances &tol = Tolerances::defaults());

/// Largest residual of P, Q = |psi><psi| (x) rest on the register.
double singular_residual(const Instance &inst, const LocalTerm &p, const LocalTerm &q, int register_id,
                         const ComplexVector &psi);
/// max(||Pi P Pi - P||, ||Pi Q Pi||) with Pi extended by identity.
double reducing_residual(const Instance &inst, const LocalTerm &p, const LocalTerm &q, int register_id,
                         const ComplexMatrix &pi);

/// Ascending block dimensions of the decomposition of P's induced algebra on the register.
std::vector<size_t> decomposition_signature(const Instance &inst, const LocalTerm &p, const LocalTerm &q,
                                            int register_id, const Tolerances &tol = Tolerances::defaults());

struct SemiSeparableWitness {
    int register_id = 0;
    std::vector<ComplexMatrix> projectors;
    int exceptional_term = -1;
    /// Whether the exceptional term fails to commute with some projector by more than 10 EPS_COMM.
    bool exceptional_breaks = false;
};

std::optional<SemiSeparableWitness> detect_semi_separable(const Instance &inst, int register_id,
                                                          const Tolerances &tol = Tolerances::defaults());

/// Largest ||[h, Pi (x) I]|| for a projector on one register of h's support.
double term_projector_commutator(const Instance &inst, const LocalTerm &h, int register_id, const ComplexMatrix &pi);

/// A basis (columns, unitary) of one-dimensional subspaces every incident term preserves, if
/// the joint induced algebra is commutative.
std::optional<ComplexMatrix> detect_classical(const Instance &inst, int register_id,
                                              const Tolerances &tol = Tolerances::defaults());

/// Projector onto each block of the joint algebra of the given terms on the register.
std::vector<ComplexMatrix> block_projectors(const StructureDecomposition &dec);

}  // namespace clh

#endif
