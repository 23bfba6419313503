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

#ifndef CLH_MODEL_H
#define CLH_MODEL_H

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clh/geometry.h"
#include "clh/numerics.h"

namespace clh {

struct Register {
    int id = 0;
    size_t dim = 1;
};

struct LocalTerm {
    int id = 0;
    std::vector<int> support;
    ComplexMatrix matrix;
    std::optional<size_t> rank;
    std::optional<std::string> cell;
};

/// A commuting local Hamiltonian H = sum of terms, plus geometry and an audit trail.
struct Instance {
    std::vector<Register> registers;
    std::vector<LocalTerm> terms;
    std::optional<Geometry> geometry;
    std::vector<std::string> provenance;

    bool has_register(int id) const;
    /// Position of the register in the global tensor order. Throws UnknownRegister.
    size_t register_index(int id) const;
    size_t register_dim(int id) const;
    const LocalTerm &term(int id) const;
    LocalTerm &term(int id);
    bool has_term(int id) const;
    std::vector<size_t> dims() const;
    /// Product of all register dims. Throws TooLarge past 2^40.
    size_t total_dim() const;
    int next_term_id() const;
    int next_register_id() const;
    /// Ids of terms whose support contains the register, ascending.
    std::vector<int> incident_terms(int register_id) const;
    std::vector<size_t> support_dims(const std::vector<int> &support) const;
};

/// The term's matrix re-expressed on `super_support`, which must contain its support.
ComplexMatrix term_on(const Instance &inst, const LocalTerm &term, const std::vector<int> &super_support);
/// The term embedded into the whole Hilbert space in global register order.
ComplexMatrix term_full(const Instance &inst, const LocalTerm &term);
ComplexMatrix hamiltonian_dense(const Instance &inst);
/// Ordered union: a's registers first, then b's that are new.
std::vector<int> support_union(const std::vector<int> &a, const std::vector<int> &b);
std::vector<int> support_intersection(const std::vector<int> &a, const std::vector<int> &b);

/// Identity-factor test across the cut (register | rest of the support).
bool acts_trivially_on(const Instance &inst, const LocalTerm &term, int register_id,
                       const Tolerances &tol = Tolerances::defaults());
/// The same term with every identity tensor factor traced out (normalized) of its support.
LocalTerm strip_trivial(const Instance &inst, const LocalTerm &term, const Tolerances &tol = Tolerances::defaults());
/// Numerical rank: eigenvalues above EPS_EIG.
size_t numerical_rank(const ComplexMatrix &m, const Tolerances &tol = Tolerances::defaults());
/// Operator norm of [a, b] on the union of their supports; above union dimension 512 the
/// Hilbert-Schmidt norm, an upper bound. Zero for disjoint supports.
double pair_commutator_norm(const Instance &inst, const LocalTerm &a, const LocalTerm &b);
/// Instance with the given terms removed and registers dropped that no term touches, if asked.
Instance without_terms(const Instance &inst, const std::vector<int> &ids);

struct Violation {
    std::string kind;
    std::vector<int> ids;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    double max_commutator = 0;

    bool ok() const {
        return violations.empty();
    }
    bool has(const std::string &kind) const;
};

ValidationReport validate(const Instance &inst, const Tolerances &tol = Tolerances::defaults());

struct DegreeReport {
    std::map<int, size_t> degree;
    size_t max_degree = 0;
};

DegreeReport degree_report(const Instance &inst, const Tolerances &tol = Tolerances::defaults());

/// A single register of dimension one carrying the identity: lambda0 = 1.
Instance canonical_unsat();

}  // namespace clh

#endif
