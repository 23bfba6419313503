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


#include "clh/qima.h"

#include <algorithm>
#include <set>

namespace clh {

namespace {

Instance witness_space(const InstantVerifier &v) {
    Instance shell;
    shell.registers = v.witness;
    return shell;
}

LocalTerm gate_term(const ControlledGate &g, const ComplexMatrix &m, int id) {
    LocalTerm t;
    t.id = id;
    t.support = g.support;
    t.matrix = m;
    return t;
}

}  // namespace

std::vector<std::string> check_verifier(const InstantVerifier &v, const Tolerances &tol) {
    std::vector<std::string> problems;
    Instance shell = witness_space(v);
    std::set<size_t> ancillas;
    for (size_t k = 0; k < v.gates.size(); k++) {
        const ControlledGate &g = v.gates[k];
        std::string tag = "gate " + std::to_string(k) + ": ";
        bool known = !g.support.empty();
        for (int r : g.support) {
            known = known && shell.has_register(r);
        }
        if (!known) {
            problems.push_back(tag + "support references a missing witness register");
            continue;
        }
        size_t d = product(shell.support_dims(g.support));
        if ((size_t)g.unitary.rows() != d || (size_t)g.unitary.cols() != d) {
            problems.push_back(tag + "matrix does not match its support dimension");
            continue;
        }
        if ((g.unitary.adjoint() * g.unitary - identity(d)).cwiseAbs().maxCoeff() > tol.recon) {
            problems.push_back(tag + "not unitary");
        }
        if (g.ancilla >= v.ancilla_count || !ancillas.insert(g.ancilla).second) {
            problems.push_back(tag + "ancilla " + std::to_string(g.ancilla) + " out of range or shared");
        }
    }
    if (!problems.empty()) {
        return problems;
    }
    for (size_t a = 0; a < v.gates.size(); a++) {
        for (size_t b = a + 1; b < v.gates.size(); b++) {
            double c = pair_commutator_norm(shell, gate_term(v.gates[a], v.gates[a].unitary, 0),
                                            gate_term(v.gates[b], v.gates[b].unitary, 1));
            if (c > tol.comm) {
                problems.push_back("gates " + std::to_string(a) + " and " + std::to_string(b) +
                                   " do not commute (" + std::to_string(c) + ")");
            }
        }
    }
    return problems;
}

ClhConversion verifier_to_clh(const InstantVerifier &v, const Tolerances &tol) {
    std::vector<std::string> problems = check_verifier(v, tol);
    if (!problems.empty()) {
        bool commuting = std::none_of(problems.begin(), problems.end(),
                                      [](const std::string &p) { return p.find("commute") != std::string::npos; });
        fail(commuting ? ErrorCode::InvalidArgument : ErrorCode::GatesDoNotCommute, problems.front());
    }
    ClhConversion out;
    out.instance.registers = v.witness;
    for (size_t k = 0; k < v.gates.size(); k++) {
        const ControlledGate &g = v.gates[k];
        size_t d = g.unitary.rows();
        ComplexMatrix h = identity(d) - (g.unitary + g.unitary.adjoint()) * 0.5;
        h = (h + h.adjoint()).eval() * 0.5;
        out.instance.terms.push_back(gate_term(g, h, (int)k));
        std::vector<double> hints;
        RealVector ev = hermitian_eigenvalues(h, tol);
        for (Eigen::Index i = 0; i < ev.size(); i++) {
            double x = std::max(0.0, ev(i));
            if (hints.empty() || x - hints.back() > 1e-8) {
                hints.push_back(x);
            }
        }
        out.eigenvalue_hints.push_back(std::move(hints));
    }
    out.instance.provenance.push_back("verifier_to_clh from " + std::to_string(v.gates.size()) + " gates");
    return out;
}

InstantVerifier clh_to_verifier(const Instance &inst, const Tolerances &tol) {
    InstantVerifier v;
    v.witness = inst.registers;
    for (const auto &t : inst.terms) {
        if (!is_projector(t.matrix, tol)) {
            fail(ErrorCode::NotProjectors, "term " + std::to_string(t.id) + " is not an orthogonal projector");
        }
        ControlledGate g;
        g.support = t.support;
        g.unitary = identity(t.matrix.rows()) - 2.0 * t.matrix;
        g.ancilla = v.gates.size();
        v.gates.push_back(std::move(g));
    }
    v.ancilla_count = v.gates.size();
    return v;
}

double acceptance_probability(const InstantVerifier &v, const ComplexVector &witness) {
    Instance shell = witness_space(v);
    std::vector<size_t> dims = shell.dims();
    if ((size_t)witness.size() != shell.total_dim()) {
        fail(ErrorCode::DimensionMismatch, "witness has dimension " + std::to_string(witness.size()) +
                                               ", verifier expects " + std::to_string(shell.total_dim()));
    }
    ComplexMatrix x = witness, y;
    for (const auto &g : v.gates) {
        std::vector<size_t> pos;
        for (int r : g.support) {
            pos.push_back(shell.register_index(r));
        }
        ComplexMatrix half = (identity(g.unitary.rows()) + g.unitary) * 0.5;
        apply_local(half, LocalIndexer(dims, pos), x, y);
        std::swap(x, y);
    }
    return x.squaredNorm();
}

ComplexMatrix acceptance_operator(const InstantVerifier &v) {
    Instance shell = witness_space(v);
    size_t d = shell.total_dim();
    if (d > (size_t(1) << 10)) {
        fail(ErrorCode::TooLarge, "acceptance operator limited to witness dimension 2^10");
    }
    std::vector<size_t> dims = shell.dims();
    ComplexMatrix m = identity(d), y;
    for (const auto &g : v.gates) {
        std::vector<size_t> pos;
        for (int r : g.support) {
            pos.push_back(shell.register_index(r));
        }
        ComplexMatrix half = (identity(g.unitary.rows()) + g.unitary) * 0.5;
        apply_local(half, LocalIndexer(dims, pos), m, y);
        std::swap(m, y);
    }
    ComplexMatrix a = m.adjoint() * m;
    return (a + a.adjoint()) * 0.5;
}

double max_acceptance(const InstantVerifier &v) {
    RealVector ev = hermitian_eigenvalues(acceptance_operator(v));
    return ev(ev.size() - 1);
}

}  // namespace clh
