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


#ifndef CLH_QIMA_H
#define CLH_QIMA_H

#include <vector>

#include "clh/model.h"

namespace clh {

/// Unitary on witness registers, controlled by its own |+>-prepared ancilla.
struct ControlledGate {
    std::vector<int> support;
    ComplexMatrix unitary;
    size_t ancilla = 0;
};

/// Ancillas start in |+>, each gate fires controlled on its ancilla, and the verifier accepts
/// when every ancilla is measured as |+>. Accepting a witness psi then has probability
/// ||prod_i (I + G_i)/2 psi||^2 for pairwise commuting gates.
struct InstantVerifier {
    std::vector<Register> witness;
    std::vector<ControlledGate> gates;
    size_t ancilla_count = 0;
};

/// Unitarity to EPS_RECON, distinct in-range ancillas, and pairwise commutation to EPS_COMM.
/// Returns the problems found; empty when valid.
std::vector<std::string> check_verifier(const InstantVerifier &v, const Tolerances &tol = Tolerances::defaults());

struct ClhConversion {
    Instance instance;
    /// Distinct eigenvalues of each term, ascending.
    std::vector<std::vector<double>> eigenvalue_hints;
};

/// h_i = I - (G_i + G_i^dag) / 2 on the gate's support. Terms carry no declared rank; their
/// norm reaches 2 for gates with eigenvalue -1. Throws GatesDoNotCommute, or NotUnitary as
/// InvalidArgument.
ClhConversion verifier_to_clh(const InstantVerifier &v, const Tolerances &tol = Tolerances::defaults());

/// U_i = I - 2 Pi_i, one ancilla per term. Throws NotProjectors.
InstantVerifier clh_to_verifier(const Instance &inst, const Tolerances &tol = Tolerances::defaults());

/// Acceptance probability of a normalized witness state on the full witness space.
double acceptance_probability(const InstantVerifier &v, const ComplexVector &witness);

/// M^dag M with M = prod_i (I + G_i) / 2; dense, limited to witness dimension 2^10.
ComplexMatrix acceptance_operator(const InstantVerifier &v);

/// Largest eigenvalue of the acceptance operator: the best a witness can do.
double max_acceptance(const InstantVerifier &v);

}  // namespace clh

#endif
