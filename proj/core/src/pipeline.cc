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


#include "clh/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <thread>

#include "clh/rounding.h"
#include "json.hpp"

namespace clh {

namespace {

bool has_kernel(const LocalTerm &t, const Tolerances &tol) {
    const ComplexMatrix &m = t.matrix;
    if (t.rank) {
        return *t.rank < (size_t)m.rows();
    }
    // Positive definite beyond the cutoff exactly when the shifted Cholesky factorization succeeds.
    double shift = scaled(tol.eig, m.cwiseAbs().rowwise().sum().maxCoeff());
    ComplexMatrix shifted = m - shift * ComplexMatrix::Identity(m.rows(), m.cols());
    return Eigen::LLT<ComplexMatrix>(shifted).info() != Eigen::Success;
}

/// Terms on the same register set become one term: the projector onto the span of their ranges
/// has the same kernel as their sum.
Instance merge_identical_supports(const Instance &inst, const Tolerances &tol) {
    std::map<std::vector<int>, std::vector<const LocalTerm *>> by_support;
    for (const auto &t : inst.terms) {
        if (op_norm(t.matrix) <= tol.comm) {
            continue;
        }
        std::vector<int> s = t.support;
        std::sort(s.begin(), s.end());
        by_support[s].push_back(&t);
    }
    Instance out = inst;
    out.geometry.reset();
    out.terms.clear();
    for (const auto &[support, terms] : by_support) {
        if (terms.size() == 1) {
            out.terms.push_back(*terms[0]);
            continue;
        }
        LocalTerm m;
        m.id = terms[0]->id;
        m.support = support;
        size_t d = product(inst.support_dims(support));
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (const LocalTerm *t : terms) {
            sum += term_on(inst, *t, support);
        }
        m.matrix = round_spectrum(sum, tol);
        m.rank = numerical_rank(m.matrix, tol);
        out.terms.push_back(std::move(m));
    }
    return out;
}

}  // namespace

TwoLocalSolution solve_two_local(const Instance &inst, const Tolerances &tol) {
    for (const auto &t : inst.terms) {
        if (t.support.size() > 2) {
            fail(ErrorCode::NotTwoLocal, "term " + std::to_string(t.id) + " has support of size " +
                                             std::to_string(t.support.size()));
        }
    }
    // Rounding preserves commutation, so one check up front covers every node of the search. It
    // runs before identical supports are merged, which would hide a clash between them.
    for (size_t a = 0; a < inst.terms.size(); a++) {
        for (size_t b = a + 1; b < inst.terms.size(); b++) {
            if (pair_commutator_norm(inst, inst.terms[a], inst.terms[b]) > tol.comm) {
                fail(ErrorCode::NonCommuting, "terms " + std::to_string(inst.terms[a].id) + " and " +
                                                  std::to_string(inst.terms[b].id) + " do not commute");
            }
        }
    }
    TwoLocalSolution sol;
    Instance start = merge_identical_supports(inst, tol);
    std::vector<BlockChoice> path;

    std::function<bool(const Instance &)> search = [&](const Instance &cur) -> bool {
        for (const auto &t : cur.terms) {
            if (!has_kernel(t, tol)) {
                return false;
            }
        }
        int shared = -1;
        for (const auto &r : cur.registers) {
            if (cur.incident_terms(r.id).size() >= 2) {
                shared = r.id;
                break;
            }
        }
        if (shared < 0) {
            // Every register now belongs to at most one term, so terms have disjoint supports.
            return true;
        }
        std::vector<TwoLocalBlock> blocks = two_local_blocks(cur, shared, tol, false);
        for (size_t b = 0; b < blocks.size(); b++) {
            if (b > 0 && sol.nodes >= kTwoLocalNodeLimit) {
                sol.heuristic = true;
                break;
            }
            sol.nodes++;
            path.push_back({shared, b});
            if (search(apply_two_local_block(cur, shared, blocks, b, tol))) {
                return true;
            }
            path.pop_back();
        }
        return false;
    };
    sol.lambda0_is_zero = search(start);
    if (sol.lambda0_is_zero) {
        sol.certificate = path;
    }
    return sol;
}

Instance apply_move(const Instance &inst, const Move &move, const Tolerances &tol) {
    Guide one;
    one.moves.push_back(move);
    std::vector<std::string> problems = check_guide_payloads(one, tol);
    if (!problems.empty()) {
        fail(ErrorCode::NotProjector, problems.front());
    }
    if (!inst.has_register(move.register_id)) {
        fail(ErrorCode::UnknownRegister, "register " + std::to_string(move.register_id) + " is not in the instance");
    }
    switch (move.kind) {
        case MoveKind::TwoLocalRound:
            return two_local_round(inst, move.register_id, move.index, tol);
        case MoveKind::Rank1Round:
            return rank1_round(inst, move.register_id, move.pi_p, move.pi_q, tol).instance;
        case MoveKind::ClassicalRestrict:
            return classical_restrict(inst, move.register_id, move.index, move.basis, tol);
        case MoveKind::SemiSepBranch: {
            SemiSeparableWitness w;
            w.register_id = move.register_id;
            w.projectors = move.projectors;
            w.exceptional_term = move.exceptional_term;
            return semi_separable_reduce(inst, w, move.index, tol);
        }
        case MoveKind::PunctureChoice:
            return puncture_general(inst, move.register_id, move.choices, tol).instance;
        case MoveKind::ResolveBlockage:
            return resolve_blockage(inst, move.register_id, move.index, tol).instance;
    }
    fail(ErrorCode::InvalidArgument, "unknown move kind");
}

namespace {

size_t resolve_triangle_size(const Geometry &g, std::optional<size_t> requested) {
    if (requested) {
        return *requested;
    }
    std::optional<size_t> l = smallest_triangle_size(g);
    if (!l) {
        fail(ErrorCode::GridTooSmall, "no triangle size up to max(rows, cols) + 1 gives every triangle a center");
    }
    return *l;
}

const Geometry &grid_of(const Instance &inst) {
    if (!inst.geometry || inst.geometry->kind != Geometry::Kind::Grid2D) {
        fail(ErrorCode::InvalidArgument, "the 2D reduction needs a grid geometry");
    }
    return *inst.geometry;
}

/// The reduced instance a punctured grid instance gives after routing and grouping.
Instance group_punctured(const Instance &punctured, Triangulation &t, const Tolerances &tol) {
    Instance cleaned = tidy(punctured, tol);
    route_co_paths(t, cleaned, tol);
    Instance reduced = merge_groups(cleaned, t.grouping);
    reduced.provenance.push_back("guided_reduce_2d triangle size " + std::to_string(t.triangle_size) + ", " +
                                 std::to_string(t.centers.size()) + " centers");
    return reduced;
}

std::string describe(const Error &e) {
    return std::string(error_code_name(e.code())) + ": " + e.what();
}

}  // namespace

ReductionResult guided_reduce_2d(const Instance &inst, const Guide &guide, const Tolerances &tol) {
    const Geometry &g = grid_of(inst);
    ReductionResult res;
    res.triangulation = triangulate_grid(g, resolve_triangle_size(g, guide.triangle_size));
    res.punctured = inst;
    for (const Move &m : guide.moves) {
        res.punctured = apply_move(res.punctured, m, tol);
    }
    if (!res.punctured.geometry) {
        fail(ErrorCode::RoutingFailed, "a move discarded the grid geometry");
    }
    res.reduced = group_punctured(res.punctured, res.triangulation, tol);
    return res;
}

VerifierVerdict verify(const Instance &inst, const Guide &guide, const Tolerances &tol) {
    VerifierVerdict v;
    auto reject = [&](std::optional<size_t> step, std::string reason) {
        v.accept = false;
        v.failure_step = step;
        v.reason = std::move(reason);
        return v;
    };
    try {
        ValidationReport rep = validate(inst, tol);
        if (!rep.ok()) {
            return reject(std::nullopt, "invalid instance: " + rep.violations.front().kind + " " +
                                            rep.violations.front().detail);
        }
        std::optional<Triangulation> tri;
        if (guide.triangle_size) {
            try {
                tri = triangulate_grid(grid_of(inst), *guide.triangle_size);
            } catch (const Error &e) {
                return reject(std::nullopt, describe(e));
            }
        }
        Instance cur = inst;
        for (size_t k = 0; k < guide.moves.size(); k++) {
            ValidationReport r = validate(cur, tol);
            if (!r.ok()) {
                return reject(k, "hypothesis re-validation: " + r.violations.front().kind);
            }
            try {
                cur = apply_move(cur, guide.moves[k], tol);
            } catch (const Error &e) {
                return reject(k, describe(e));
            }
        }
        size_t tail = guide.moves.size();
        Instance reduced;
        try {
            if (tri) {
                if (!cur.geometry) {
                    return reject(tail, "RoutingFailed: a move discarded the grid geometry");
                }
                reduced = group_punctured(cur, *tri, tol);
            } else {
                reduced = tidy(cur, tol);
            }
            TwoLocalSolution sol = solve_two_local(reduced, tol);
            v.certificate = sol;
            v.reduced_instance = reduced;
            if (!sol.lambda0_is_zero) {
                return reject(tail, "terminal solve: no block choice leaves a common null vector");
            }
        } catch (const Error &e) {
            return reject(tail, describe(e));
        }
        v.accept = true;
        v.failure_step.reset();
        v.reason.reset();
        return v;
    } catch (const Error &e) {
        return reject(std::nullopt, describe(e));
    } catch (const std::exception &e) {
        return reject(std::nullopt, std::string("internal: ") + e.what());
    }
}

std::string verdict_json(const VerifierVerdict &v) {
    nlohmann::ordered_json j;
    j["accept"] = v.accept;
    j["failure_step"] = v.failure_step ? nlohmann::ordered_json(*v.failure_step) : nlohmann::ordered_json(nullptr);
    j["reason"] = v.reason ? nlohmann::ordered_json(*v.reason) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json cert = nlohmann::ordered_json::object();
    if (v.certificate) {
        cert["lambda0_is_zero"] = v.certificate->lambda0_is_zero;
        cert["heuristic"] = v.certificate->heuristic;
        cert["nodes"] = v.certificate->nodes;
        nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
        for (const auto &b : v.certificate->certificate) {
            blocks.push_back({b.register_id, b.block});
        }
        cert["blocks"] = blocks;
    }
    if (v.reduced_instance) {
        cert["reduced_registers"] = v.reduced_instance->registers.size();
        cert["reduced_terms"] = v.reduced_instance->terms.size();
    }
    j["certificate"] = cert;
    return j.dump();
}

namespace {

struct Exhausted {};

struct Search {
    const Triangulation &tri;
    const Tolerances &tol;
    size_t budget;
    size_t nodes = 0;
    std::vector<Move> moves;

    Search(const Triangulation &t, const Tolerances &tl, size_t b) : tri(t), tol(tl), budget(b) {}

    void spend() {
        if (nodes >= budget) {
            throw Exhausted{};
        }
        nodes++;
    }

    /// Block counts of the two sides at a center, or nullopt if it cannot be punctured.
    std::optional<std::pair<size_t, size_t>> choice_counts(const Instance &inst, int c) {
        try {
            AlternatingGrouping g = group_alternating(inst, c, tol);
            Instance w = apply_grouping_merge(inst, g, tol);
            return std::pair{puncture_blocks(w, c, g.p_set, tol).size(), puncture_blocks(w, c, g.q_set, tol).size()};
        } catch (const Error &e) {
            if (e.code() == ErrorCode::TooLarge) {
                throw;
            }
            return std::nullopt;
        }
    }

    bool leaf(const Instance &inst) {
        spend();
        Triangulation t = tri;
        try {
            Instance reduced = group_punctured(inst, t, tol);
            return solve_two_local(reduced, tol).lambda0_is_zero;
        } catch (const Error &e) {
            if (e.code() == ErrorCode::TooLarge) {
                throw;
            }
            return false;
        }
    }

    bool try_choice(const Instance &inst, size_t k, size_t a, size_t b) {
        spend();
        int c = tri.centers[k];
        PunctureOutcome out;
        try {
            out = puncture_general(inst, c, {a, b}, tol);
        } catch (const Error &e) {
            if (e.code() == ErrorCode::TooLarge) {
                throw;
            }
            return false;
        }
        Move m;
        m.kind = MoveKind::PunctureChoice;
        m.register_id = c;
        m.choices = {a, b};
        moves.push_back(m);
        if (run(out.instance, k + 1)) {
            return true;
        }
        moves.pop_back();
        return false;
    }

    bool run(const Instance &inst, size_t k) {
        if (k == tri.centers.size()) {
            return leaf(inst);
        }
        int c = tri.centers[k];
        std::optional<std::pair<size_t, size_t>> counts;
        if (inst.has_register(c) && nontrivial_incident(inst, c, tol).size() >= 4) {
            counts = choice_counts(inst, c);
        }
        if (!counts) {
            return run(inst, k + 1);
        }
        for (size_t a = 0; a < counts->first; a++) {
            for (size_t b = 0; b < counts->second; b++) {
                if (try_choice(inst, k, a, b)) {
                    return true;
                }
            }
        }
        return false;
    }
};

}  // namespace

ProverResult prover_search(const Instance &inst, size_t budget, const ProverOptions &options, const Tolerances &tol) {
    if (budget == 0) {
        fail(ErrorCode::BudgetExhausted, "budget 0 allows no search step");
    }
    ValidationReport rep = validate(inst, tol);
    if (!rep.ok()) {
        fail(rep.has("NonCommuting") ? ErrorCode::NonCommuting : ErrorCode::InvalidArgument,
             "invalid instance: " + rep.violations.front().kind);
    }
    ProverResult res;
    if (!inst.geometry || inst.geometry->kind != Geometry::Kind::Grid2D) {
        // No pipeline decision points: the empty guide is the only candidate.
        res.nodes = 1;
        if (solve_two_local(tidy(inst, tol), tol).lambda0_is_zero) {
            res.guide = Guide{};
        }
        return res;
    }
    size_t l = resolve_triangle_size(*inst.geometry, options.triangle_size);
    Triangulation tri = triangulate_grid(*inst.geometry, l);

    auto finish = [&](Search &s, bool found) {
        res.nodes = s.nodes;
        if (found) {
            Guide g;
            g.moves = s.moves;
            g.triangle_size = l;
            res.guide = g;
        }
        return res;
    };

    int c0 = tri.centers[0];
    std::optional<std::pair<size_t, size_t>> counts;
    if (options.jobs > 1 && inst.has_register(c0) && nontrivial_incident(inst, c0, tol).size() >= 4) {
        Search probe{tri, tol, budget};
        counts = probe.choice_counts(inst, c0);
    }
    if (!counts || counts->first * counts->second < 2) {
        Search s{tri, tol, budget};
        try {
            return finish(s, s.run(inst, 0));
        } catch (const Exhausted &) {
            fail(ErrorCode::BudgetExhausted, "search stopped after " + std::to_string(s.nodes) + " steps");
        }
    }

    // Speculative parallel evaluation of the first center's choices, then sequential replay of the
    // budget so the outcome matches the single-threaded search exactly.
    size_t nbranch = counts->first * counts->second;
    struct Branch {
        bool found = false;
        bool exhausted = false;
        size_t nodes = 0;
        std::vector<Move> moves;
        std::exception_ptr error;
    };
    std::vector<Branch> branches(nbranch);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t k = next++; k < nbranch; k = next++) {
            Search s{tri, tol, budget};
            try {
                branches[k].found = s.try_choice(inst, 0, k / counts->second, k % counts->second);
            } catch (const Exhausted &) {
                branches[k].exhausted = true;
            } catch (...) {
                branches[k].error = std::current_exception();
            }
            branches[k].nodes = s.nodes;
            branches[k].moves = s.moves;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < std::min<size_t>(options.jobs, nbranch); j++) {
        pool.emplace_back(worker);
    }
    for (auto &t : pool) {
        t.join();
    }
    size_t spent = 0;
    for (auto &b : branches) {
        if (b.error) {
            std::rethrow_exception(b.error);
        }
        if (b.exhausted || spent + b.nodes > budget) {
            fail(ErrorCode::BudgetExhausted, "search stopped after " + std::to_string(budget) + " steps");
        }
        spent += b.nodes;
        if (b.found) {
            Search s{tri, tol, budget};
            s.nodes = spent;
            s.moves = b.moves;
            return finish(s, true);
        }
    }
    res.nodes = spent;
    return res;
}

bool qlll_predicate(unsigned long g, unsigned long d, unsigned long k, unsigned long r) {
    if (g == 0 || d == 0 || k == 0 || r == 0) {
        fail(ErrorCode::InvalidArgument, "qLLL parameters must be positive integers");
    }
    long double bound = std::pow((long double)d, (long double)k) / ((long double)r * std::numbers::e_v<long double>);
    return (long double)g <= bound;
}

}  // namespace clh
