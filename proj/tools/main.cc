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


// clh: file-in/file-out front end. Results go to stdout as JSON, diagnostics to stderr.
// Exit codes: 0 success or accept, 1 reject or negative decision, 2 input error, 3 resource limit.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>

#include "clh/algebra.h"
#include "clh/generators.h"
#include "clh/jordan.h"
#include "clh/oracle.h"
#include "clh/pipeline.h"
#include "clh/puncture.h"
#include "clh/qima.h"
#include "clh/serialize.h"

using nlohmann::ordered_json;

namespace {

struct Config {
    clh::Tolerances tol;
    uint64_t seed = 1;
    bool seed_given = false;
    unsigned jobs = 1;
    std::string out;
};

std::string slurp(const std::string &path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), {});
    }
    return clh::read_file(path);
}

clh::Instance load_instance(const std::string &path) {
    return clh::deserialize_instance(slurp(path));
}

clh::Guide load_guide(const std::string &path) {
    return clh::deserialize_guide(slurp(path));
}

ordered_json config_json(const Config &c) {
    ordered_json j;
    j["eps_herm"] = c.tol.herm;
    j["eps_eig"] = c.tol.eig;
    j["eps_recon"] = c.tol.recon;
    j["eps_comm"] = c.tol.comm;
    j["eps_trace"] = c.tol.trace;
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
    return j;
}

/// Writes the JSON document to --out when given, otherwise to stdout.
void emit(const Config &c, ordered_json j, bool with_config = true) {
    if (with_config) {
        j["config"] = config_json(c);
    }
    std::string text = j.dump(2) + "\n";
    if (c.out.empty()) {
        std::cout << text;
    } else {
        clh::write_file(c.out, text);
    }
}

ordered_json embedded(const std::string &text) {
    return ordered_json::parse(text);
}

ordered_json instance_json(const clh::Instance &inst) {
    return embedded(clh::serialize_instance(inst));
}

/// Instance outputs carry the config as a provenance line so the file stays a valid instance.
void emit_instance(const Config &c, clh::Instance inst, const std::string &command) {
    inst.provenance.push_back("clh " + command + " " + config_json(c).dump());
    emit(c, instance_json(inst), false);
}

std::vector<size_t> parse_list(const std::string &s) {
    std::vector<size_t> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
            clh::fail(clh::ErrorCode::InvalidArgument, "expected a comma-separated list of indices, got '" + s + "'");
        }
        out.push_back(std::stoul(item));
    }
    return out;
}

int exit_code_for(clh::ErrorCode code) {
    switch (code) {
        case clh::ErrorCode::TooLarge:
        case clh::ErrorCode::BudgetExhausted: return 3;
        default: return 2;
    }
}

// ---- QIMA verifier files ----

ordered_json verifier_json(const clh::InstantVerifier &v) {
    ordered_json j;
    j["witness"] = ordered_json::array();
    for (const auto &r : v.witness) {
        j["witness"].push_back({{"id", r.id}, {"dim", r.dim}});
    }
    j["ancilla_count"] = v.ancilla_count;
    j["gates"] = ordered_json::array();
    for (const auto &g : v.gates) {
        j["gates"].push_back(
            {{"support", g.support}, {"ancilla", g.ancilla}, {"unitary", embedded(clh::serialize_matrix(g.unitary))}});
    }
    return j;
}

clh::InstantVerifier parse_verifier(const std::string &text) {
    try {
        ordered_json j = ordered_json::parse(text);
        clh::InstantVerifier v;
        for (const auto &r : j.at("witness")) {
            v.witness.push_back({r.at("id").get<int>(), r.at("dim").get<size_t>()});
        }
        v.ancilla_count = j.at("ancilla_count").get<size_t>();
        for (const auto &g : j.at("gates")) {
            clh::ControlledGate gate;
            gate.support = g.at("support").get<std::vector<int>>();
            gate.ancilla = g.at("ancilla").get<size_t>();
            gate.unitary = clh::deserialize_matrix(g.at("unitary").dump());
            v.gates.push_back(std::move(gate));
        }
        return v;
    } catch (const nlohmann::json::exception &e) {
        clh::fail(clh::ErrorCode::ParseError, std::string("verifier: ") + e.what());
    }
}

// ---- subcommands ----

int cmd_gen(const Config &c, const std::string &kind, size_t rows, size_t cols, size_t dim, const std::string &placement) {
    clh::Placement p = placement == "edges" ? clh::Placement::Edges : clh::Placement::Vertices;
    clh::Geometry g = clh::make_grid(rows, cols, p);
    clh::Instance inst;
    if (kind == "classical") {
        inst = clh::gen_classical(g, c.seed, dim);
    } else if (kind == "singular") {
        inst = clh::gen_singular(g, c.seed, dim);
    } else if (kind == "reducing") {
        inst = clh::gen_reducing(g, c.seed, dim);
    } else if (kind == "conjugated") {
        inst = clh::gen_conjugated(clh::gen_classical(g, c.seed, dim), c.seed);
    } else if (kind == "mixed") {
        clh::MixedOptions o;
        o.dim = dim;
        inst = clh::gen_mixed(rows, cols, c.seed, o);
    } else if (kind == "unsat") {
        inst = clh::gen_unsat(g, c.seed, dim);
    } else {
        clh::fail(clh::ErrorCode::InvalidArgument, "unknown kind '" + kind + "'");
    }
    emit_instance(c, inst, "gen --kind " + kind);
    return 0;
}

int cmd_validate(const Config &c, const clh::Instance &inst) {
    clh::ValidationReport rep = clh::validate(inst, c.tol);
    ordered_json j;
    j["ok"] = rep.ok();
    j["max_commutator"] = rep.max_commutator;
    j["violations"] = ordered_json::array();
    for (const auto &v : rep.violations) {
        j["violations"].push_back({{"kind", v.kind}, {"ids", v.ids}, {"detail", v.detail}});
    }
    emit(c, j);
    return rep.ok() ? 0 : 1;
}

int cmd_degree(const Config &c, const clh::Instance &inst) {
    clh::DegreeReport rep = clh::degree_report(inst, c.tol);
    ordered_json j;
    j["max_degree"] = rep.max_degree;
    j["degree"] = ordered_json::object();
    for (auto [reg, d] : rep.degree) {
        j["degree"][std::to_string(reg)] = d;
    }
    emit(c, j);
    return 0;
}

int cmd_lambda0(const Config &c, const clh::Instance &inst, const std::string &method) {
    clh::OracleMethod m = clh::OracleMethod::Auto;
    if (method == "dense") {
        m = clh::OracleMethod::Dense;
    } else if (method == "iterative") {
        m = clh::OracleMethod::Iterative;
    } else if (method == "trace") {
        m = clh::OracleMethod::TraceProduct;
    }
    ordered_json j;
    if (m == clh::OracleMethod::TraceProduct) {
        clh::TraceTest t = clh::frustration_free_check(inst, c.tol, c.jobs);
        j["method"] = "trace";
        j["trace"] = t.trace;
        j["threshold"] = t.threshold;
        j["lambda0_is_zero"] = t.frustration_free;
    } else {
        clh::OracleResult r = clh::lambda0_exact(inst, m);
        j["method"] = clh::oracle_method_name(r.method);
        j["lambda0"] = r.lambda0;
        j["lambda0_is_zero"] = r.is_zero;
        j["dim"] = r.dim;
        if (r.ground_degeneracy) {
            j["ground_degeneracy"] = *r.ground_degeneracy;
        }
    }
    emit(c, j);
    return 0;
}

int cmd_decompose(const Config &c, const clh::Instance &inst, int reg) {
    if (!inst.has_register(reg)) {
        clh::fail(clh::ErrorCode::UnknownRegister, "register " + std::to_string(reg) + " is not in the instance");
    }
    clh::InducedAlgebra alg = clh::joint_induced_algebra(inst, inst.incident_terms(reg), reg, c.tol);
    clh::StructureDecomposition dec = clh::structure_decompose(alg, c.tol);
    clh::DecompositionResiduals res = clh::decomposition_residuals(alg, dec);
    ordered_json j;
    j["register"] = reg;
    j["dim"] = dec.dim;
    j["algebra_dim"] = alg.basis.size();
    j["center_dim"] = clh::center(alg, c.tol).size();
    j["blocks"] = ordered_json::array();
    for (const auto &b : dec.blocks) {
        j["blocks"].push_back({{"d1", b.d1}, {"d2", b.d2}});
    }
    j["residuals"] = {{"completeness", res.completeness},
                      {"off_diagonal", res.off_diagonal},
                      {"tensor_form", res.tensor_form},
                      {"fullness_gap", res.fullness_gap}};
    emit(c, j);
    return 0;
}

int cmd_jordan(const Config &c, const std::string &p_path, const std::string &q_path) {
    clh::ComplexMatrix p = clh::deserialize_matrix(slurp(p_path));
    clh::ComplexMatrix q = clh::deserialize_matrix(slurp(q_path));
    clh::JordanDecomposition dec = clh::jordan_decompose(p, q, c.tol);
    clh::JordanResiduals res = clh::jordan_residuals(dec, p, q);
    ordered_json j;
    j["dim"] = dec.dim;
    j["blocks"] = ordered_json::array();
    for (const auto &b : dec.blocks) {
        j["blocks"].push_back({{"dim", b.dim}, {"eta", b.eta}, {"in_p", b.p_vec.has_value()}, {"in_q", b.q_vec.has_value()}});
    }
    j["residuals"] = {
        {"invariance", res.invariance}, {"orthogonality", res.orthogonality}, {"reconstruction", res.reconstruction}};
    emit(c, j);
    return 0;
}

int cmd_classify(const Config &c, const clh::Instance &inst, int a, int b, int reg) {
    const clh::LocalTerm &p = inst.term(a), &q = inst.term(b);
    clh::Rank1Classification cls = clh::rank1_classify(inst, p, q, reg, c.tol);
    ordered_json j;
    j["register"] = reg;
    j["terms"] = {a, b};
    if (cls.kind == clh::Rank1Classification::Kind::Singular) {
        j["kind"] = "singular";
        j["residual"] = clh::singular_residual(inst, p, q, reg, cls.psi);
    } else {
        j["kind"] = "reducing";
        j["residual"] = clh::reducing_residual(inst, p, q, reg, cls.pi);
    }
    emit(c, j);
    return 0;
}

int cmd_round(const Config &c, const clh::Instance &inst, const clh::Guide &guide, std::optional<size_t> only) {
    clh::Instance cur = inst;
    for (size_t k = 0; k < guide.moves.size(); k++) {
        if (!only || *only == k) {
            cur = clh::apply_move(cur, guide.moves[k], c.tol);
        }
    }
    if (only && *only >= guide.moves.size()) {
        clh::fail(clh::ErrorCode::InvalidArgument, "guide has no move " + std::to_string(*only));
    }
    emit_instance(c, cur, "round");
    return 0;
}

int cmd_puncture(const Config &c, const clh::Instance &inst, int reg, const std::string &choices) {
    clh::PunctureOutcome o = clh::puncture_general(inst, reg, parse_list(choices), c.tol);
    ordered_json j;
    j["register"] = reg;
    j["case_tag"] = o.case_tag;
    j["register_fate"] = clh::register_fate_name(o.register_fate);
    j["removed_terms"] = o.removed_term_ids;
    j["merged_support"] = o.merged_support ? ordered_json(*o.merged_support) : ordered_json(nullptr);
    j["scalar"] = o.scalar;
    j["instance"] = instance_json(o.instance);
    emit(c, j);
    return 0;
}

int cmd_reduce2d(const Config &c, const clh::Instance &inst, clh::Guide guide, std::optional<size_t> size) {
    if (size) {
        guide.triangle_size = size;
    }
    clh::ReductionResult r = clh::guided_reduce_2d(inst, guide, c.tol);
    ordered_json j;
    j["triangle_size"] = r.triangulation.triangle_size;
    j["centers"] = r.triangulation.centers;
    j["co_paths"] = r.triangulation.co_paths.size();
    j["grouping"] = ordered_json::object();
    for (auto [reg, group] : r.triangulation.grouping) {
        j["grouping"][std::to_string(reg)] = group;
    }
    j["max_group_support"] = clh::max_group_support(r.reduced, {});
    j["reduced"] = instance_json(r.reduced);
    emit(c, j);
    return 0;
}

int cmd_prove(const Config &c, const clh::Instance &inst, size_t budget, std::optional<size_t> size) {
    clh::ProverOptions o;
    o.triangle_size = size;
    o.jobs = c.jobs;
    clh::ProverResult r = clh::prover_search(inst, budget, o, c.tol);
    ordered_json j;
    j["found"] = r.guide.has_value();
    j["nodes"] = r.nodes;
    j["guide"] = r.guide ? embedded(clh::serialize_guide(*r.guide)) : ordered_json(nullptr);
    emit(c, j);
    return r.guide ? 0 : 1;
}

int cmd_verify(const Config &c, const std::string &inst_path, const std::string &guide_path) {
    // Unparseable inputs are input errors; everything else is a verdict.
    clh::Instance inst = load_instance(inst_path);
    clh::Guide guide = load_guide(guide_path);
    clh::VerifierVerdict v = clh::verify(inst, guide, c.tol);
    emit(c, embedded(clh::verdict_json(v)));
    return v.accept ? 0 : 1;
}

int cmd_qlll(const Config &c, unsigned long g, unsigned long d, unsigned long k, unsigned long r) {
    bool sat = clh::qlll_predicate(g, d, k, r);
    ordered_json j;
    j["g"] = g;
    j["bound"] = std::pow((double)d, (double)k) / ((double)r * std::numbers::e);
    j["satisfiable"] = sat;
    emit(c, j);
    return sat ? 0 : 1;
}

int cmd_qima_to_clh(const Config &c, const std::string &path) {
    clh::ClhConversion conv = clh::verifier_to_clh(parse_verifier(slurp(path)), c.tol);
    ordered_json j;
    j["instance"] = instance_json(conv.instance);
    j["eigenvalue_hints"] = conv.eigenvalue_hints;
    emit(c, j);
    return 0;
}

int cmd_qima_from_clh(const Config &c, const clh::Instance &inst) {
    emit(c, verifier_json(clh::clh_to_verifier(inst, c.tol)), false);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Commuting local Hamiltonian toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;
    app.add_option("--seed", cfg.seed, "Seed for every random choice")->each([&](const std::string &) {
        cfg.seed_given = true;
    });
    app.add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("-o,--out", cfg.out, "Write the JSON result here instead of stdout");
    app.add_option("--eps-herm", cfg.tol.herm, "Hermiticity tolerance");
    app.add_option("--eps-eig", cfg.tol.eig, "Eigenvalue cutoff");
    app.add_option("--eps-recon", cfg.tol.recon, "Reconstruction tolerance");
    app.add_option("--eps-comm", cfg.tol.comm, "Commutator tolerance");
    app.add_option("--eps-trace", cfg.tol.trace, "Trace test tolerance per dimension");

    std::string instance_path = "-", guide_path, kind = "classical", placement = "vertices", method = "auto";
    std::string choices = "0,0", p_path, q_path;
    size_t rows = 2, cols = 2, dim = 2, budget = 100000;
    int reg = 0, term_a = 0, term_b = 1;
    std::optional<size_t> triangle_size, move_index;
    unsigned long g = 0, d = 0, k = 0, r = 0;

    auto *gen = app.add_subcommand("gen", "Generate a seeded instance");
    gen->add_option("--kind", kind, "classical|singular|reducing|conjugated|mixed|unsat")
        ->check(CLI::IsMember({"classical", "singular", "reducing", "conjugated", "mixed", "unsat"}));
    gen->add_option("--rows", rows)->check(CLI::PositiveNumber);
    gen->add_option("--cols", cols)->check(CLI::PositiveNumber);
    gen->add_option("--dim", dim, "Register dimension")->check(CLI::PositiveNumber);
    gen->add_option("--placement", placement)->check(CLI::IsMember({"vertices", "edges"}));

    auto add_instance = [&](CLI::App *sub) { sub->add_option("instance", instance_path, "Instance JSON ('-' for stdin)"); };
    auto *validate = app.add_subcommand("validate", "Check every instance invariant");
    add_instance(validate);
    auto *degree = app.add_subcommand("degree", "Nontrivial degree of every register");
    add_instance(degree);
    auto *lambda0 = app.add_subcommand("lambda0", "Ground energy by brute force");
    add_instance(lambda0);
    lambda0->add_option("--method", method)->check(CLI::IsMember({"auto", "dense", "iterative", "trace"}));
    auto *decompose = app.add_subcommand("decompose", "Block structure of a register's induced algebra");
    add_instance(decompose);
    decompose->add_option("--register", reg)->required();
    auto *jordan = app.add_subcommand("jordan", "Jordan decomposition of two projectors");
    jordan->add_option("--p", p_path, "Matrix JSON")->required();
    jordan->add_option("--q", q_path, "Matrix JSON")->required();
    auto *classify = app.add_subcommand("classify", "Singular or reducing overlap of two rank-1 terms");
    add_instance(classify);
    classify->add_option("--term-a", term_a)->required();
    classify->add_option("--term-b", term_b)->required();
    classify->add_option("--register", reg)->required();
    auto *round = app.add_subcommand("round", "Apply guide moves to an instance");
    add_instance(round);
    round->add_option("guide", guide_path, "Guide JSON")->required();
    round->add_option("--move", move_index, "Apply only this move");
    auto *puncture = app.add_subcommand("puncture", "Puncture one register");
    add_instance(puncture);
    puncture->add_option("--register", reg)->required();
    puncture->add_option("--choices", choices, "Block choices a,b");
    auto *reduce2d = app.add_subcommand("reduce2d", "Guided reduction of a grid instance to 2-local");
    add_instance(reduce2d);
    reduce2d->add_option("guide", guide_path, "Guide JSON")->required();
    reduce2d->add_option("--triangle-size", triangle_size);
    auto *prove = app.add_subcommand("prove", "Search for an accepting guide");
    add_instance(prove);
    prove->add_option("--budget", budget);
    prove->add_option("--triangle-size", triangle_size);
    auto *verify = app.add_subcommand("verify", "Check a guide against an instance");
    verify->add_option("instance", instance_path)->required();
    verify->add_option("guide", guide_path)->required();
    auto *qlll = app.add_subcommand("qlll", "Lovasz local lemma triviality bound g <= d^k / (r e)");
    qlll->add_option("--g", g)->required()->check(CLI::PositiveNumber);
    qlll->add_option("--d", d)->required()->check(CLI::PositiveNumber);
    qlll->add_option("--k", k)->required()->check(CLI::PositiveNumber);
    qlll->add_option("--r", r)->required()->check(CLI::PositiveNumber);
    auto *qima = app.add_subcommand("qima", "Convert between instant verifiers and instances");
    qima->require_subcommand(1);
    qima->fallthrough();
    auto *to_clh = qima->add_subcommand("to-clh", "Verifier JSON to instance");
    to_clh->add_option("verifier", instance_path)->required();
    auto *from_clh = qima->add_subcommand("from-clh", "Projector instance to verifier JSON");
    add_instance(from_clh);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (cfg.seed_given) {
        cfg.tol.seed = cfg.seed;
    }

    try {
        if (*gen) return cmd_gen(cfg, kind, rows, cols, dim, placement);
        if (*validate) return cmd_validate(cfg, load_instance(instance_path));
        if (*degree) return cmd_degree(cfg, load_instance(instance_path));
        if (*lambda0) return cmd_lambda0(cfg, load_instance(instance_path), method);
        if (*decompose) return cmd_decompose(cfg, load_instance(instance_path), reg);
        if (*jordan) return cmd_jordan(cfg, p_path, q_path);
        if (*classify) return cmd_classify(cfg, load_instance(instance_path), term_a, term_b, reg);
        if (*round) return cmd_round(cfg, load_instance(instance_path), load_guide(guide_path), move_index);
        if (*puncture) return cmd_puncture(cfg, load_instance(instance_path), reg, choices);
        if (*reduce2d) return cmd_reduce2d(cfg, load_instance(instance_path), load_guide(guide_path), triangle_size);
        if (*prove) return cmd_prove(cfg, load_instance(instance_path), budget, triangle_size);
        if (*verify) return cmd_verify(cfg, instance_path, guide_path);
        if (*qlll) return cmd_qlll(cfg, g, d, k, r);
        if (*to_clh) return cmd_qima_to_clh(cfg, instance_path);
        if (*from_clh) return cmd_qima_from_clh(cfg, load_instance(instance_path));
    } catch (const clh::Error &e) {
        std::cerr << "clh: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception &e) {
        std::cerr << "clh: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
