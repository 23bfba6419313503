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

#include "clh/serialize.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace clh {

using nlohmann::json;

std::string move_kind_name(MoveKind kind) {
    switch (kind) {
        case MoveKind::TwoLocalRound: return "TwoLocalRound";
        case MoveKind::Rank1Round: return "Rank1Round";
        case MoveKind::ClassicalRestrict: return "ClassicalRestrict";
        case MoveKind::SemiSepBranch: return "SemiSepBranch";
        case MoveKind::PunctureChoice: return "PunctureChoice";
        case MoveKind::ResolveBlockage: return "ResolveBlockage";
    }
    return "Unknown";
}

std::optional<MoveKind> parse_move_kind(const std::string &name) {
    for (MoveKind k : {MoveKind::TwoLocalRound, MoveKind::Rank1Round, MoveKind::ClassicalRestrict,
                       MoveKind::SemiSepBranch, MoveKind::PunctureChoice, MoveKind::ResolveBlockage}) {
        if (move_kind_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::vector<std::string> check_guide_payloads(const Guide &guide, const Tolerances &tol) {
    std::vector<std::string> problems;
    auto check = [&](size_t step, const char *what, const ComplexMatrix &m) {
        if (m.size() == 0 || !all_finite(m) || !is_projector(m, tol)) {
            problems.push_back("move " + std::to_string(step) + ": " + what + " is not a projector");
        }
    };
    for (size_t k = 0; k < guide.moves.size(); k++) {
        const Move &m = guide.moves[k];
        if (m.kind == MoveKind::Rank1Round) {
            check(k, "pi_p", m.pi_p);
            check(k, "pi_q", m.pi_q);
        }
        if (m.kind == MoveKind::SemiSepBranch) {
            for (const auto &p : m.projectors) {
                check(k, "decomposition projector", p);
            }
        }
    }
    return problems;
}

namespace {

json matrix_to_json(const ComplexMatrix &m) {
    json j;
    if (m.rows() == m.cols()) {
        j["dim"] = m.rows();
    } else {
        j["rows"] = m.rows();
        j["cols"] = m.cols();
    }
    json entries = json::array();
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            entries.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
    }
    j["entries"] = std::move(entries);
    return j;
}

[[noreturn]] void parse_fail(const std::string &where, const std::string &what) {
    fail(ErrorCode::ParseError, "at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const json &field(const json &j, const std::string &where, const char *key) {
    if (!j.is_object()) {
        parse_fail(where, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        parse_fail(where, std::string("missing field \"") + key + "\"");
    }
    return *it;
}

long long get_int(const json &j, const std::string &where) {
    if (!j.is_number_integer()) {
        parse_fail(where, "expected an integer");
    }
    return j.get<long long>();
}

size_t get_count(const json &j, const std::string &where) {
    long long v = get_int(j, where);
    if (v < 0) {
        parse_fail(where, "expected a non-negative integer");
    }
    return (size_t)v;
}

double get_double(const json &j, const std::string &where) {
    if (!j.is_number()) {
        parse_fail(where, "expected a number");
    }
    return j.get<double>();
}

const json &get_array(const json &j, const std::string &where) {
    if (!j.is_array()) {
        parse_fail(where, "expected an array");
    }
    return j;
}

ComplexMatrix matrix_from_json(const json &j, const std::string &where) {
    size_t rows, cols;
    if (j.is_object() && j.contains("dim")) {
        rows = cols = get_count(j["dim"], where + "/dim");
    } else {
        rows = get_count(field(j, where, "rows"), where + "/rows");
        cols = get_count(field(j, where, "cols"), where + "/cols");
    }
    const json &entries = get_array(field(j, where, "entries"), where + "/entries");
    if (entries.size() != rows * cols) {
        parse_fail(where + "/entries", "expected " + std::to_string(rows * cols) + " entries, found " +
                                           std::to_string(entries.size()));
    }
    ComplexMatrix m(rows, cols);
    for (size_t k = 0; k < entries.size(); k++) {
        std::string w = where + "/entries/" + std::to_string(k);
        const json &e = get_array(entries[k], w);
        if (e.size() != 2) {
            parse_fail(w, "expected [re, im]");
        }
        m(k / cols, k % cols) = Complex(get_double(e[0], w + "/0"), get_double(e[1], w + "/1"));
    }
    return m;
}

std::vector<int> int_list(const json &j, const std::string &where) {
    std::vector<int> out;
    const json &a = get_array(j, where);
    for (size_t k = 0; k < a.size(); k++) {
        out.push_back((int)get_int(a[k], where + "/" + std::to_string(k)));
    }
    return out;
}

json geometry_to_json(const Geometry &g) {
    json j;
    j["kind"] = g.kind == Geometry::Kind::Grid2D ? "grid2d" : "cubic3d";
    j["rows"] = g.rows;
    j["cols"] = g.cols;
    j["layers"] = g.layers;
    j["placement"] = g.placement == Placement::Vertices ? "vertices" : "edges";
    j["num_vertices"] = g.num_vertices;
    json edges = json::array();
    for (auto [a, b] : g.edges) {
        edges.push_back(json::array({a, b}));
    }
    j["edges"] = std::move(edges);
    j["faces"] = g.faces;
    json holes = json::array();
    for (const auto &h : g.holes) {
        holes.push_back({{"register", h.register_id}, {"terms", h.surviving_terms}});
    }
    j["holes"] = std::move(holes);
    json grouping = json::array();
    for (auto [r, s] : g.grouping) {
        grouping.push_back(json::array({r, s}));
    }
    j["grouping"] = std::move(grouping);
    return j;
}

Geometry geometry_from_json(const json &j, const std::string &where) {
    Geometry g;
    const json &kind = field(j, where, "kind");
    if (kind == "grid2d") {
        g.kind = Geometry::Kind::Grid2D;
    } else if (kind == "cubic3d") {
        g.kind = Geometry::Kind::Cubic3D;
    } else {
        parse_fail(where + "/kind", "expected \"grid2d\" or \"cubic3d\"");
    }
    g.rows = get_count(field(j, where, "rows"), where + "/rows");
    g.cols = get_count(field(j, where, "cols"), where + "/cols");
    g.layers = get_count(field(j, where, "layers"), where + "/layers");
    const json &pl = field(j, where, "placement");
    if (pl == "vertices") {
        g.placement = Placement::Vertices;
    } else if (pl == "edges") {
        g.placement = Placement::Edges;
    } else {
        parse_fail(where + "/placement", "expected \"vertices\" or \"edges\"");
    }
    g.num_vertices = get_count(field(j, where, "num_vertices"), where + "/num_vertices");
    const json &edges = get_array(field(j, where, "edges"), where + "/edges");
    for (size_t k = 0; k < edges.size(); k++) {
        auto e = int_list(edges[k], where + "/edges/" + std::to_string(k));
        if (e.size() != 2) {
            parse_fail(where + "/edges/" + std::to_string(k), "expected an endpoint pair");
        }
        g.edges.emplace_back(e[0], e[1]);
    }
    const json &faces = get_array(field(j, where, "faces"), where + "/faces");
    for (size_t k = 0; k < faces.size(); k++) {
        g.faces.push_back(int_list(faces[k], where + "/faces/" + std::to_string(k)));
    }
    const json &holes = get_array(field(j, where, "holes"), where + "/holes");
    for (size_t k = 0; k < holes.size(); k++) {
        std::string w = where + "/holes/" + std::to_string(k);
        Hole h;
        h.register_id = (int)get_int(field(holes[k], w, "register"), w + "/register");
        h.surviving_terms = int_list(field(holes[k], w, "terms"), w + "/terms");
        g.holes.push_back(h);
    }
    const json &grouping = get_array(field(j, where, "grouping"), where + "/grouping");
    for (size_t k = 0; k < grouping.size(); k++) {
        auto p = int_list(grouping[k], where + "/grouping/" + std::to_string(k));
        if (p.size() != 2) {
            parse_fail(where + "/grouping/" + std::to_string(k), "expected a [register, group] pair");
        }
        g.grouping[p[0]] = p[1];
    }
    return g;
}

json parse_text(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        fail(ErrorCode::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

void check_version(const json &j) {
    if (get_int(field(j, "", "version"), "/version") != 1) {
        parse_fail("/version", "unsupported version");
    }
}

}  // namespace

std::string serialize_matrix(const ComplexMatrix &m) {
    return matrix_to_json(m).dump();
}

ComplexMatrix deserialize_matrix(std::string_view text) {
    return matrix_from_json(parse_text(text), "");
}

std::string serialize_instance(const Instance &inst) {
    json j;
    j["version"] = 1;
    json regs = json::array();
    for (const auto &r : inst.registers) {
        regs.push_back({{"id", r.id}, {"dim", r.dim}});
    }
    j["registers"] = std::move(regs);
    json terms = json::array();
    for (const auto &t : inst.terms) {
        json jt;
        jt["id"] = t.id;
        jt["support"] = t.support;
        jt["matrix"] = matrix_to_json(t.matrix);
        jt["rank"] = t.rank ? json(*t.rank) : json(nullptr);
        jt["cell"] = t.cell ? json(*t.cell) : json(nullptr);
        terms.push_back(std::move(jt));
    }
    j["terms"] = std::move(terms);
    j["geometry"] = inst.geometry ? geometry_to_json(*inst.geometry) : json(nullptr);
    j["provenance"] = inst.provenance;
    return j.dump();
}

Instance deserialize_instance(std::string_view text) {
    json j = parse_text(text);
    check_version(j);
    Instance inst;
    const json &regs = get_array(field(j, "", "registers"), "/registers");
    for (size_t k = 0; k < regs.size(); k++) {
        std::string w = "/registers/" + std::to_string(k);
        Register r;
        r.id = (int)get_int(field(regs[k], w, "id"), w + "/id");
        r.dim = get_count(field(regs[k], w, "dim"), w + "/dim");
        inst.registers.push_back(r);
    }
    const json &terms = get_array(field(j, "", "terms"), "/terms");
    for (size_t k = 0; k < terms.size(); k++) {
        std::string w = "/terms/" + std::to_string(k);
        LocalTerm t;
        t.id = (int)get_int(field(terms[k], w, "id"), w + "/id");
        t.support = int_list(field(terms[k], w, "support"), w + "/support");
        t.matrix = matrix_from_json(field(terms[k], w, "matrix"), w + "/matrix");
        const json &rank = field(terms[k], w, "rank");
        if (!rank.is_null()) {
            t.rank = get_count(rank, w + "/rank");
        }
        const json &cell = field(terms[k], w, "cell");
        if (!cell.is_null()) {
            if (!cell.is_string()) {
                parse_fail(w + "/cell", "expected a string or null");
            }
            t.cell = cell.get<std::string>();
        }
        inst.terms.push_back(std::move(t));
    }
    const json &geom = field(j, "", "geometry");
    if (!geom.is_null()) {
        inst.geometry = geometry_from_json(geom, "/geometry");
    }
    const json &prov = get_array(field(j, "", "provenance"), "/provenance");
    for (size_t k = 0; k < prov.size(); k++) {
        if (!prov[k].is_string()) {
            parse_fail("/provenance/" + std::to_string(k), "expected a string");
        }
        inst.provenance.push_back(prov[k].get<std::string>());
    }
    return inst;
}

std::string serialize_guide(const Guide &guide) {
    json j;
    j["version"] = 1;
    if (guide.triangle_size) {
        j["pipeline"] = {{"kind", "reduce2d"}, {"triangle_size", *guide.triangle_size}};
    }
    json moves = json::array();
    for (const auto &m : guide.moves) {
        json jm;
        jm["op"] = move_kind_name(m.kind);
        jm["register"] = m.register_id;
        switch (m.kind) {
            case MoveKind::TwoLocalRound:
            case MoveKind::ResolveBlockage:
                jm["block"] = m.index;
                break;
            case MoveKind::Rank1Round:
                jm["pi_p"] = matrix_to_json(m.pi_p);
                jm["pi_q"] = matrix_to_json(m.pi_q);
                break;
            case MoveKind::ClassicalRestrict:
                jm["basis_index"] = m.index;
                jm["basis"] = matrix_to_json(m.basis);
                break;
            case MoveKind::SemiSepBranch: {
                jm["branch"] = m.index;
                json ps = json::array();
                for (const auto &p : m.projectors) {
                    ps.push_back(matrix_to_json(p));
                }
                jm["projectors"] = std::move(ps);
                jm["exceptional_term"] = m.exceptional_term;
                break;
            }
            case MoveKind::PunctureChoice:
                jm["blocks"] = m.choices;
                break;
        }
        moves.push_back(std::move(jm));
    }
    j["moves"] = std::move(moves);
    return j.dump();
}

Guide deserialize_guide(std::string_view text) {
    json j = parse_text(text);
    check_version(j);
    Guide g;
    if (j.contains("pipeline")) {
        const json &p = j["pipeline"];
        if (field(p, "/pipeline", "kind") != "reduce2d") {
            parse_fail("/pipeline/kind", "expected \"reduce2d\"");
        }
        g.triangle_size = get_count(field(p, "/pipeline", "triangle_size"), "/pipeline/triangle_size");
    }
    const json &moves = get_array(field(j, "", "moves"), "/moves");
    for (size_t k = 0; k < moves.size(); k++) {
        std::string w = "/moves/" + std::to_string(k);
        const json &jm = moves[k];
        const json &op = field(jm, w, "op");
        if (!op.is_string()) {
            parse_fail(w + "/op", "expected a string");
        }
        auto kind = parse_move_kind(op.get<std::string>());
        if (!kind) {
            parse_fail(w + "/op", "unknown move \"" + op.get<std::string>() + "\"");
        }
        Move m;
        m.kind = *kind;
        m.register_id = (int)get_int(field(jm, w, "register"), w + "/register");
        switch (m.kind) {
            case MoveKind::TwoLocalRound:
            case MoveKind::ResolveBlockage:
                m.index = get_count(field(jm, w, "block"), w + "/block");
                break;
            case MoveKind::Rank1Round:
                m.pi_p = matrix_from_json(field(jm, w, "pi_p"), w + "/pi_p");
                m.pi_q = matrix_from_json(field(jm, w, "pi_q"), w + "/pi_q");
                break;
            case MoveKind::ClassicalRestrict:
                m.index = get_count(field(jm, w, "basis_index"), w + "/basis_index");
                m.basis = matrix_from_json(field(jm, w, "basis"), w + "/basis");
                break;
            case MoveKind::SemiSepBranch: {
                m.index = get_count(field(jm, w, "branch"), w + "/branch");
                const json &ps = get_array(field(jm, w, "projectors"), w + "/projectors");
                for (size_t p = 0; p < ps.size(); p++) {
                    m.projectors.push_back(matrix_from_json(ps[p], w + "/projectors/" + std::to_string(p)));
                }
                m.exceptional_term = (int)get_int(field(jm, w, "exceptional_term"), w + "/exceptional_term");
                break;
            }
            case MoveKind::PunctureChoice: {
                const json &bs = get_array(field(jm, w, "blocks"), w + "/blocks");
                for (size_t p = 0; p < bs.size(); p++) {
                    m.choices.push_back(get_count(bs[p], w + "/blocks/" + std::to_string(p)));
                }
                break;
            }
        }
        g.moves.push_back(std::move(m));
    }
    return g;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::ParseError, "cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorCode::InvalidArgument, "cannot write " + path);
    }
    out << contents;
}

}  // namespace clh
