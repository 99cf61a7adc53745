// Copyright 2026 The secrecy-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file json_io.hpp
/// JSON readers and writers for the library's data types. Needs
/// nlohmann/json (the single header json.hpp) on the include path.
///
/// Formats:
///   distribution  {"dims":[dx,dy,dz],"p":[[[...]]]}  (x, then y, then z), or
///                 {"dims":[...],"entries":[{"x":0,"y":0,"z":0,"p":0.25},...]}
///   state         {"dims":[...],"re":[[...]],"im":[[...]]}  (A, B, E order)
///   phases        {"entries":[{"x":..,"y":..,"z":..,"phi":..},...]}
///   tree          {"rounds":2,"dim_a":..,"dim_b":..,"out_a":..,"out_b":..,
///                  "nodes":{"":[[K,...],...],"0":...},
///                  "leaf_a":{"0,1":[K,...]},"leaf_b":{...}}
///                 with K = {"re":[[...]],"im":[[...]]} and histories written
///                 as comma-separated outcomes ("" is the root).
///
/// dump() renders floating-point numbers with 12 significant digits so that
/// reports are byte-stable.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "secrecy_forge/classify.hpp"
#include "secrecy_forge/common_info.hpp"
#include "secrecy_forge/dequantize.hpp"
#include "secrecy_forge/dist.hpp"
#include "secrecy_forge/embed.hpp"
#include "secrecy_forge/entangle.hpp"
#include "secrecy_forge/keyrate.hpp"
#include "secrecy_forge/qlinalg.hpp"

namespace secrecy_forge::io {

using Json = nlohmann::ordered_json;

/// Malformed or invalid input (the CLI maps it to exit code 2).
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- rendering

inline std::string format_number(double v) {
    if (!std::isfinite(v)) {
        return "null";
    }
    if (v == 0.0) {
        return "0";  // also folds -0
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace detail {

inline void dump_into(const Json &j, std::string &out, int indent, int depth) {
    const std::string pad = indent < 0 ? "" : std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad = indent < 0 ? "" : std::string(static_cast<std::size_t>(indent * depth), ' ');
    const char *nl = indent < 0 ? "" : "\n";
    const char *colon = indent < 0 ? ":" : ": ";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad + Json(it.key()).dump() + colon;
                dump_into(it.value(), out, indent, depth + 1);
            }
            out += nl + close_pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            const bool flat = std::all_of(j.begin(), j.end(), [](const Json &e) {
                return !e.is_object() && !e.is_array();
            });
            out += "[";
            bool first = true;
            for (const auto &e : j) {
                if (!first) {
                    out += flat || indent < 0 ? (indent < 0 ? "," : ", ") : ",";
                }
                if (!flat) {
                    out += nl + pad;
                }
                first = false;
                dump_into(e, out, indent, depth + 1);
            }
            if (!flat) {
                out += nl + close_pad;
            }
            out += "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_number(j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

}  // namespace detail

/// Deterministic rendering; indent < 0 gives a single line.
inline std::string dump(const Json &j, int indent = 2) {
    std::string out;
    detail::dump_into(j, out, indent, 0);
    return out;
}

// ------------------------------------------------------------------ parsing

/// Parses JSON text, reporting the line and column of syntax errors.
inline nlohmann::json parse_text(const std::string &text, const std::string &origin = "input") {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                         ": JSON syntax error");
    }
}

inline std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json parse_file(const std::string &path) { return parse_text(read_text(path), path); }

namespace detail {

template <class T>
T field(const nlohmann::json &j, const char *key, const std::string &what) {
    if (!j.is_object() || !j.contains(key)) {
        throw InputError(what + ": missing field \"" + key + "\"");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
        throw InputError(what + ": field \"" + key + "\" has the wrong type");
    }
}

inline std::vector<std::size_t> dims_of(const nlohmann::json &j, const std::string &what) {
    auto dims = field<std::vector<std::size_t>>(j, "dims", what);
    for (auto v : dims) {
        if (v == 0) {
            throw InputError(what + ": zero dimension");
        }
    }
    return dims;
}

inline CMat matrix_from(const nlohmann::json &re, const nlohmann::json &im, std::size_t rows,
                        std::size_t cols, const std::string &what) {
    auto r = re.get<std::vector<std::vector<double>>>();
    auto i = im.get<std::vector<std::vector<double>>>();
    if (r.size() != rows || i.size() != rows) {
        throw InputError(what + ": expected " + std::to_string(rows) + " rows");
    }
    CMat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t a = 0; a < rows; ++a) {
        if (r[a].size() != cols || i[a].size() != cols) {
            throw InputError(what + ": row " + std::to_string(a) + " has the wrong length");
        }
        for (std::size_t b = 0; b < cols; ++b) {
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = {r[a][b], i[a][b]};
        }
    }
    return m;
}

inline CMat matrix_from(const nlohmann::json &j, const std::string &what) {
    try {
        auto re = j.at("re");
        auto im = j.at("im");
        const std::size_t rows = re.size();
        const std::size_t cols = rows ? re.at(0).size() : 0;
        return matrix_from(re, im, rows, cols, what);
    } catch (const nlohmann::json::exception &) {
        throw InputError(what + ": expected {\"re\":[[...]],\"im\":[[...]]}");
    }
}

inline Json matrix_to(const CMat &m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        Json rr = Json::array(), ii = Json::array();
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
            rr.push_back(m(a, b).real());
            ii.push_back(m(a, b).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ii));
    }
    return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

template <class T>
Json optional_list(const std::vector<std::optional<T>> &v) {
    Json a = Json::array();
    for (const auto &e : v) {
        a.push_back(e ? Json(*e) : Json(nullptr));
    }
    return a;
}

}  // namespace detail

// ------------------------------------------------------------- distribution

/// `tol` is the sum-to-one validation tolerance. Files written by dump()
/// carry 12 significant digits, so re-reading them needs about 1e-10.
inline Dist3 dist_from_json(const nlohmann::json &j, double tol = kValidationTol) {
    const std::string what = "distribution";
    auto dims = detail::dims_of(j, what);
    if (dims.size() != 3) {
        throw InputError(what + ": dims must have three entries");
    }
    const std::size_t dx = dims[0], dy = dims[1], dz = dims[2];
    std::vector<double> v(dx * dy * dz, 0.0);
    if (j.contains("p")) {
        std::vector<std::vector<std::vector<double>>> p;
        try {
            p = j.at("p").get<decltype(p)>();
        } catch (const nlohmann::json::exception &) {
            throw InputError(what + ": \"p\" must be a nested [x][y][z] array of numbers");
        }
        if (p.size() != dx) {
            throw InputError(what + ": \"p\" has " + std::to_string(p.size()) + " x-rows, dims say " +
                             std::to_string(dx));
        }
        for (std::size_t x = 0; x < dx; ++x) {
            if (p[x].size() != dy) {
                throw InputError(what + ": p[" + std::to_string(x) + "] has the wrong length");
            }
            for (std::size_t y = 0; y < dy; ++y) {
                if (p[x][y].size() != dz) {
                    throw InputError(what + ": p[" + std::to_string(x) + "][" + std::to_string(y) +
                                     "] has the wrong length");
                }
                for (std::size_t z = 0; z < dz; ++z) {
                    v[(x * dy + y) * dz + z] = p[x][y][z];
                }
            }
        }
    } else if (j.contains("entries")) {
        std::size_t k = 0;
        for (const auto &e : j.at("entries")) {
            const std::string where = what + ": entries[" + std::to_string(k++) + "]";
            auto x = detail::field<std::size_t>(e, "x", where);
            auto y = detail::field<std::size_t>(e, "y", where);
            auto z = detail::field<std::size_t>(e, "z", where);
            auto p = detail::field<double>(e, "p", where);
            if (x >= dx || y >= dy || z >= dz) {
                throw InputError(where + ": index outside dims");
            }
            v[(x * dy + y) * dz + z] += p;
        }
    } else {
        throw InputError(what + ": needs \"p\" or \"entries\"");
    }
    try {
        return Dist3(dx, dy, dz, std::move(v), tol);
    } catch (const std::invalid_argument &e) {
        throw InputError(what + ": " + e.what());
    }
}

inline Json dist_to_json(const Dist3 &d, bool sparse = false) {
    Json j{{"dims", {d.dx(), d.dy(), d.dz()}}};
    if (sparse) {
        Json entries = Json::array();
        for (std::size_t x = 0; x < d.dx(); ++x)
            for (std::size_t y = 0; y < d.dy(); ++y)
                for (std::size_t z = 0; z < d.dz(); ++z)
                    if (d(x, y, z) != 0.0) {
                        entries.push_back({{"x", x}, {"y", y}, {"z", z}, {"p", d(x, y, z)}});
                    }
        j["entries"] = std::move(entries);
        return j;
    }
    Json p = Json::array();
    for (std::size_t x = 0; x < d.dx(); ++x) {
        Json px = Json::array();
        for (std::size_t y = 0; y < d.dy(); ++y) {
            Json pxy = Json::array();
            for (std::size_t z = 0; z < d.dz(); ++z) {
                pxy.push_back(d(x, y, z));
            }
            px.push_back(std::move(pxy));
        }
        p.push_back(std::move(px));
    }
    j["p"] = std::move(p);
    return j;
}

// ------------------------------------------------------- common information

inline Json partition_to_json(const CommonPartition &part) {
    Json blocks = Json::array();
    for (const auto &b : part.blocks) {
        blocks.push_back({{"x", b.xs}, {"y", b.ys}});
    }
    return Json{{"blocks", std::move(blocks)}};
}

inline Json ccf_to_json(const CondCommonFunction &ccf) {
    Json per_z = Json::array();
    for (std::size_t z = 0; z < ccf.per_z.size(); ++z) {
        Json e{{"z", z}};
        e["blocks"] = ccf.per_z[z] ? partition_to_json(*ccf.per_z[z])["blocks"] : Json(nullptr);
        per_z.push_back(std::move(e));
    }
    return Json{{"per_z", std::move(per_z)},
                {"global_labels", ccf.global_labels},
                {"label_count", ccf.label_count},
                {"per_z_injective", ccf.per_z_injective}};
}

// ------------------------------------------------------------------- states

inline QState state_from_json(const nlohmann::json &j, double tol = kStateTol) {
    const std::string what = "state";
    auto dims = detail::dims_of(j, what);
    std::size_t n = 1;
    for (auto v : dims) {
        n *= v;
    }
    if (!j.contains("re") || !j.contains("im")) {
        throw InputError(what + ": needs \"re\" and \"im\"");
    }
    CMat rho;
    try {
        rho = detail::matrix_from(j.at("re"), j.at("im"), n, n, what);
    } catch (const nlohmann::json::exception &) {
        throw InputError(what + ": \"re\"/\"im\" must be square numeric matrices");
    }
    try {
        return QState(std::move(dims), std::move(rho), tol);
    } catch (const std::invalid_argument &e) {
        throw InputError(what + ": " + e.what());
    }
}

inline Json state_to_json(const QState &s) {
    Json j{{"dims", s.dims()}};
    auto m = detail::matrix_to(s.rho());
    j["re"] = std::move(m["re"]);
    j["im"] = std::move(m["im"]);
    return j;
}

// ------------------------------------------------------------------- phases

inline PhaseAssignment phases_from_json(const nlohmann::json &j, const Dist3 &d) {
    const std::string what = "phases";
    PhaseAssignment ph = PhaseAssignment::zero(d);
    if (!j.is_object() || !j.contains("entries") || !j.at("entries").is_array()) {
        throw InputError(what + ": needs an \"entries\" array");
    }
    std::size_t k = 0;
    for (const auto &e : j.at("entries")) {
        const std::string where = what + ": entries[" + std::to_string(k++) + "]";
        auto x = detail::field<std::size_t>(e, "x", where);
        auto y = detail::field<std::size_t>(e, "y", where);
        auto z = detail::field<std::size_t>(e, "z", where);
        auto phi = detail::field<double>(e, "phi", where);
        if (x >= d.dx() || y >= d.dy() || z >= d.dz()) {
            throw InputError(where + ": index outside the distribution's dims");
        }
        ph.set(x, y, z, phi);
    }
    return ph;
}

inline Json phases_to_json(const PhaseAssignment &ph) {
    Json entries = Json::array();
    for (std::size_t x = 0; x < ph.dx(); ++x)
        for (std::size_t y = 0; y < ph.dy(); ++y)
            for (std::size_t z = 0; z < ph.dz(); ++z)
                if (ph(x, y, z) != 0.0) {
                    entries.push_back({{"x", x}, {"y", y}, {"z", z}, {"phi", ph(x, y, z)}});
                }
    return Json{{"entries", std::move(entries)}};
}

// -------------------------------------------------------------------- trees

inline std::string history_to_string(const History &h) {
    std::string s;
    for (std::size_t i = 0; i < h.size(); ++i) {
        s += (i ? "," : "") + std::to_string(h[i]);
    }
    return s;
}

inline History history_from_string(const std::string &s) {
    History h;
    if (s.empty()) {
        return h;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
            throw InputError("tree: bad history key \"" + s + "\"");
        }
        h.push_back(static_cast<std::size_t>(std::stoull(item)));
    }
    return h;
}

inline InstrumentTree tree_from_json(const nlohmann::json &j) {
    const std::string what = "tree";
    InstrumentTree t;
    t.rounds = detail::field<std::size_t>(j, "rounds", what);
    t.dim_a = detail::field<std::size_t>(j, "dim_a", what);
    t.dim_b = detail::field<std::size_t>(j, "dim_b", what);
    t.out_a = j.contains("out_a") ? detail::field<std::size_t>(j, "out_a", what) : t.dim_a;
    t.out_b = j.contains("out_b") ? detail::field<std::size_t>(j, "out_b", what) : t.dim_b;
    auto kraus_list = [&](const nlohmann::json &arr, const std::string &where) {
        if (!arr.is_array()) {
            throw InputError(where + ": expected a list of Kraus operators");
        }
        KrausList ks;
        for (const auto &k : arr) {
            ks.push_back(detail::matrix_from(k, where));
        }
        return ks;
    };
    if (j.contains("nodes")) {
        for (const auto &[key, outs] : j.at("nodes").items()) {
            const std::string where = what + ": node \"" + key + "\"";
            if (!outs.is_array()) {
                throw InputError(where + ": expected a list of outcomes");
            }
            Instrument ins;
            for (const auto &o : outs) {
                ins.outcomes.push_back(kraus_list(o, where));
            }
            t.nodes[history_from_string(key)] = std::move(ins);
        }
    }
    for (const char *side : {"leaf_a", "leaf_b"}) {
        if (!j.contains(side)) {
            continue;
        }
        auto &leaves = std::string(side) == "leaf_a" ? t.leaf_a : t.leaf_b;
        for (const auto &[key, ks] : j.at(side).items()) {
            leaves[history_from_string(key)] =
                kraus_list(ks, what + ": " + side + " \"" + key + "\"");
        }
    }
    try {
        t.validate();
    } catch (const std::invalid_argument &e) {
        throw InputError(e.what());
    }
    return t;
}

inline Json tree_to_json(const InstrumentTree &t) {
    Json j{{"rounds", t.rounds}, {"dim_a", t.dim_a}, {"dim_b", t.dim_b},
           {"out_a", t.out_a},   {"out_b", t.out_b}};
    Json nodes = Json::object();
    for (const auto &[h, ins] : t.nodes) {
        Json outs = Json::array();
        for (const auto &ks : ins.outcomes) {
            Json arr = Json::array();
            for (const auto &k : ks) {
                arr.push_back(detail::matrix_to(k));
            }
            outs.push_back(std::move(arr));
        }
        nodes[history_to_string(h)] = std::move(outs);
    }
    j["nodes"] = std::move(nodes);
    for (const auto &[name, leaves] : {std::pair{"leaf_a", &t.leaf_a}, std::pair{"leaf_b", &t.leaf_b}}) {
        Json lj = Json::object();
        for (const auto &[h, ks] : *leaves) {
            Json arr = Json::array();
            for (const auto &k : ks) {
                arr.push_back(detail::matrix_to(k));
            }
            lj[history_to_string(h)] = std::move(arr);
        }
        j[name] = std::move(lj);
    }
    return j;
}

// ------------------------------------------------------------------ reports

inline Json class_report_to_json(const ClassReport &r) {
    Json pd{{"verdict", to_string(r.pd.verdict)},
            {"block_independent", r.pd.block_independent},
            {"extended_ubi", r.pd.extended_ubi},
            {"message_leak", r.pd.message_leak},
            {"message",
             {{"alice", detail::optional_list(r.pd.message.alice)},
              {"bob", detail::optional_list(r.pd.message.bob)}}}};
    Json down{{"found", r.pd_down.found()},
              {"channel", r.pd_down.found() ? Json(*r.pd_down.assignment) : Json(nullptr)},
              {"channels_tested", r.pd_down.channels_tested},
              {"budget_exhausted", r.pd_down.budget_exhausted},
              {"eve_leak", r.pd_down.eve_leak},
              {"from_identity", r.pd_down_from_identity},
              {"channel_block_independent", r.pd_down_channel_bi}};
    return Json{{"bi", to_string(r.bi)},
                {"ubi", to_string(r.ubi)},
                {"ubi_pd", to_string(r.ubi_pd)},
                {"ubi_pd_down", to_string(r.ubi_pd_down)},
                {"semi_unambiguous", to_string(r.semi_unambiguous)},
                {"unambiguous", to_string(r.unambiguous)},
                {"certificates",
                 {{"block_cmi", r.block_cmi},
                  {"per_z_injective", r.per_z_injective},
                  {"H_J_given_X", r.label_given_x},
                  {"H_J_given_Y", r.label_given_y},
                  {"H_Z_given_XY", r.z_given_xy},
                  {"H_XY_given_JZ", r.residual_xy},
                  {"ubi_pd", std::move(pd)},
                  {"ubi_pd_down", std::move(down)}}},
                {"tol", r.options.tol}};
}

inline Json measure_to_json(const MeasureResult &m) {
    Json j{{"name", m.name}, {"value", m.value}, {"kind", to_string(m.kind)}, {"method", m.method}};
    if (m.interval) {
        j["interval"] = {m.interval->first, m.interval->second};
    }
    if (m.diagnostics) {
        const auto &d = *m.diagnostics;
        j["diagnostics"] = {{"iterations", d.iterations},
                            {"restarts", d.restarts},
                            {"best_restart", d.best_restart},
                            {"seed", d.seed},
                            {"converged", d.converged}};
    }
    return j;
}

inline Json ordering_to_json(const Ordering &o) {
    return Json{{"lhs", o.lhs},     {"relation", o.relation}, {"rhs", o.rhs},
                {"lhs_value", o.lhs_value}, {"rhs_value", o.rhs_value}, {"slack", o.slack},
                {"tol", o.tol},     {"pass", o.pass},         {"basis", o.basis}};
}

inline Json chain_to_json(const ChainReport &c) {
    Json q = Json::array(), o = Json::array();
    for (const auto &m : c.quantities) {
        q.push_back(measure_to_json(m));
    }
    for (const auto &e : c.orderings) {
        o.push_back(ordering_to_json(e));
    }
    return Json{{"classification", class_report_to_json(c.classification)},
                {"K_D", measure_to_json(c.kd)},
                {"certificate_channel", c.certificate ? Json(*c.certificate) : Json(nullptr)},
                {"quantities", std::move(q)},
                {"orderings", std::move(o)},
                {"all_pass", c.all_pass()},
                {"notes", c.notes}};
}

inline Json advantage_to_json(const AdvantageReport &a) {
    Json cands = Json::array();
    for (const auto &m : a.upper_candidates) {
        cands.push_back(measure_to_json(m));
    }
    return Json{{"K_D_classical", measure_to_json(a.kd_classical)},
                {"K_D_quantum_lower", measure_to_json(a.quantum_lower)},
                {"K_D_quantum_upper", measure_to_json(a.quantum_upper)},
                {"upper_candidates", std::move(cands)},
                {"direction", a.direction},
                {"gap", a.gap},
                {"tol", a.tol}};
}

inline Json lemma_to_json(const LemmaReport &r) {
    Json rows = Json::array();
    for (const auto &row : r.rows) {
        rows.push_back({{"embedding", row.embedding},
                        {"bound", row.bound},
                        {"printed_bound", row.printed_bound},
                        {"protocol", row.protocol},
                        {"expected", row.expected}});
    }
    return Json{{"rows", std::move(rows)}};
}

}  // namespace secrecy_forge::io
