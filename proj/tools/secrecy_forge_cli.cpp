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

// secrecy-forge command-line tool.
//
// Exit codes: 0 success, 1 a checked property failed, 2 usage or input error.
// Output is JSON on stdout (or --out), byte-identical for identical inputs,
// seed and tolerances.

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "secrecy_forge/json_io.hpp"
#include "secrecy_forge/secrecy_forge.hpp"

namespace sf = secrecy_forge;
namespace io = secrecy_forge::io;
namespace inst = secrecy_forge::instances;
using io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitProperty = 1;
constexpr int kExitInput = 2;

// ------------------------------------------------------------- run config

struct RunConfig {
    std::uint64_t seed = 0;
    std::map<std::string, double> tol = {
        {"validation", sf::kValidationTol},  // sum-to-one check on input pmfs
        {"entropy", sf::kEntropyTol},        // classification decisions
        {"exact", 1e-9},                     // closed-form quantities
        {"chain", 2e-2},                     // optimizer upper bounds
        {"dequantize", 1e-9},                // dequantize-check deviation
        {"state", sf::kStateTol},            // density-matrix validation
    };
    std::size_t jobs = 1;
    std::string out;
    sf::Caps caps = sf::default_caps();
    std::vector<std::pair<std::string, std::string>> digests;

    sf::ChainOptions chain() const {
        sf::ChainOptions opt;
        opt.seed = seed;
        opt.tol = tol.at("exact");
        opt.chain_tol = tol.at("chain");
        opt.classify.tol = tol.at("entropy");
        return opt;
    }
};

std::string sha256_hex(const std::string &bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static const char *hex = "0123456789abcdef";
    std::string s;
    for (unsigned int i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

nlohmann::json load(RunConfig &cfg, const std::string &path) {
    const auto text = io::read_text(path);
    cfg.digests.emplace_back(path, sha256_hex(text));
    return io::parse_text(text, path);
}

sf::Dist3 load_dist(RunConfig &cfg, const std::string &path) {
    return io::dist_from_json(load(cfg, path), cfg.tol.at("validation"));
}

sf::PhaseAssignment load_phases(RunConfig &cfg, const std::string &path, const sf::Dist3 &d) {
    return path.empty() ? sf::PhaseAssignment{} : io::phases_from_json(load(cfg, path), d);
}

Json envelope(const RunConfig &cfg, const std::string &command, Json result) {
    Json tol = Json::object();
    for (const auto &[k, v] : cfg.tol) {
        tol[k] = v;
    }
    Json inputs = Json::array();
    for (const auto &[path, digest] : cfg.digests) {
        inputs.push_back({{"path", path}, {"sha256", digest}});
    }
    return Json{{"tool", "secrecy-forge"},
                {"version", sf::kVersion},
                {"command", command},
                {"seed", cfg.seed},
                {"tolerances", std::move(tol)},
                {"caps",
                 {{"product_states", cfg.caps.product_states},
                  {"qstate_dim", cfg.caps.qstate_dim},
                  {"branch_terms", cfg.caps.branch_terms},
                  {"optimizer_dim", cfg.caps.optimizer_dim}}},
                {"inputs", std::move(inputs)},
                {"result", std::move(result)}};
}

void emit(const RunConfig &cfg, const Json &j) {
    const auto text = io::dump(j) + "\n";
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
        throw io::InputError("cannot write " + cfg.out);
    }
    f << text;
}

// --------------------------------------------------------------- commands

int cmd_classify(RunConfig &cfg, const std::string &dist) {
    const auto d = load_dist(cfg, dist);
    sf::ClassifyOptions opt;
    opt.tol = cfg.tol.at("entropy");
    const auto rep = sf::classify(d, opt);
    auto j = io::class_report_to_json(rep);
    j["nesting_violations"] = sf::nesting_violations(rep);
    emit(cfg, envelope(cfg, "classify", std::move(j)));
    return kExitOk;
}

int cmd_commoninfo(RunConfig &cfg, const std::string &dist) {
    const auto d = load_dist(cfg, dist);
    const auto pxy = sf::marginal_pair(d, sf::X, sf::Y);
    Json j{{"partition_xy", io::partition_to_json(sf::maximal_common_partition(pxy))},
           {"H_J_XY", sf::common_information(pxy)},
           {"conditional", io::ccf_to_json(sf::conditional_common_function(d))},
           {"H_J_given_Z", sf::cond_common_entropy(d)}};
    emit(cfg, envelope(cfg, "commoninfo", std::move(j)));
    return kExitOk;
}

int cmd_keyrate(RunConfig &cfg, const std::string &dist, const std::string &phases) {
    const auto d = load_dist(cfg, dist);
    const auto ph = load_phases(cfg, phases, d);
    const auto opt = cfg.chain();
    const auto [lo, hi] = sf::kd_generic_interval(d);
    Json j{{"K_D", io::measure_to_json(sf::kd_class(d, opt.classify))},
           {"generic_interval", {lo, hi}},
           {"advantage", io::advantage_to_json(sf::advantage_report(d, ph, opt, cfg.caps))}};
    emit(cfg, envelope(cfg, "keyrate", std::move(j)));
    return kExitOk;
}

int cmd_embed(RunConfig &cfg, const std::string &dist, const std::string &phases,
              const std::string &kind) {
    const auto d = load_dist(cfg, dist);
    const auto ph = load_phases(cfg, phases, d);
    std::optional<sf::QState> s;
    if (kind == "qqq") {
        s = sf::QState(sf::embed_qqq(d, ph, cfg.caps));
    } else if (kind == "cqq") {
        s = sf::embed_cqq(d, ph, cfg.caps);
    } else if (kind == "ccq") {
        s = sf::embed_ccq(d, ph, cfg.caps);
    } else if (kind == "ccc") {
        s = sf::embed_ccc(d, cfg.caps);
    } else {
        throw io::InputError("embed: --kind must be qqq, cqq, ccq or ccc");
    }
    Json j{{"kind", kind}, {"state", io::state_to_json(*s)}};
    emit(cfg, envelope(cfg, "embed", std::move(j)));
    return kExitOk;
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

int cmd_measures(RunConfig &cfg, const std::string &state, const std::string &which) {
    const auto s = io::state_from_json(load(cfg, state), cfg.tol.at("state"));
    if (s.subsystems() != 2 && s.subsystems() != 3) {
        throw io::InputError("measures: state must have two (AB) or three (ABE) subsystems");
    }
    const auto ab = s.subsystems() == 3 ? sf::partial_trace(s, {0, 1}) : s;
    auto names = split_list(which);
    if (names.empty()) {
        names = {"ef", "er", "neg"};
        if (s.subsystems() == 3) {
            names.insert(names.begin() + 1, "esq");
        }
    }
    Json list = Json::array();
    for (const auto &n : names) {
        if (n == "ef") {
            if (ab.dims() == std::vector<std::size_t>{2, 2}) {
                list.push_back(io::measure_to_json(sf::eof_2q(ab)));
            } else {
                sf::EofOptions opt;
                opt.seed = cfg.seed;
                list.push_back(io::measure_to_json(sf::eof_numeric(ab, opt, cfg.caps)));
            }
        } else if (n == "esq") {
            if (s.subsystems() != 3) {
                throw io::InputError("measures: esq needs an ABE state");
            }
            // Dephasing Eve keeps tr_E unchanged, so the result is still an
            // extension of rho_AB.
            list.push_back(io::measure_to_json(sf::esq_classical_extension_bound(sf::dephase(s, 2))));
        } else if (n == "er") {
            sf::RelEntOptions opt;
            opt.seed = cfg.seed;
            list.push_back(io::measure_to_json(sf::rel_ent_upper(ab, opt, cfg.caps)));
        } else if (n == "neg") {
            list.push_back(io::measure_to_json(sf::negativity_log(ab)));
        } else if (n == "ed") {
            list.push_back(io::measure_to_json(sf::hashing_lower_bound(ab)));
        } else {
            throw io::InputError("measures: unknown measure \"" + n + "\" (ef, esq, er, neg, ed)");
        }
    }
    emit(cfg, envelope(cfg, "measures", std::move(list)));
    return kExitOk;
}

int cmd_chain(RunConfig &cfg, const std::string &dist, const std::string &phases) {
    const auto d = load_dist(cfg, dist);
    const auto ph = load_phases(cfg, phases, d);
    const auto rep = sf::verify_chain(d, ph, cfg.chain(), cfg.caps);
    emit(cfg, envelope(cfg, "chain", io::chain_to_json(rep)));
    return rep.all_pass() ? kExitOk : kExitProperty;
}

int cmd_dequantize_check(RunConfig &cfg, const std::string &tree_path, const std::string &dist,
                         std::size_t n) {
    const auto tree = io::tree_from_json(load(cfg, tree_path));
    const auto d = load_dist(cfg, dist);
    if (n == 0) {
        throw io::InputError("dequantize-check: --n must be positive");
    }
    const double dev = sf::verify_equivalence(tree, d, n, cfg.caps);
    const double tol = cfg.tol.at("dequantize");
    const auto proto = sf::dequantize(tree);
    Json j{{"n", n},
           {"rounds", tree.rounds},
           {"histories", tree.histories().size()},
           {"kernel_stochastic_defect", proto.stochastic_defect()},
           {"max_deviation", dev},
           {"tol", tol},
           {"pass", dev <= tol}};
    emit(cfg, envelope(cfg, "dequantize-check", std::move(j)));
    return dev <= tol ? kExitOk : kExitProperty;
}

// -------------------------------------------------------------- reproduce

struct Items {
    Json list = Json::array();
    Json info = Json::array();
    bool all = true;

    void check(const std::string &name, double computed, std::optional<double> reference,
               double tol, bool pass, const std::string &source) {
        all = all && pass;
        Json e{{"item", name}, {"computed", computed}};
        e["reference"] = reference ? Json(*reference) : Json(nullptr);
        e["reference_source"] = source;
        e["tol"] = tol;
        e["pass"] = pass;
        list.push_back(std::move(e));
    }
    void near(const std::string &name, double computed, double reference, double tol,
              const std::string &source) {
        check(name, computed, reference, tol, std::abs(computed - reference) <= tol, source);
    }
    void flag(const std::string &id, const std::string &text, Json values = Json::object()) {
        info.push_back({{"id", id}, {"note", text}, {"values", std::move(values)}});
    }
    Json done(Json extra = Json::object()) {
        Json j = std::move(extra);
        j["items"] = std::move(list);
        j["informational"] = std::move(info);
        j["all_pass"] = all;
        return j;
    }
};

sf::QState rho_ab(const sf::Dist3 &d, const sf::PhaseAssignment &ph = {}) {
    return sf::reduced(sf::embed_qqq(d, ph), {0, 1});
}

Json reproduce_thm6a(const RunConfig &cfg, double lam, Items &it) {
    if (!(lam >= 0.0 && lam <= 0.5)) {
        throw io::InputError("reproduce thm6a: --lambda must lie in [0, 1/2]");
    }
    const double exact = cfg.tol.at("exact");
    const auto d = inst::eve_advantage(lam);
    const double kd = sf::kd_class(d).value;
    it.near("K_D", kd, (1.0 + sf::binary_entropy(lam)) / 2.0, exact, "closed form (1+h(lambda))/2");
    const auto ef = sf::eof_2q(rho_ab(d));
    const double c = sf::concurrence_2q(rho_ab(d)).value;
    it.near("concurrence", c, std::min(1.0, 0.5 + std::sqrt(lam * (1.0 - lam))), 1e-9,
            "1/2 + sqrt(lambda(1-lambda))");
    if (lam > 0.0 && lam < 0.5) {
        it.check("K_D - E_F", kd - ef.value, std::nullopt, exact, kd - ef.value > exact,
                 "strictly positive");
    } else if (lam == 0.5) {
        it.near("E_F", ef.value, 1.0, 1e-6, "one ebit at lambda = 1/2");
    }
    const auto adv = sf::advantage_report(d, {}, cfg.chain(), cfg.caps);
    if (lam > 0.0 && lam < 0.5) {
        it.check("direction", adv.gap, std::nullopt, adv.tol, adv.direction == "eve-advantage",
                 "eve-advantage expected");
    }
    const double printed_c = 1.0 + std::sqrt(lam * (1.0 - lam));
    const double radicand = 1.0 - printed_c * printed_c;
    it.flag("ef-formula",
            "the printed E_F expression uses 1 + sqrt(lambda(1-lambda)) as the concurrence, "
            "giving a negative radicand for lambda > 0; the concurrence of rho_AB is 1/2 + sqrt(lambda(1-lambda)) and E_F = h((1+sqrt(1-C^2))/2)",
            {{"printed_radicand", radicand}, {"E_F", ef.value}});
    return Json{{"lambda", lam},
                {"K_D", kd},
                {"E_F", ef.value},
                {"gap_per_copy", kd - ef.value},
                {"direction", adv.direction}};
}

Json reproduce_thm6b(const RunConfig &cfg, Items &it) {
    const auto d = inst::ab_advantage();
    const double ixy = sf::cond_mutual_info(d, {sf::X}, {sf::Y}, {});
    const double sb = sf::von_neumann_entropy(sf::reduced(sf::embed_qqq(d), {1}));
    it.near("I_XY", ixy, 0.311, 1e-3, "printed approximate value");
    it.near("S_B", sb, sf::binary_entropy((1.0 + 1.0 / std::numbers::sqrt2) / 2.0), 1e-9,
            "eigenvalues (1 +- 1/sqrt2)/2");
    const auto adv = sf::advantage_report(d, {}, cfg.chain(), cfg.caps);
    it.check("gap", sb - ixy, std::nullopt, adv.tol, adv.direction == "ab-advantage" && sb > ixy,
             "ab-advantage expected");
    it.flag("one-minus-h-third",
            "the text quotes 1-h(1/3) for the classical rate; the distribution gives "
            "I(X:Y) = h(1/4) - 1/2",
            {{"one_minus_h_third", 1.0 - sf::binary_entropy(1.0 / 3.0)}, {"I_XY", ixy}});
    return Json{{"I_XY", ixy}, {"S_B", sb}, {"direction", adv.direction}};
}

Json reproduce_lemma(const RunConfig &cfg, Items &it) {
    const double exact = cfg.tol.at("exact");
    const auto rep = sf::lemma_example_rates();
    for (const auto &r : rep.rows) {
        it.near(r.embedding + "_bound", r.bound, r.expected, exact, "printed bound");
        it.near(r.embedding + "_protocol", r.protocol, r.expected, exact, "printed bound (tight)");
    }
    if (rep.rows.size() == 3 && std::abs(rep.rows[1].bound - rep.rows[1].expected) > exact) {
        it.flag("cqq-state",
                "dephasing Alice on (|+2>+|-3>) leaves a classically correlated block, so the "
                "cqq extension bound on the dephased state is 1; the printed cqq state gives 2/3",
                {{"bound", rep.rows[1].bound}, {"printed_bound", rep.rows[1].printed_bound}});
    }
    return io::lemma_to_json(rep);
}

Json reproduce_thm7d(const RunConfig &cfg, Items &it) {
    const auto d = inst::two_block_copies();
    const auto opt = cfg.chain();
    const auto rep = sf::verify_chain(d, {}, opt, cfg.caps);
    it.check("UBI", rep.classification.ubi == sf::Verdict::yes, 1.0, 0.0,
             rep.classification.ubi == sf::Verdict::yes, "class membership");
    it.check("semi_unambiguous", rep.classification.semi_unambiguous == sf::Verdict::yes, 1.0, 0.0,
             rep.classification.semi_unambiguous == sf::Verdict::yes, "class membership");
    it.near("K_D", rep.kd.value, 1.0, opt.tol, "H(J|Z) = 1");
    for (const char *name : {"H_J_given_Z", "E_sq"}) {
        if (const auto *q = rep.find(name)) {
            it.near(name, q->value, 1.0, opt.tol, "one bit");
        }
    }
    for (const char *name : {"E_F", "E_r"}) {
        if (const auto *q = rep.find(name)) {
            it.near(name, q->value, 1.0, opt.chain_tol, "one bit (optimizer band)");
        }
    }
    it.check("orderings", rep.all_pass(), 1.0, opt.chain_tol, rep.all_pass(), "all chain checks");
    return io::chain_to_json(rep);
}

Json reproduce_table1(const RunConfig &cfg, Items &it) {
    // K_D(p) vs K_D(rho_ccc): construction equivalence on random trees.
    std::mt19937_64 rng(cfg.seed);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> v(8);
        double s = 0.0;
        for (auto &e : v) s += (e = u(rng));
        for (auto &e : v) e /= s;
        const sf::Dist3 d(2, 2, 2, v, 1e-9);
        worst = std::max(worst, sf::verify_equivalence(sf::random_tree(rng, 2, 2), d, 1, cfg.caps));
    }
    it.check("ccc_equivalence", worst, 0.0, cfg.tol.at("dequantize"),
             worst <= cfg.tol.at("dequantize"), "dequantized protocol reproduces the output");
    // K_D(p) vs K_D(Psi_qqq): both directions.
    const auto opt = cfg.chain();
    const auto eve = sf::advantage_report(inst::eve_advantage(0.25), {}, opt, cfg.caps);
    const auto ab = sf::advantage_report(inst::ab_advantage(), {}, opt, cfg.caps);
    it.check("eve_advantage", eve.gap, std::nullopt, eve.tol, eve.direction == "eve-advantage",
             "classical rate above the quantum upper bound");
    it.check("ab_advantage", ab.gap, std::nullopt, ab.tol, ab.direction == "ab-advantage",
             "quantum lower bound above the classical rate");
    // ccq <= cqq <= qqq.
    const auto lemma = sf::lemma_example_rates();
    const auto &r = lemma.rows;
    const bool ordered = r.size() == 3 && r[2].protocol <= r[1].protocol + opt.tol &&
                         r[1].protocol <= r[0].protocol + opt.tol &&
                         r[1].protocol < r[0].protocol && r[2].protocol < r[1].protocol;
    it.check("ccq<cqq<qqq", ordered, 1.0, opt.tol, ordered, "strict protocol-rate ordering");
    return Json{{"ccc_worst_deviation", worst},
                {"eve_advantage", io::advantage_to_json(eve)},
                {"ab_advantage", io::advantage_to_json(ab)},
                {"lemma", io::lemma_to_json(lemma)}};
}

Json reproduce_table2(const RunConfig &cfg, Items &it) {
    const auto opt = cfg.chain();
    Json rows = Json::array();
    const std::vector<std::pair<std::string, sf::Dist3>> cases = {
        {"ubi_pd_down (split Eve symbol)", inst::split_eve_symbol(0.3)},
        {"ubi_pd (lambda = 1/4)", inst::eve_advantage(0.25)},
        {"ubi_pd + semi-unambiguous", inst::two_block_copies()},
    };
    for (const auto &[label, d] : cases) {
        const auto rep = sf::verify_chain(d, {}, opt, cfg.caps);
        it.check(label, rep.all_pass(), 1.0, opt.chain_tol, rep.all_pass() && !rep.orderings.empty(),
                 "all orderings of the row hold");
        rows.push_back({{"case", label}, {"chain", io::chain_to_json(rep)}});
    }
    return Json{{"rows", std::move(rows)}};
}

int cmd_reproduce(RunConfig &cfg, const std::string &id, double lambda) {
    Items it;
    Json body;
    if (id == "thm6a") {
        body = reproduce_thm6a(cfg, lambda, it);
    } else if (id == "thm6b") {
        body = reproduce_thm6b(cfg, it);
    } else if (id == "lemma") {
        body = reproduce_lemma(cfg, it);
    } else if (id == "thm7d") {
        body = reproduce_thm7d(cfg, it);
    } else if (id == "table1") {
        body = reproduce_table1(cfg, it);
    } else if (id == "table2") {
        body = reproduce_table2(cfg, it);
    } else {
        throw io::InputError("reproduce: unknown id \"" + id +
                             "\" (thm6a, thm6b, lemma, thm7d, table1, table2)");
    }
    const bool pass = it.all;
    Json j{{"id", id}, {"computed", std::move(body)}};
    j.update(it.done());
    emit(cfg, envelope(cfg, "reproduce " + id, std::move(j)));
    return pass ? kExitOk : kExitProperty;
}

// ------------------------------------------------------------------ main

/// Pulls `--tol.<name> value` and `--tol.<name>=value` out of argv.
std::vector<std::string> extract_tolerances(int argc, char **argv, RunConfig &cfg) {
    std::vector<std::string> rest;
    for (int i = 0; i < argc; ++i) {
        std::string a = argv[i];
        if (a.rfind("--tol.", 0) != 0) {
            rest.push_back(a);
            continue;
        }
        std::string name = a.substr(6), value;
        if (auto eq = name.find('='); eq != std::string::npos) {
            value = name.substr(eq + 1);
            name = name.substr(0, eq);
        } else if (i + 1 < argc) {
            value = argv[++i];
        } else {
            throw io::InputError("missing value for " + a);
        }
        if (!cfg.tol.contains(name)) {
            throw io::InputError("unknown tolerance \"" + name + "\"");
        }
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception &) {
            throw io::InputError("tolerance " + name + " is not a number: " + value);
        }
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw io::InputError("tolerance " + name + " must be positive");
        }
        cfg.tol[name] = v;
    }
    return rest;
}

int run(int argc, char **argv) {
    RunConfig cfg;
    auto args = extract_tolerances(argc, argv, cfg);

    CLI::App app{"secrecy-forge: classical and quantum secret-key rates of tripartite distributions"};
    app.set_version_flag("--version", sf::kVersion);
    app.require_subcommand(1);
    app.add_option("--seed", cfg.seed, "Seed for the randomized optimizers")->default_val(0);
    app.add_option("--jobs", cfg.jobs, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", cfg.out, "Write the report here instead of stdout");
    app.footer("Tolerances: --tol.<name> <value> with name in validation, entropy, exact, chain, "
               "dequantize, state.\nExit codes: 0 ok, 1 property failure, 2 usage or input error.");

    std::string dist, phases, state, tree, kind = "qqq", which, id;
    double lambda = 0.25;
    std::size_t n = 1;

    auto global = [&](CLI::App *sub) {
        sub->add_option("--seed", cfg.seed);
        sub->add_option("--jobs", cfg.jobs)->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out);
    };
    auto *c_classify = app.add_subcommand("classify", "Block-independence classification");
    c_classify->add_option("--dist", dist)->required();
    auto *c_ci = app.add_subcommand("commoninfo", "Common partitions and common information");
    c_ci->add_option("--dist", dist)->required();
    auto *c_kr = app.add_subcommand("keyrate", "Classical key rate and quantum comparison");
    c_kr->add_option("--dist", dist)->required();
    c_kr->add_option("--phases", phases);
    auto *c_embed = app.add_subcommand("embed", "Quantum embedding of a distribution");
    c_embed->add_option("--dist", dist)->required();
    c_embed->add_option("--phases", phases);
    c_embed->add_option("--kind", kind)->check(CLI::IsMember({"qqq", "cqq", "ccq", "ccc"}));
    auto *c_meas = app.add_subcommand("measures", "Entanglement measures of a state");
    c_meas->add_option("--state", state)->required();
    c_meas->add_option("--which", which, "Comma list of ef, esq, er, neg, ed");
    auto *c_chain = app.add_subcommand("chain", "Key-rate versus entanglement chain");
    c_chain->add_option("--dist", dist)->required();
    c_chain->add_option("--phases", phases);
    auto *c_deq = app.add_subcommand("dequantize-check", "Quantum vs dequantized protocol");
    c_deq->add_option("--tree", tree)->required();
    c_deq->add_option("--dist", dist)->required();
    c_deq->add_option("--n", n)->default_val(1);
    auto *c_rep = app.add_subcommand("reproduce", "Reproduce a worked example");
    c_rep->add_option("id", id, "thm6a, thm6b, lemma, thm7d, table1, table2")->required();
    c_rep->add_option("--lambda", lambda)->default_val(0.25);
    for (auto *sub : {c_classify, c_ci, c_kr, c_embed, c_meas, c_chain, c_deq, c_rep}) {
        global(sub);
    }

    std::reverse(args.begin(), args.end());
    try {
        args.pop_back();  // program name
        app.parse(args);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    if (*c_classify) return cmd_classify(cfg, dist);
    if (*c_ci) return cmd_commoninfo(cfg, dist);
    if (*c_kr) return cmd_keyrate(cfg, dist, phases);
    if (*c_embed) return cmd_embed(cfg, dist, phases, kind);
    if (*c_meas) return cmd_measures(cfg, state, which);
    if (*c_chain) return cmd_chain(cfg, dist, phases);
    if (*c_deq) return cmd_dequantize_check(cfg, tree, dist, n);
    return cmd_reproduce(cfg, id, lambda);
}

}  // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const io::InputError &e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::domain_error &e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::length_error &e) {
        std::cerr << "error: size cap exceeded: " << e.what() << "\n";
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kExitInput;
}
