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

/// \file dequantize.hpp
/// Multi-round quantum LOPC protocols on incoherent inputs and their
/// classical equivalents.
///
/// A protocol is an instrument tree: in round k (1-based) Alice acts when k
/// is odd and Bob when k is even, applying the instrument stored under the
/// public history i_<k and broadcasting its outcome. After the last round
/// each party may apply a final channel chosen by the full history. Because
/// the input rho_ccc is diagonal and the operations are local, every branch
/// factorizes into an Alice part depending on x and a Bob part depending on
/// y, which is what dequantize() turns into message kernels.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "secrecy_forge/config.hpp"
#include "secrecy_forge/dist.hpp"
#include "secrecy_forge/qlinalg.hpp"

namespace secrecy_forge {

using KrausList = std::vector<CMat>;
using History = std::vector<std::size_t>;

/// One operation per outcome, each given by its Kraus operators.
struct Instrument {
    std::vector<KrausList> outcomes;

    std::size_t size() const noexcept { return outcomes.size(); }

    /// Deviation of sum_{m,j} K^dag K from the identity.
    double tp_defect() const {
        if (outcomes.empty() || outcomes.front().empty()) {
            return std::numeric_limits<double>::infinity();
        }
        const auto n = outcomes.front().front().cols();
        CMat sum = CMat::Zero(n, n);
        for (const auto &ks : outcomes) {
            for (const auto &k : ks) {
                if (k.cols() != n) {
                    return std::numeric_limits<double>::infinity();
                }
                sum += k.adjoint() * k;
            }
        }
        return (sum - CMat::Identity(n, n)).cwiseAbs().maxCoeff();
    }

    static Instrument trivial(std::size_t dim) {
        const auto n = static_cast<Eigen::Index>(dim);
        return {{{CMat::Identity(n, n)}}};
    }

    /// Projective measurement in the computational basis.
    static Instrument computational(std::size_t dim) {
        Instrument ins;
        const auto n = static_cast<Eigen::Index>(dim);
        for (Eigen::Index m = 0; m < n; ++m) {
            CMat p = CMat::Zero(n, n);
            p(m, m) = 1.0;
            ins.outcomes.push_back({p});
        }
        return ins;
    }
};

inline double channel_tp_defect(const KrausList &ks) {
    if (ks.empty()) {
        return std::numeric_limits<double>::infinity();
    }
    const auto n = ks.front().cols();
    CMat sum = CMat::Zero(n, n);
    for (const auto &k : ks) {
        if (k.cols() != n) {
            return std::numeric_limits<double>::infinity();
        }
        sum += k.adjoint() * k;
    }
    return (sum - CMat::Identity(n, n)).cwiseAbs().maxCoeff();
}

struct InstrumentTree {
    std::size_t rounds = 0;
    std::size_t dim_a = 1, dim_b = 1;  ///< local input dimensions (dx^n, dy^n)
    std::size_t out_a = 1, out_b = 1;  ///< output alphabets of A', B'
    std::map<History, Instrument> nodes;
    /// Final channels per full history (out x dim Kraus operators); absent
    /// means identity, which requires out == dim.
    std::map<History, KrausList> leaf_a, leaf_b;

    static bool alice_round(std::size_t k) { return k % 2 == 1; }

    /// Every full history in lexicographic order. Throws if a node on some
    /// path is missing.
    std::vector<History> histories() const {
        std::vector<History> out;
        History h;
        std::function<void()> rec = [&]() {
            if (h.size() == rounds) {
                out.push_back(h);
                return;
            }
            auto it = nodes.find(h);
            if (it == nodes.end()) {
                throw std::invalid_argument("InstrumentTree: missing node at history " +
                                            to_string(h));
            }
            for (std::size_t m = 0; m < it->second.size(); ++m) {
                h.push_back(m);
                rec();
                h.pop_back();
            }
        };
        rec();
        return out;
    }

    void validate(double tol = 1e-10) const {
        if (rounds % 2 != 0) {
            throw std::invalid_argument("InstrumentTree: round count must be even");
        }
        for (const auto &[h, ins] : nodes) {
            if (h.size() >= rounds) {
                throw std::invalid_argument("InstrumentTree: node deeper than the round count");
            }
            const std::size_t dim = alice_round(h.size() + 1) ? dim_a : dim_b;
            for (const auto &ks : ins.outcomes) {
                if (ks.empty()) {
                    throw std::invalid_argument("InstrumentTree: outcome without Kraus operators");
                }
                for (const auto &k : ks) {
                    if (static_cast<std::size_t>(k.rows()) != dim ||
                        static_cast<std::size_t>(k.cols()) != dim) {
                        throw std::invalid_argument("InstrumentTree: Kraus operator at " +
                                                    to_string(h) + " has the wrong shape");
                    }
                }
            }
            if (ins.tp_defect() > tol) {
                throw std::invalid_argument("InstrumentTree: instrument at " + to_string(h) +
                                            " is not trace preserving");
            }
        }
        auto check_leaf = [&](const std::map<History, KrausList> &leaves, std::size_t in,
                              std::size_t out, const char *who) {
            for (const auto &[h, ks] : leaves) {
                for (const auto &k : ks) {
                    if (static_cast<std::size_t>(k.rows()) != out ||
                        static_cast<std::size_t>(k.cols()) != in) {
                        throw std::invalid_argument(std::string("InstrumentTree: ") + who +
                                                    " leaf channel has the wrong shape");
                    }
                }
                if (channel_tp_defect(ks) > tol) {
                    throw std::invalid_argument(std::string("InstrumentTree: ") + who +
                                                " leaf channel is not trace preserving");
                }
            }
        };
        check_leaf(leaf_a, dim_a, out_a, "Alice");
        check_leaf(leaf_b, dim_b, out_b, "Bob");
        for (const auto &h : histories()) {
            if (!leaf_a.count(h) && out_a != dim_a) {
                throw std::invalid_argument("InstrumentTree: Alice leaf missing with out_a != dim_a");
            }
            if (!leaf_b.count(h) && out_b != dim_b) {
                throw std::invalid_argument("InstrumentTree: Bob leaf missing with out_b != dim_b");
            }
        }
    }

    static std::string to_string(const History &h) {
        std::string s = "[";
        for (std::size_t i = 0; i < h.size(); ++i) {
            s += (i ? "," : "") + std::to_string(h[i]);
        }
        return s + "]";
    }

    /// No rounds, identity outputs.
    static InstrumentTree identity(std::size_t dim_a, std::size_t dim_b) {
        InstrumentTree t;
        t.dim_a = t.out_a = dim_a;
        t.dim_b = t.out_b = dim_b;
        return t;
    }

    /// Alice measures in the computational basis and announces the result;
    /// Bob's round is trivial.
    static InstrumentTree computational_measurement(std::size_t dim_a, std::size_t dim_b) {
        auto t = identity(dim_a, dim_b);
        t.rounds = 2;
        t.nodes[{}] = Instrument::computational(dim_a);
        for (std::size_t m = 0; m < dim_a; ++m) {
            t.nodes[{m}] = Instrument::trivial(dim_b);
        }
        return t;
    }

    /// computational_measurement followed by Bob replacing his system with
    /// the announced value, so B' = X.
    static InstrumentTree announce_and_copy(std::size_t dim_a, std::size_t dim_b) {
        auto t = computational_measurement(dim_a, dim_b);
        t.out_b = dim_a;
        for (const auto &h : t.histories()) {
            KrausList ks;
            for (std::size_t j = 0; j < dim_b; ++j) {
                CMat k = CMat::Zero(static_cast<Eigen::Index>(dim_a),
                                    static_cast<Eigen::Index>(dim_b));
                k(static_cast<Eigen::Index>(h[0]), static_cast<Eigen::Index>(j)) = 1.0;
                ks.push_back(k);
            }
            t.leaf_b[h] = std::move(ks);
        }
        return t;
    }
};

namespace detail {

/// Random isometry of shape (blocks * rows) x cols, cut into `blocks`
/// Kraus operators of shape rows x cols.
inline KrausList random_kraus(std::mt19937_64 &rng, std::size_t blocks, std::size_t rows,
                              std::size_t cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    const auto tall = static_cast<Eigen::Index>(blocks * rows);
    const auto c = static_cast<Eigen::Index>(cols);
    CMat m(tall, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m(i) = {g(rng), g(rng)};
    }
    Eigen::HouseholderQR<CMat> qr(m);
    CMat v = qr.householderQ() * CMat::Identity(tall, c);
    KrausList out;
    for (std::size_t b = 0; b < blocks; ++b) {
        out.push_back(v.middleRows(static_cast<Eigen::Index>(b * rows),
                                   static_cast<Eigen::Index>(rows)));
    }
    return out;
}

}  // namespace detail

struct RandomTreeOptions {
    std::size_t rounds = 2;
    std::size_t max_outcomes = 2;
    std::size_t max_kraus = 3;  ///< Kraus operators per instrument before partitioning
    std::size_t max_out = 2;    ///< output alphabet bound for A', B'
    bool leaves = true;
};

/// Random tree whose instruments are random isometries split into Kraus
/// operators and randomly grouped into outcomes, so trace preservation holds
/// by construction.
inline InstrumentTree random_tree(std::mt19937_64 &rng, std::size_t dim_a, std::size_t dim_b,
                                  const RandomTreeOptions &opt = {}) {
    InstrumentTree t;
    t.rounds = opt.rounds;
    t.dim_a = dim_a;
    t.dim_b = dim_b;
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, std::max(lo, hi))(rng);
    };
    t.out_a = opt.leaves ? pick(1, opt.max_out) : dim_a;
    t.out_b = opt.leaves ? pick(1, opt.max_out) : dim_b;
    History h;
    std::function<void()> rec = [&]() {
        if (h.size() == t.rounds) {
            if (opt.leaves) {
                // An isometry needs blocks * out >= dim.
                auto blocks = [&](std::size_t out, std::size_t dim) {
                    return std::max(pick(1, opt.max_kraus), (dim + out - 1) / out);
                };
                t.leaf_a[h] = detail::random_kraus(rng, blocks(t.out_a, dim_a), t.out_a, dim_a);
                t.leaf_b[h] = detail::random_kraus(rng, blocks(t.out_b, dim_b), t.out_b, dim_b);
            }
            return;
        }
        const std::size_t dim = InstrumentTree::alice_round(h.size() + 1) ? dim_a : dim_b;
        const std::size_t outcomes = pick(1, opt.max_outcomes);
        const std::size_t nk = pick(outcomes, std::max(outcomes, opt.max_kraus));
        auto ks = detail::random_kraus(rng, nk, dim, dim);
        std::shuffle(ks.begin(), ks.end(), rng);
        Instrument ins;
        ins.outcomes.resize(outcomes);
        for (std::size_t i = 0; i < nk; ++i) {
            // The first `outcomes` operators seed one outcome each.
            const std::size_t m = i < outcomes ? i : pick(0, outcomes - 1);
            ins.outcomes[m].push_back(std::move(ks[i]));
        }
        t.nodes[h] = std::move(ins);
        for (std::size_t m = 0; m < outcomes; ++m) {
            h.push_back(m);
            rec();
            h.pop_back();
        }
    };
    rec();
    return t;
}

/// Message kernels Pr[i_k | i_<k, local symbol] and final local kernels
/// Pr[x' | i_<=r, x], Pr[y' | i_<=r, y]; all rows stochastic.
struct ClassicalProtocol {
    std::size_t rounds = 0;
    std::size_t dim_a = 1, dim_b = 1, out_a = 1, out_b = 1;
    std::map<History, std::vector<std::vector<double>>> kernels;
    std::map<History, std::vector<std::vector<double>>> final_a, final_b;

    std::vector<History> histories() const {
        std::vector<History> out;
        History h;
        std::function<void()> rec = [&]() {
            if (h.size() == rounds) {
                out.push_back(h);
                return;
            }
            const auto &k = kernels.at(h);
            for (std::size_t m = 0; m < k.front().size(); ++m) {
                h.push_back(m);
                rec();
                h.pop_back();
            }
        };
        rec();
        return out;
    }

    /// Largest |row sum - 1| or negative entry over all kernels.
    double stochastic_defect() const {
        double worst = 0.0;
        auto scan = [&](const auto &m) {
            for (const auto &[h, rows] : m) {
                for (const auto &row : rows) {
                    double s = 0.0;
                    for (double v : row) {
                        s += v;
                        worst = std::max(worst, -v);
                    }
                    worst = std::max(worst, std::abs(s - 1.0));
                }
            }
        };
        scan(kernels);
        scan(final_a);
        scan(final_b);
        return worst;
    }
};

namespace detail {

inline CMat apply_kraus(const KrausList &ks, const CMat &rho) {
    CMat out = CMat::Zero(ks.front().rows(), ks.front().rows());
    for (const auto &k : ks) {
        out += k * rho * k.adjoint();
    }
    return out;
}

/// K (x) I_right or I_left (x) K (x) I_right lifted to the joint space.
inline KrausList lift(const KrausList &ks, std::size_t left, std::size_t right) {
    KrausList out;
    const auto l = static_cast<Eigen::Index>(left), r = static_cast<Eigen::Index>(right);
    for (const auto &k : ks) {
        out.push_back(kron(kron(CMat::Identity(l, l), k), CMat::Identity(r, r)));
    }
    return out;
}

inline std::vector<double> uniform_row(std::size_t n) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

}  // namespace detail

/// Runs the tree on rho_ccc^{(x)n}. The result lives on [out_a, out_b, dz^n,
/// #histories], with the history register classical and histories in
/// lexicographic order.
inline QState simulate_quantum(const InstrumentTree &tree, const Dist3 &d, std::size_t n,
                               const Caps &caps = default_caps()) {
    tree.validate();
    const auto dn = product_power(d, n, caps);
    if (tree.dim_a != dn.dx() || tree.dim_b != dn.dy()) {
        throw std::invalid_argument("simulate_quantum: tree dims do not match the n-copy input");
    }
    const std::size_t da = dn.dx(), db = dn.dy(), dz = dn.dz();
    const auto hist = tree.histories();
    const std::size_t joint = da * db * dz;
    const std::size_t out_block = tree.out_a * tree.out_b * dz;
    detail::check_dim_cap(out_block * hist.size(), caps);
    if (hist.size() * joint * joint > caps.branch_terms) {
        throw std::length_error("simulate_quantum: dense branch sum exceeds cap branch_terms");
    }
    const auto nh = static_cast<Eigen::Index>(hist.size());
    const auto nb = static_cast<Eigen::Index>(out_block);
    CMat out = CMat::Zero(nb * nh, nb * nh);
    CMat rho0 = CMat::Zero(static_cast<Eigen::Index>(joint), static_cast<Eigen::Index>(joint));
    for (std::size_t i = 0; i < joint; ++i) {
        rho0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = dn.pmf()[i];
    }
    Eigen::Index leaf_index = 0;
    History h;
    std::function<void(const CMat &)> rec = [&](const CMat &rho) {
        if (h.size() == tree.rounds) {
            CMat s = rho;
            std::size_t a = da;
            if (auto it = tree.leaf_a.find(h); it != tree.leaf_a.end()) {
                s = detail::apply_kraus(detail::lift(it->second, 1, db * dz), s);
                a = tree.out_a;
            }
            if (auto it = tree.leaf_b.find(h); it != tree.leaf_b.end()) {
                s = detail::apply_kraus(detail::lift(it->second, a, dz), s);
            }
            // Block for this history: index (block_index * nh + leaf_index).
            for (Eigen::Index i = 0; i < nb; ++i) {
                for (Eigen::Index j = 0; j < nb; ++j) {
                    out(i * nh + leaf_index, j * nh + leaf_index) = s(i, j);
                }
            }
            ++leaf_index;
            return;
        }
        const auto &ins = tree.nodes.at(h);
        const bool alice = InstrumentTree::alice_round(h.size() + 1);
        for (std::size_t m = 0; m < ins.size(); ++m) {
            const auto lifted = alice ? detail::lift(ins.outcomes[m], 1, db * dz)
                                      : detail::lift(ins.outcomes[m], da, dz);
            h.push_back(m);
            rec(detail::apply_kraus(lifted, rho));
            h.pop_back();
        }
    };
    rec(rho0);
    return QState::unchecked({tree.out_a, tree.out_b, dz, hist.size()}, std::move(out));
}

/// Dephases A' and B' in the computational basis.
inline QState dephase_output(const QState &s) {
    const std::size_t ab[] = {0, 1};
    return dephase(s, ab);
}

/// The classical protocol reproducing the dephased output of `tree` on
/// incoherent inputs. Kernels on unreachable histories are uniform.
inline ClassicalProtocol dequantize(const InstrumentTree &tree) {
    tree.validate();
    ClassicalProtocol p;
    p.rounds = tree.rounds;
    p.dim_a = tree.dim_a;
    p.dim_b = tree.dim_b;
    p.out_a = tree.out_a;
    p.out_b = tree.out_b;
    auto basis_states = [](std::size_t dim) {
        std::vector<CMat> v;
        const auto n = static_cast<Eigen::Index>(dim);
        for (Eigen::Index i = 0; i < n; ++i) {
            CMat e = CMat::Zero(n, n);
            e(i, i) = 1.0;
            v.push_back(e);
        }
        return v;
    };
    // Unnormalized local operators A^{(i<=k)}(|x><x|) and B^{(i<=k)}(|y><y|).
    History h;
    std::function<void(const std::vector<CMat> &, const std::vector<CMat> &)> rec =
        [&](const std::vector<CMat> &sa, const std::vector<CMat> &sb) {
            if (h.size() == tree.rounds) {
                auto finals = [&](const std::vector<CMat> &ops,
                                  const std::map<History, KrausList> &leaves, std::size_t out) {
                    std::vector<std::vector<double>> rows;
                    const auto it = leaves.find(h);
                    for (const auto &op : ops) {
                        const CMat fin = it != leaves.end() ? detail::apply_kraus(it->second, op)
                                                            : op;
                        const double tr = fin.trace().real();
                        if (tr <= 1e-300) {
                            rows.push_back(detail::uniform_row(out));
                            continue;
                        }
                        std::vector<double> row(out);
                        for (std::size_t j = 0; j < out; ++j) {
                            const auto jj = static_cast<Eigen::Index>(j);
                            row[j] = std::max(0.0, fin(jj, jj).real()) / tr;
                        }
                        rows.push_back(std::move(row));
                    }
                    return rows;
                };
                p.final_a[h] = finals(sa, tree.leaf_a, tree.out_a);
                p.final_b[h] = finals(sb, tree.leaf_b, tree.out_b);
                return;
            }
            const auto &ins = tree.nodes.at(h);
            const bool alice = InstrumentTree::alice_round(h.size() + 1);
            const auto &own = alice ? sa : sb;
            std::vector<std::vector<CMat>> next(ins.size());
            std::vector<std::vector<double>> rows(own.size(), std::vector<double>(ins.size()));
            for (std::size_t s = 0; s < own.size(); ++s) {
                const double denom = own[s].trace().real();
                for (std::size_t m = 0; m < ins.size(); ++m) {
                    next[m].push_back(detail::apply_kraus(ins.outcomes[m], own[s]));
                    rows[s][m] = denom > 1e-300 ? next[m].back().trace().real() / denom : 0.0;
                }
                if (denom <= 1e-300) {
                    rows[s] = detail::uniform_row(ins.size());
                }
            }
            p.kernels[h] = std::move(rows);
            for (std::size_t m = 0; m < ins.size(); ++m) {
                h.push_back(m);
                if (alice) {
                    rec(next[m], sb);
                } else {
                    rec(sa, next[m]);
                }
                h.pop_back();
            }
        };
    rec(basis_states(tree.dim_a), basis_states(tree.dim_b));
    return p;
}

/// Forward evaluation of a classical protocol on p^n; diagonal output on
/// [out_a, out_b, dz^n, #histories].
inline QState simulate_classical(const ClassicalProtocol &proto, const Dist3 &d, std::size_t n,
                                 const Caps &caps = default_caps()) {
    const auto dn = product_power(d, n, caps);
    if (proto.dim_a != dn.dx() || proto.dim_b != dn.dy()) {
        throw std::invalid_argument("simulate_classical: protocol dims do not match the input");
    }
    const std::size_t da = dn.dx(), db = dn.dy(), dz = dn.dz();
    const auto hist = proto.histories();
    const std::size_t nh = hist.size();
    const std::size_t total = proto.out_a * proto.out_b * dz * nh;
    detail::check_dim_cap(total, caps);
    std::vector<double> diag(total, 0.0);
    for (std::size_t hi = 0; hi < nh; ++hi) {
        const auto &h = hist[hi];
        // Pr[h | x] and Pr[h | y] as products of the kernels of each party.
        std::vector<double> wa(da, 1.0), wb(db, 1.0);
        History prefix;
        for (std::size_t k = 1; k <= proto.rounds; ++k) {
            const auto &rows = proto.kernels.at(prefix);
            auto &w = InstrumentTree::alice_round(k) ? wa : wb;
            for (std::size_t s = 0; s < w.size(); ++s) {
                w[s] *= rows[s][h[k - 1]];
            }
            prefix.push_back(h[k - 1]);
        }
        const auto &fa = proto.final_a.at(h);
        const auto &fb = proto.final_b.at(h);
        for (std::size_t x = 0; x < da; ++x) {
            for (std::size_t y = 0; y < db; ++y) {
                for (std::size_t z = 0; z < dz; ++z) {
                    const double p = dn(x, y, z) * wa[x] * wb[y];
                    if (p == 0.0) {
                        continue;
                    }
                    for (std::size_t xo = 0; xo < proto.out_a; ++xo) {
                        for (std::size_t yo = 0; yo < proto.out_b; ++yo) {
                            diag[((xo * proto.out_b + yo) * dz + z) * nh + hi] +=
                                p * fa[x][xo] * fb[y][yo];
                        }
                    }
                }
            }
        }
    }
    const auto t = static_cast<Eigen::Index>(total);
    CMat rho = CMat::Zero(t, t);
    for (Eigen::Index i = 0; i < t; ++i) {
        rho(i, i) = diag[static_cast<std::size_t>(i)];
    }
    return QState::unchecked({proto.out_a, proto.out_b, dz, nh}, std::move(rho));
}

/// Trace distance between the dephased quantum output and the output of the
/// dequantized classical protocol.
inline double verify_equivalence(const InstrumentTree &tree, const Dist3 &d, std::size_t n,
                                 const Caps &caps = default_caps()) {
    const auto q = dephase_output(simulate_quantum(tree, d, n, caps));
    const auto c = simulate_classical(dequantize(tree), d, n, caps);
    return trace_distance(q, c);
}

}  // namespace secrecy_forge
