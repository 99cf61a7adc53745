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

/// \file keyrate.hpp
/// Secret key rates of classical distributions where the block structure
/// pins them, bounds elsewhere, and the comparison of those rates with the
/// entanglement of the coherent embedding.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "secrecy_forge/classify.hpp"
#include "secrecy_forge/common_info.hpp"
#include "secrecy_forge/dist.hpp"
#include "secrecy_forge/embed.hpp"
#include "secrecy_forge/entangle.hpp"
#include "secrecy_forge/instances.hpp"
#include "secrecy_forge/qlinalg.hpp"

namespace secrecy_forge {

/// Phi_r: r bits of perfectly shared randomness, (1/s) sum_i |ii><ii| with s = 2^r.
struct TargetKeyState {
    std::size_t r = 1;

    std::size_t size() const { return std::size_t{1} << r; }

    QState state() const {
        const std::size_t s = size();
        const auto n = static_cast<Eigen::Index>(s * s);
        CMat rho = CMat::Zero(n, n);
        for (std::size_t i = 0; i < s; ++i) {
            const auto k = static_cast<Eigen::Index>(i * s + i);
            rho(k, k) = 1.0 / static_cast<double>(s);
        }
        return QState::unchecked({s, s}, std::move(rho));
    }
};

/// Interval [max(0, I(X:Y)-I(X:Z), I(X:Y)-I(Y:Z)), min(I(X:Y), I(X:Y|Z))]
/// containing K_D of any distribution.
inline std::pair<double, double> kd_generic_interval(const Dist3 &d) {
    const double ixy = cond_mutual_info(d, {X}, {Y}, {});
    const double ixz = cond_mutual_info(d, {X}, {Z}, {});
    const double iyz = cond_mutual_info(d, {Y}, {Z}, {});
    const double ixy_z = cond_mutual_info(d, {X}, {Y}, {Z});
    const double lo = std::max({0.0, ixy - ixz, ixy - iyz});
    const double hi = std::max(lo, std::min(ixy, ixy_z));
    return {lo, hi};
}

/// K_D from the block structure: H(J|Z) when UBI-PD, H(J|Zbar) on the
/// certificate channel when only UBI-PD-down holds, otherwise an interval.
inline MeasureResult kd_class(const Dist3 &d, const ClassReport &report) {
    MeasureResult out;
    out.name = "K_D";
    if (report.ubi_pd == Verdict::yes) {
        out.value = cond_common_entropy(d);
        out.kind = MeasureKind::exact;
        out.method = "H(J|Z), UBI-PD";
        return out;
    }
    if (report.ubi_pd_down == Verdict::yes && report.pd_down.found()) {
        out.value = cond_common_entropy(apply_channel_z(d, report.pd_down.channel()));
        out.kind = MeasureKind::exact;
        out.method = "H(J|Zbar) on the certificate channel, UBI-PD-down";
        return out;
    }
    auto iv = kd_generic_interval(d);
    out.value = iv.first;
    out.kind = MeasureKind::inconclusive;
    out.method = "no class formula; one-way lower and intrinsic-information upper bounds";
    out.interval = iv;
    return out;
}

inline MeasureResult kd_class(const Dist3 &d, const ClassifyOptions &opt = {}) {
    return kd_class(d, classify(d, opt));
}

/// K_D = I(X:Y) when Eve's variable is independent of (X,Y).
inline MeasureResult kd_independent_eve(const Dist3 &d, double tol = kEntropyTol) {
    const double leak = cond_mutual_info(d, {X, Y}, {Z}, {});
    if (leak > tol) {
        throw std::invalid_argument("kd_independent_eve: I(XY:Z) = " + std::to_string(leak) +
                                    " exceeds tolerance");
    }
    return {"K_D", cond_mutual_info(d, {X}, {Y}, {}), MeasureKind::exact,
            "I(X:Y), Eve independent", std::nullopt, std::nullopt};
}

struct ChainOptions {
    std::uint64_t seed = 0;
    double tol = 1e-9;         ///< for exact quantities
    double chain_tol = 2e-2;   ///< for optimizer upper bounds
    std::size_t eof_restarts = 32;
    std::size_t relent_restarts = 8;
    ClassifyOptions classify;
};

/// One checked inequality or equality between two named quantities.
struct Ordering {
    std::string lhs;
    std::string relation;  ///< ">=" or "=="
    std::string rhs;
    double lhs_value = 0.0;
    double rhs_value = 0.0;
    double slack = 0.0;  ///< lhs - rhs for ">=", tol - |lhs - rhs| for "=="
    double tol = 0.0;
    bool pass = false;
    std::string basis;  ///< which structural property licenses the check
};

inline Ordering check_geq(std::string lhs, double a, std::string rhs, double b, double tol,
                          std::string basis) {
    return {std::move(lhs), ">=", std::move(rhs), a, b, a - b, tol, a + tol >= b, std::move(basis)};
}

inline Ordering check_eq(std::string lhs, double a, std::string rhs, double b, double tol,
                         std::string basis) {
    const double s = tol - std::abs(a - b);
    return {std::move(lhs), "==", std::move(rhs), a, b, s, tol, s >= 0.0, std::move(basis)};
}

struct ChainReport {
    ClassReport classification;
    MeasureResult kd;
    std::vector<MeasureResult> quantities;  ///< E_F, E_sq, E_r, H_J_given_Z, ... as available
    std::vector<Ordering> orderings;
    std::optional<std::vector<std::size_t>> certificate;  ///< UBI-PD-down channel
    std::vector<std::string> notes;

    bool all_pass() const {
        return std::all_of(orderings.begin(), orderings.end(),
                           [](const Ordering &o) { return o.pass; });
    }

    const MeasureResult *find(const std::string &name) const {
        for (const auto &q : quantities) {
            if (q.name == name) {
                return &q;
            }
        }
        return nullptr;
    }
};

namespace detail {

inline MeasureResult eof_best(const QState &rho, const ChainOptions &opt, const Caps &caps) {
    if (rho.dims() == std::vector<std::size_t>{2, 2}) {
        return eof_2q(rho);
    }
    EofOptions eo;
    eo.seed = opt.seed;
    eo.restarts = opt.eof_restarts;
    return eof_numeric(rho, eo, caps);
}

inline MeasureResult relent_best(const QState &rho, const ChainOptions &opt, const Caps &caps) {
    RelEntOptions ro;
    ro.seed = opt.seed;
    ro.restarts = opt.relent_restarts;
    return rel_ent_upper(rho, ro, caps);
}

inline double tol_for(const MeasureResult &m, const ChainOptions &opt) {
    return m.kind == MeasureKind::exact ? opt.tol : opt.chain_tol;
}

}  // namespace detail

/// Evaluates the key-rate / entanglement hierarchy on rho^{AB} = tr_E of the
/// coherent embedding and checks the orderings licensed by the class of d.
inline ChainReport verify_chain(const Dist3 &d, const PhaseAssignment &phases = {},
                                const ChainOptions &opt = {},
                                const Caps &caps = default_caps()) {
    ChainReport rep;
    rep.classification = classify(d, opt.classify);
    const auto &cls = rep.classification;
    rep.kd = kd_class(d, cls);
    const bool pd = cls.ubi_pd == Verdict::yes;
    const bool pd_down = cls.ubi_pd_down == Verdict::yes && cls.pd_down.found();
    if (pd_down) {
        rep.certificate = cls.pd_down.assignment;
    }

    const auto rho_ab = partial_trace(QState(embed_qqq(d, phases, caps)), {0, 1});
    const bool optimizable = rho_ab.dim() <= caps.optimizer_dim;

    MeasureResult hjz{"H_J_given_Z", cond_common_entropy(d), MeasureKind::exact, "H(J|Z)",
                      std::nullopt, std::nullopt};
    rep.quantities.push_back(hjz);

    const Channel ch = pd_down ? cls.pd_down.channel() : Channel::identity(d.dz());
    auto esq = esq_classical_extension_bound(extension_sigma(d, phases, ch, caps));
    esq.method += pd_down ? " (certificate channel)" : " (identity channel)";
    rep.quantities.push_back(esq);

    std::optional<MeasureResult> ef, er;
    if (optimizable) {
        ef = detail::eof_best(rho_ab, opt, caps);
        er = detail::relent_best(rho_ab, opt, caps);
        rep.quantities.push_back(*ef);
        rep.quantities.push_back(*er);
    } else {
        rep.notes.push_back("rho_AB dimension " + std::to_string(rho_ab.dim()) +
                            " exceeds optimizer_dim; E_F and E_r skipped");
    }
    rep.quantities.push_back(negativity_log(rho_ab));
    rep.quantities.push_back(hashing_lower_bound(rho_ab));

    if (rep.kd.kind != MeasureKind::exact) {
        rep.notes.push_back("no class formula for K_D; no ordering is licensed");
        return rep;
    }
    const double kd = rep.kd.value;
    if (pd_down) {
        rep.orderings.push_back(
            check_geq("K_D", kd, "E_sq", esq.value, opt.tol, "reversible (UBI-PD-down)"));
    }
    if (pd && ef) {
        rep.orderings.push_back(
            check_geq("K_D", kd, "E_F", ef->value, detail::tol_for(*ef, opt), "UBI-PD"));
    }
    if (pd && cls.semi_unambiguous == Verdict::yes) {
        const std::string basis = "UBI-PD and semi-unambiguous";
        if (ef) {
            rep.orderings.push_back(check_eq("K_D", kd, "E_F", ef->value, opt.chain_tol, basis));
        }
        rep.orderings.push_back(check_eq("K_D", kd, "E_sq", esq.value, opt.chain_tol, basis));
        if (er) {
            rep.orderings.push_back(check_eq("K_D", kd, "E_r", er->value, opt.chain_tol, basis));
        }
        rep.orderings.push_back(
            check_eq("K_D", kd, "H_J_given_Z", hjz.value, opt.chain_tol, basis));
    }
    return rep;
}

struct AdvantageReport {
    MeasureResult kd_classical;
    MeasureResult quantum_lower;  ///< lower bound on K_D(Psi_qqq)
    MeasureResult quantum_upper;  ///< min over the upper-bound candidates
    std::vector<MeasureResult> upper_candidates;
    std::string direction;  ///< eve-advantage | ab-advantage | zero-gap | indeterminate
    double gap = 0.0;       ///< classical minus quantum where pinned, else 0
    double tol = 0.0;
};

/// Compares K_D(p) with bounds on K_D of the coherent embedding. A
/// direction is declared only if it holds strictly after tolerance.
inline AdvantageReport advantage_report(const Dist3 &d, const PhaseAssignment &phases = {},
                                        const ChainOptions &opt = {},
                                        const Caps &caps = default_caps()) {
    AdvantageReport rep;
    rep.tol = opt.tol;
    auto cls = classify(d, opt.classify);
    rep.kd_classical = kd_class(d, cls);
    if (rep.kd_classical.kind != MeasureKind::exact &&
        cond_mutual_info(d, {X, Y}, {Z}, {}) <= opt.classify.tol) {
        rep.kd_classical = kd_independent_eve(d, opt.classify.tol);
    }
    double kd_lo = rep.kd_classical.value, kd_hi = rep.kd_classical.value;
    if (rep.kd_classical.interval) {
        std::tie(kd_lo, kd_hi) = *rep.kd_classical.interval;
    }

    const auto rho_ab = partial_trace(QState(embed_qqq(d, phases, caps)), {0, 1});
    rep.quantum_lower = hashing_lower_bound(rho_ab);

    auto esq = esq_classical_extension_bound(
        extension_sigma(d, phases, Channel::identity(d.dz()), caps));
    rep.upper_candidates.push_back(esq);
    if (rho_ab.dim() <= caps.optimizer_dim) {
        rep.upper_candidates.push_back(detail::eof_best(rho_ab, opt, caps));
        rep.upper_candidates.push_back(detail::relent_best(rho_ab, opt, caps));
    }
    rep.quantum_upper = *std::min_element(
        rep.upper_candidates.begin(), rep.upper_candidates.end(),
        [](const MeasureResult &a, const MeasureResult &b) { return a.value < b.value; });

    const double q_lo = rep.quantum_lower.value, q_hi = rep.quantum_upper.value;
    if (kd_lo > q_hi + opt.tol) {
        rep.direction = "eve-advantage";
        rep.gap = kd_lo - q_hi;
    } else if (q_lo > kd_hi + opt.tol) {
        rep.direction = "ab-advantage";
        rep.gap = kd_hi - q_lo;
    } else if (kd_hi - kd_lo <= opt.tol && q_hi - q_lo <= opt.chain_tol &&
               std::abs(kd_lo - q_lo) <= opt.chain_tol) {
        rep.direction = "zero-gap";
        rep.gap = kd_lo - q_lo;
    } else {
        rep.direction = "indeterminate";
    }
    return rep;
}

struct LemmaRow {
    std::string embedding;       ///< qqq | cqq | ccq
    double bound = 0.0;          ///< extension bound on the embedded state
    double printed_bound = 0.0;  ///< same bound on the state as originally written
    double protocol = 0.0;       ///< rate of the subspace-projection protocol
    double expected = 0.0;       ///< 1, 2/3, 1/3
};

struct LemmaReport {
    std::vector<LemmaRow> rows;
};

namespace detail {

/// sum_z p(z) I(A:B)_{rho_z} for a state classical on its third subsystem,
/// halved when `squashed`.
inline double eve_dephased_bound(const QState &s, bool squashed) {
    double v = 0.0;
    for (const auto &blk : classical_blocks(dephase(s, 2), 2)) {
        if (blk.prob > kSupportEpsilon) {
            v += blk.prob * mutual_info_q(blk.state);
        }
    }
    return squashed ? 0.5 * v : v;
}

/// The three-block example state as originally written: Phi_2 at z=0, a product
/// block at z=1 and (|2+><2+| + |3-><3-|)/2 at z=2, each with weight 1/3.
/// For cqq and ccq the Phi_2 notation denotes classical correlation.
inline QState lemma_printed_state(const std::string &kind) {
    auto ket = [](std::vector<std::pair<std::size_t, cplx>> amps) {
        CVec v = CVec::Zero(4);
        for (auto [i, a] : amps) {
            v(static_cast<Eigen::Index>(i)) = a;
        }
        return v;
    };
    const double r = 1.0 / std::sqrt(2.0);
    CMat rho = CMat::Zero(48, 48);
    auto add = [&](const CVec &a, const CVec &b, std::size_t z, double w) {
        CVec ab = kron(CMat(a), CMat(b));
        CVec e = CVec::Zero(3);
        e(static_cast<Eigen::Index>(z)) = 1.0;
        CVec v = kron(CMat(ab), CMat(e));
        rho += w * v * v.adjoint();
    };
    const CVec k0 = ket({{0, 1}}), k1 = ket({{1, 1}}), k2 = ket({{2, 1}}), k3 = ket({{3, 1}});
    const CVec plus = ket({{0, r}, {1, r}}), minus = ket({{0, r}, {1, -r}});
    // z = 0
    if (kind == "qqq") {
        CVec phi = CVec::Zero(16);
        phi(0) = phi(5) = r;
        CVec e = CVec::Zero(3);
        e(0) = 1.0;
        CVec v = kron(CMat(phi), CMat(e));
        rho += (1.0 / 3.0) * v * v.adjoint();
    } else {
        add(k0, k0, 0, 1.0 / 6.0);
        add(k1, k1, 0, 1.0 / 6.0);
    }
    // z = 1: product of uniform mixtures on {0,1} and {2,3}, except in the
    // coherent case where it is the pure (|+2>+|-3>)/sqrt2.
    if (kind == "qqq") {
        CVec v = r * (kron(CMat(plus), CMat(k2)) + kron(CMat(minus), CMat(k3)));
        CVec e = CVec::Zero(3);
        e(1) = 1.0;
        CVec w = kron(CMat(v), CMat(e));
        rho += (1.0 / 3.0) * w * w.adjoint();
    } else {
        for (const CVec *a : {&k0, &k1}) {
            for (const CVec *b : {&k2, &k3}) {
                add(*a, *b, 1, 1.0 / 12.0);
            }
        }
    }
    // z = 2
    if (kind == "qqq") {
        CVec v = r * (kron(CMat(k2), CMat(plus)) + kron(CMat(k3), CMat(minus)));
        CVec e = CVec::Zero(3);
        e(2) = 1.0;
        CVec w = kron(CMat(v), CMat(e));
        rho += (1.0 / 3.0) * w * w.adjoint();
    } else if (kind == "cqq") {
        add(k2, plus, 2, 1.0 / 6.0);
        add(k3, minus, 2, 1.0 / 6.0);
    } else {
        for (const CVec *a : {&k2, &k3}) {
            for (const CVec *b : {&k0, &k1}) {
                add(*a, *b, 2, 1.0 / 12.0);
            }
        }
    }
    return QState({4, 4, 3}, rho, 1e-9);
}

}  // namespace detail

/// Rate of the subspace-projection protocol on a 4 x 4 x dz state: each
/// party projects onto span{0,1} or span{2,3} and announces which; a party
/// in span{0,1} whose partner landed in span{2,3} measures in the +/- basis,
/// everyone else in the computational basis. Per announcement the rate is
/// max(0, I(a:b) - I(a:E)), which one-way error correction and privacy
/// amplification attain.
inline double subspace_protocol_rate(const QState &s) {
    if (s.subsystems() != 3 || s.dims()[0] != 4 || s.dims()[1] != 4) {
        throw std::invalid_argument("subspace_protocol_rate: need a 4 x 4 x dz state");
    }
    const std::size_t dz = s.dims()[2];
    const double r = 1.0 / std::sqrt(2.0);
    auto basis = [&](std::size_t own, std::size_t other) {
        std::vector<CVec> b(2, CVec::Zero(4));
        if (own == 0 && other == 1) {
            b[0](0) = r;
            b[0](1) = r;
            b[1](0) = r;
            b[1](1) = -r;
        } else {
            b[0](static_cast<Eigen::Index>(2 * own)) = 1.0;
            b[1](static_cast<Eigen::Index>(2 * own + 1)) = 1.0;
        }
        return b;
    };
    const auto n = static_cast<Eigen::Index>(dz);
    double rate = 0.0;
    for (std::size_t sa = 0; sa < 2; ++sa) {
        for (std::size_t sb = 0; sb < 2; ++sb) {
            const auto ba = basis(sa, sb), bb = basis(sb, sa);
            // cq state over (a, b, E) for this announcement.
            CMat cq = CMat::Zero(4 * n, 4 * n);
            double p = 0.0;
            for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t b = 0; b < 2; ++b) {
                    const CMat v = kron(CMat(ba[a]), CMat(bb[b]));  // 16 x 1
                    const CMat proj = kron(v.adjoint(), CMat::Identity(n, n));
                    const CMat eve = proj * s.rho() * proj.adjoint();
                    const auto o = static_cast<Eigen::Index>((a * 2 + b)) * n;
                    cq.block(o, o, n, n) = eve;
                    p += eve.trace().real();
                }
            }
            if (p <= kSupportEpsilon) {
                continue;
            }
            const auto st = QState::unchecked({2, 2, dz}, cq / p);
            const double iab = mutual_info_q(partial_trace(st, {0, 1}));
            const double iae = mutual_info_q(partial_trace(st, {0, 2}));
            rate += p * std::max(0.0, iab - iae);
        }
    }
    return rate;
}

/// Extension bounds and protocol rates for the qqq, cqq and ccq versions of
/// the three-block state. The pure qqq state uses the squashed (halved)
/// bound; cqq and ccq, whose blocks carry classical correlation once Eve
/// measures, use sum_z p(z) I(A:B|Z=z).
inline LemmaReport lemma_example_rates() {
    const auto d = instances::one_sided_gap();
    const auto ph = instances::one_sided_gap_phases();
    const QState qqq(embed_qqq(d, ph));
    const QState cqq = embed_cqq(d, ph);
    const QState ccq = embed_ccq(d, ph);
    LemmaReport rep;
    rep.rows.push_back({"qqq", detail::eve_dephased_bound(qqq, true),
                        detail::eve_dephased_bound(detail::lemma_printed_state("qqq"), true),
                        subspace_protocol_rate(qqq), 1.0});
    rep.rows.push_back({"cqq", detail::eve_dephased_bound(cqq, false),
                        detail::eve_dephased_bound(detail::lemma_printed_state("cqq"), false),
                        subspace_protocol_rate(cqq), 2.0 / 3.0});
    rep.rows.push_back({"ccq", detail::eve_dephased_bound(ccq, false),
                        detail::eve_dephased_bound(detail::lemma_printed_state("ccq"), false),
                        subspace_protocol_rate(ccq), 1.0 / 3.0});
    return rep;
}

}  // namespace secrecy_forge
