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

/// \file classify.hpp
/// Membership tests for the block-independence family of distributions
/// (BI, UBI, UBI-PD, UBI-PD with Eve processing) and the (semi-)unambiguous
/// classes.
///
/// UBI-PD is only ever certified with the canonical public message
/// M = (J_XZ(X), J_YZ(Y)); a failure of that message is reported as
/// inconclusive because other protocols are not explored. UBI-PD-down
/// searches deterministic channels for Eve, enumerated as restricted-growth
/// strings over Z in lexicographic order, and returns the first that passes.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "secrecy_forge/common_info.hpp"
#include "secrecy_forge/config.hpp"
#include "secrecy_forge/dist.hpp"

namespace secrecy_forge {

enum class Verdict { yes, no, inconclusive };

inline const char *to_string(Verdict v) {
    switch (v) {
        case Verdict::yes:
            return "yes";
        case Verdict::no:
            return "no";
        case Verdict::inconclusive:
            return "inconclusive";
    }
    return "?";
}

inline Verdict verdict(bool b) { return b ? Verdict::yes : Verdict::no; }

/// I(X:Y | J_XY|Z, Z).
inline double block_conditional_mi(const Dist3 &d, const CondCommonFunction &ccf) {
    const std::size_t xs[] = {X}, ys[] = {Y}, jz[] = {3, Z};
    return with_block_label(d, ccf).cond_mutual_info(xs, ys, jz);
}

inline bool is_block_independent(const Dist3 &d, double tol = kEntropyTol) {
    return block_conditional_mi(d, conditional_common_function(d)) <= tol;
}

inline bool is_ubi(const Dist3 &d, double tol = kEntropyTol) {
    auto ccf = conditional_common_function(d);
    return ccf.per_z_injective && block_conditional_mi(d, ccf) <= tol;
}

/// H(Z|XY) = 0 on the support: every (x,y) pair occurs with exactly one z.
inline bool is_semi_unambiguous(const Dist3 &d) {
    for (std::size_t x = 0; x < d.dx(); ++x) {
        for (std::size_t y = 0; y < d.dy(); ++y) {
            std::size_t hits = 0;
            for (std::size_t z = 0; z < d.dz(); ++z) {
                hits += d(x, y, z) > kSupportEpsilon;
            }
            if (hits > 1) {
                return false;
            }
        }
    }
    return true;
}

/// H(XY | J_XY|Z, Z).
inline double residual_pair_entropy(const Dist3 &d, const CondCommonFunction &ccf) {
    const std::size_t xy[] = {X, Y}, jz[] = {3, Z};
    return with_block_label(d, ccf).cond_entropy(xy, jz);
}

inline bool is_unambiguous(const Dist3 &d, double tol = kEntropyTol) {
    return is_semi_unambiguous(d) &&
           residual_pair_entropy(d, conditional_common_function(d)) <= tol;
}

/// The canonical public message: Alice announces the block of x in the
/// maximal common partitioning of p_XZ, Bob the block of y in that of p_YZ.
struct CanonicalMessage {
    std::vector<std::optional<std::size_t>> alice;
    std::vector<std::optional<std::size_t>> bob;
    std::size_t alice_count = 0;
    std::size_t bob_count = 0;

    std::size_t value(std::size_t x, std::size_t y) const {
        return alice.at(x).value_or(0) * bob_count + bob.at(y).value_or(0);
    }
    std::size_t count() const { return alice_count * bob_count; }
};

inline CanonicalMessage canonical_message(const Dist3 &d) {
    auto pxz = maximal_common_partition(marginal_pair(d, X, Z));
    auto pyz = maximal_common_partition(marginal_pair(d, Y, Z));
    return {pxz.block_of_x, pyz.block_of_x, pxz.size(), pyz.size()};
}

/// The law of ((M,X), (M,Y), (Z,M)) after the canonical announcement, with
/// each composite alphabet compressed to the tuples that occur (in
/// lexicographic order).
inline Dist3 with_public_message(const Dist3 &d, const CanonicalMessage &msg) {
    using Key = std::pair<std::size_t, std::size_t>;
    std::map<Key, std::size_t> ax, by, cz;
    struct Entry {
        Key a, b, c;
        double p;
    };
    std::vector<Entry> entries;
    for (std::size_t x = 0; x < d.dx(); ++x) {
        for (std::size_t y = 0; y < d.dy(); ++y) {
            for (std::size_t z = 0; z < d.dz(); ++z) {
                double p = d(x, y, z);
                if (p <= 0.0) {
                    continue;
                }
                std::size_t m = msg.value(x, y);
                Entry e{{m, x}, {m, y}, {z, m}, p};
                ax.emplace(e.a, 0);
                by.emplace(e.b, 0);
                cz.emplace(e.c, 0);
                entries.push_back(e);
            }
        }
    }
    auto number = [](auto &m) {
        std::size_t i = 0;
        for (auto &[k, v] : m) {
            v = i++;
        }
        return i;
    };
    const std::size_t dx = number(ax), dy = number(by), dz = number(cz);
    std::vector<double> out(dx * dy * dz, 0.0);
    for (const auto &e : entries) {
        out[(ax[e.a] * dy + by[e.b]) * dz + cz[e.c]] += e.p;
    }
    return Dist3(Pmf::unchecked({dx, dy, dz}, std::move(out)));
}

struct UbiPdResult {
    Verdict verdict = Verdict::no;
    bool block_independent = false;
    bool extended_ubi = false;
    /// I(M : J_XY|Z | Z).
    double message_leak = 0.0;
    CanonicalMessage message;
};

inline UbiPdResult check_ubi_pd(const Dist3 &d, double tol = kEntropyTol) {
    UbiPdResult r;
    auto ccf = conditional_common_function(d);
    r.block_independent = block_conditional_mi(d, ccf) <= tol;
    r.message = canonical_message(d);
    r.extended_ubi = is_ubi(with_public_message(d, r.message), tol);
    const auto &msg = r.message;
    auto law = with_block_label(d, ccf).extend(
        [&](const Outcomes::Row &row) { return msg.value(row[X], row[Y]); });
    const std::size_t m[] = {4}, j[] = {3}, z[] = {Z};
    r.message_leak = law.cond_mutual_info(m, j, z);
    if (!r.block_independent) {
        r.verdict = Verdict::no;
    } else if (r.extended_ubi && r.message_leak <= tol) {
        r.verdict = Verdict::yes;
    } else {
        r.verdict = Verdict::inconclusive;
    }
    return r;
}

inline Verdict is_ubi_pd(const Dist3 &d, double tol = kEntropyTol) {
    return check_ubi_pd(d, tol).verdict;
}

struct PdDownResult {
    /// zbar = assignment[z] for the first passing channel.
    std::optional<std::vector<std::size_t>> assignment;
    std::size_t channels_tested = 0;
    bool budget_exhausted = false;
    /// I(Z : J_XY|Zbar | M, Zbar) for the returned channel.
    double eve_leak = 0.0;

    bool found() const noexcept { return assignment.has_value(); }
    Channel channel() const { return Channel::deterministic(assignment.value()); }
};

namespace detail {

/// Advances a restricted-growth string to its lexicographic successor.
inline bool next_rgs(std::vector<std::size_t> &a) {
    const std::size_t n = a.size();
    for (std::size_t i = n; i-- > 1;) {
        std::size_t prefix_max = 0;
        for (std::size_t k = 0; k < i; ++k) {
            prefix_max = std::max(prefix_max, a[k]);
        }
        if (a[i] <= prefix_max) {
            ++a[i];
            std::fill(a.begin() + static_cast<std::ptrdiff_t>(i) + 1, a.end(), 0);
            return true;
        }
    }
    return false;
}

/// I(Z : J_XY|Zbar | M, Zbar) on the joint law carrying both Z and Zbar.
inline double eve_processing_leak(const Dist3 &d, std::span<const std::size_t> assignment,
                                  const Dist3 &dbar) {
    auto ccf = conditional_common_function(dbar);
    auto msg = canonical_message(dbar);
    auto law = Outcomes::from(d)
                   .extend([&](const Outcomes::Row &r) { return assignment[r[Z]]; })
                   .extend([&](const Outcomes::Row &r) { return msg.value(r[X], r[Y]); })
                   .extend([&](const Outcomes::Row &r) {
                       return ccf.block_at(r[X], r[Y], r[3]).value_or(0);
                   });
    const std::size_t z[] = {Z}, j[] = {5}, mzbar[] = {4, 3};
    return law.cond_mutual_info(z, j, mzbar);
}

}  // namespace detail

/// Searches deterministic channels zbar = f(z) for one making p_XYZbar UBI-PD
/// with I(Z : J_XY|Zbar | M, Zbar) <= tol.
inline PdDownResult is_ubi_pd_down(const Dist3 &d, double tol = kEntropyTol,
                                   std::size_t budget = 4096) {
    PdDownResult r;
    std::vector<std::size_t> f(d.dz(), 0);
    do {
        if (r.channels_tested >= budget) {
            r.budget_exhausted = true;
            return r;
        }
        ++r.channels_tested;
        auto dbar = apply_channel_z(d, Channel::deterministic(f));
        if (is_ubi_pd(dbar, tol) != Verdict::yes) {
            continue;
        }
        double leak = detail::eve_processing_leak(d, f, dbar);
        if (leak <= tol) {
            r.assignment = f;
            r.eve_leak = leak;
            return r;
        }
    } while (detail::next_rgs(f));
    return r;
}

struct ClassifyOptions {
    double tol = kEntropyTol;
    std::size_t budget = 4096;
    /// Run the channel search even when UBI-PD already certifies the
    /// identity channel.
    bool always_search = false;
};

struct ClassReport {
    Verdict bi = Verdict::no;
    Verdict ubi = Verdict::no;
    Verdict ubi_pd = Verdict::no;
    Verdict ubi_pd_down = Verdict::inconclusive;
    Verdict semi_unambiguous = Verdict::no;
    Verdict unambiguous = Verdict::no;

    // Certificates.
    double block_cmi = 0.0;              ///< I(X:Y|J,Z)
    bool per_z_injective = false;
    double label_given_x = 0.0;          ///< H(J|X) under the merge labels
    double label_given_y = 0.0;          ///< H(J|Y) under the merge labels
    UbiPdResult pd;
    PdDownResult pd_down;
    bool pd_down_from_identity = false;  ///< identity certified by UBI-PD, no search run
    bool pd_down_channel_bi = false;     ///< p_XYZbar is BI for the certificate channel
    double z_given_xy = 0.0;             ///< H(Z|XY)
    double residual_xy = 0.0;            ///< H(XY|J,Z)
    ClassifyOptions options;
};

/// Hierarchy nesting violations present in a report (empty when consistent).
inline std::vector<std::string> nesting_violations(const ClassReport &r) {
    std::vector<std::string> v;
    if (r.ubi == Verdict::yes && r.bi != Verdict::yes) {
        v.emplace_back("ubi=yes but bi!=yes");
    }
    if (r.ubi == Verdict::yes && r.ubi_pd != Verdict::yes) {
        v.emplace_back("ubi=yes but ubi_pd!=yes");
    }
    if (r.ubi_pd == Verdict::yes && r.ubi_pd_down != Verdict::yes) {
        v.emplace_back("ubi_pd=yes but ubi_pd_down not found");
    }
    if (r.ubi_pd == Verdict::yes && r.bi != Verdict::yes) {
        v.emplace_back("ubi_pd=yes but bi!=yes");
    }
    if (r.ubi_pd_down == Verdict::yes && !r.pd_down_channel_bi) {
        v.emplace_back("ubi_pd_down=yes but the certificate channel does not give BI");
    }
    if (r.unambiguous == Verdict::yes && r.semi_unambiguous != Verdict::yes) {
        v.emplace_back("unambiguous=yes but semi_unambiguous!=yes");
    }
    return v;
}

inline ClassReport classify(const Dist3 &d, const ClassifyOptions &opt = {}) {
    ClassReport r;
    r.options = opt;
    auto ccf = conditional_common_function(d);
    r.block_cmi = block_conditional_mi(d, ccf);
    r.bi = verdict(r.block_cmi <= opt.tol);
    r.per_z_injective = ccf.per_z_injective;
    r.ubi = verdict(r.bi == Verdict::yes && ccf.per_z_injective);

    auto labelled = Outcomes::from(d).extend([&](const Outcomes::Row &row) {
        return ccf.label_at(row[X], row[Y], row[Z]).value_or(0);
    });
    const std::size_t j[] = {3}, x[] = {X}, y[] = {Y}, z[] = {Z}, xy[] = {X, Y};
    r.label_given_x = labelled.cond_entropy(j, x);
    r.label_given_y = labelled.cond_entropy(j, y);

    r.pd = check_ubi_pd(d, opt.tol);
    r.ubi_pd = r.pd.verdict;

    if (r.ubi_pd == Verdict::yes && !opt.always_search) {
        std::vector<std::size_t> id(d.dz());
        std::iota(id.begin(), id.end(), std::size_t{0});
        r.pd_down.assignment = id;
        r.pd_down_from_identity = true;
    } else {
        r.pd_down = is_ubi_pd_down(d, opt.tol, opt.budget);
    }
    r.ubi_pd_down = r.pd_down.found() ? Verdict::yes : Verdict::inconclusive;
    if (r.pd_down.found()) {
        r.pd_down_channel_bi = is_block_independent(apply_channel_z(d, r.pd_down.channel()), opt.tol);
    }

    auto law = Outcomes::from(d);
    r.z_given_xy = law.cond_entropy(z, xy);
    r.semi_unambiguous = verdict(is_semi_unambiguous(d));
    r.residual_xy = residual_pair_entropy(d, ccf);
    r.unambiguous = verdict(r.semi_unambiguous == Verdict::yes && r.residual_xy <= opt.tol);

    if (auto v = nesting_violations(r); !v.empty()) {
        throw std::logic_error("classification nesting violated: " + v.front());
    }
    return r;
}

}  // namespace secrecy_forge
