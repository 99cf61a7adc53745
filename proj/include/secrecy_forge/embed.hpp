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

/// \file embed.hpp
/// Quantum embeddings of a classical p(x,y,z): the coherent (qqq) pure state
/// sum e^{i phi} sqrt(p) |xyz>, its one- and two-sided incoherent versions
/// (cqq, ccq), the fully incoherent ccc state, and the classical-register
/// extension sigma^{AB Zbar} obtained by letting Eve process Z through a
/// channel.
///
/// Subsystem order is always A, B, E with x major and z minor.

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "secrecy_forge/common_info.hpp"
#include "secrecy_forge/config.hpp"
#include "secrecy_forge/dist.hpp"
#include "secrecy_forge/qlinalg.hpp"

namespace secrecy_forge {

/// Phases phi(x,y,z) on the full index grid, wrapped to [0, 2 pi).
class PhaseAssignment {
  public:
    PhaseAssignment() = default;
    PhaseAssignment(std::size_t dx, std::size_t dy, std::size_t dz)
        : dx_(dx), dy_(dy), dz_(dz), phi_(dx * dy * dz, 0.0) {}

    static PhaseAssignment zero(const Dist3 &d) { return {d.dx(), d.dy(), d.dz()}; }

    static double wrap(double phi) {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double w = std::fmod(phi, two_pi);
        if (w < 0.0) {
            w += two_pi;
        }
        return w >= two_pi ? 0.0 : w;
    }

    void set(std::size_t x, std::size_t y, std::size_t z, double phi) {
        phi_.at(index(x, y, z)) = wrap(phi);
    }

    /// Zero when the assignment is empty (default-constructed).
    double operator()(std::size_t x, std::size_t y, std::size_t z) const {
        return phi_.empty() ? 0.0 : phi_.at(index(x, y, z));
    }

    bool empty() const noexcept { return phi_.empty(); }
    std::size_t dx() const noexcept { return dx_; }
    std::size_t dy() const noexcept { return dy_; }
    std::size_t dz() const noexcept { return dz_; }

    void check_matches(const Dist3 &d) const {
        if (!empty() && (dx_ != d.dx() || dy_ != d.dy() || dz_ != d.dz())) {
            throw std::invalid_argument("phase assignment dims do not match the distribution");
        }
    }

  private:
    std::size_t index(std::size_t x, std::size_t y, std::size_t z) const {
        if (x >= dx_ || y >= dy_ || z >= dz_) {
            throw std::out_of_range("phase index out of range");
        }
        return (x * dy_ + y) * dz_ + z;
    }

    std::size_t dx_ = 0, dy_ = 0, dz_ = 0;
    std::vector<double> phi_;
};

namespace detail {

inline CVec embedding_amplitudes(const Dist3 &d, const PhaseAssignment &phases) {
    phases.check_matches(d);
    CVec v(static_cast<Eigen::Index>(d.dx() * d.dy() * d.dz()));
    Eigen::Index i = 0;
    for (std::size_t x = 0; x < d.dx(); ++x) {
        for (std::size_t y = 0; y < d.dy(); ++y) {
            for (std::size_t z = 0; z < d.dz(); ++z) {
                v(i++) = std::polar(std::sqrt(std::max(0.0, d(x, y, z))), phases(x, y, z));
            }
        }
    }
    return v;
}

/// rho[(x,y,z),(x',y',z')] = a a'^* where `coherent(x,y,z,x',y',z')` holds.
template <class Keep>
QState masked_outer(const Dist3 &d, const PhaseAssignment &phases, Keep &&coherent,
                    const Caps &caps) {
    const std::size_t n = d.dx() * d.dy() * d.dz();
    check_dim_cap(n, caps);
    CVec a = embedding_amplitudes(d, phases);
    CMat rho = CMat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t xi = i / (d.dy() * d.dz()), yi = (i / d.dz()) % d.dy();
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t xj = j / (d.dy() * d.dz()), yj = (j / d.dz()) % d.dy();
            if (coherent(xi, yi, i % d.dz(), xj, yj, j % d.dz())) {
                rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    a(static_cast<Eigen::Index>(i)) * std::conj(a(static_cast<Eigen::Index>(j)));
            }
        }
    }
    return QState::unchecked({d.dx(), d.dy(), d.dz()}, std::move(rho));
}

}  // namespace detail

inline PureState embed_qqq(const Dist3 &d, const PhaseAssignment &phases = {},
                           const Caps &caps = default_caps()) {
    detail::check_dim_cap(d.dx() * d.dy() * d.dz(), caps);
    auto v = detail::embedding_amplitudes(d, phases);
    v /= v.norm();  // absorbs the validation tolerance of d
    return PureState({d.dx(), d.dy(), d.dz()}, std::move(v), 1e-9);
}

/// sum_x p(x) |x><x| (x) |psi_x><psi_x|, <yz|psi_x> = e^{i phi} sqrt(p(y,z|x)).
inline QState embed_cqq(const Dist3 &d, const PhaseAssignment &phases = {},
                        const Caps &caps = default_caps()) {
    return detail::masked_outer(
        d, phases,
        [](std::size_t x, std::size_t, std::size_t, std::size_t x2, std::size_t, std::size_t) {
            return x == x2;
        },
        caps);
}

/// sum_{x,y} p(x,y) |xy><xy| (x) |psi_xy><psi_xy|, <z|psi_xy> = e^{i phi} sqrt(p(z|xy)).
inline QState embed_ccq(const Dist3 &d, const PhaseAssignment &phases = {},
                        const Caps &caps = default_caps()) {
    return detail::masked_outer(
        d, phases,
        [](std::size_t x, std::size_t y, std::size_t, std::size_t x2, std::size_t y2,
           std::size_t) { return x == x2 && y == y2; },
        caps);
}

inline QState embed_ccc(const Dist3 &d, const Caps &caps = default_caps()) {
    const std::size_t n = d.dx() * d.dy() * d.dz();
    detail::check_dim_cap(n, caps);
    CMat rho = CMat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d.pmf()[i];
    }
    return QState::unchecked({d.dx(), d.dy(), d.dz()}, std::move(rho));
}

/// sigma^{AB Zbar} = sum_zbar sum_z p(z) W(zbar|z) |phi_z><phi_z| (x) |zbar><zbar|,
/// with <xy|phi_z> = e^{i phi} sqrt(p(x,y|z)).
inline QState extension_sigma(const Dist3 &d, const PhaseAssignment &phases, const Channel &ch,
                              const Caps &caps = default_caps()) {
    if (ch.in_dim() != d.dz()) {
        throw std::invalid_argument("extension_sigma: channel input does not match |Z|");
    }
    const std::size_t nab = d.dx() * d.dy();
    const std::size_t nz = ch.out_dim();
    detail::check_dim_cap(nab * nz, caps);
    CVec a = detail::embedding_amplitudes(d, phases);
    const auto n = static_cast<Eigen::Index>(nab * nz);
    CMat rho = CMat::Zero(n, n);
    for (std::size_t z = 0; z < d.dz(); ++z) {
        // sqrt(p(z)) |phi_z>, unnormalized.
        CVec phi(static_cast<Eigen::Index>(nab));
        for (std::size_t xy = 0; xy < nab; ++xy) {
            phi(static_cast<Eigen::Index>(xy)) = a(static_cast<Eigen::Index>(xy * d.dz() + z));
        }
        CMat proj = phi * phi.adjoint();
        for (std::size_t zb = 0; zb < nz; ++zb) {
            const double w = ch(z, zb);
            if (w == 0.0) {
                continue;
            }
            for (std::size_t i = 0; i < nab; ++i) {
                for (std::size_t j = 0; j < nab; ++j) {
                    rho(static_cast<Eigen::Index>(i * nz + zb),
                        static_cast<Eigen::Index>(j * nz + zb)) +=
                        w * proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                }
            }
        }
    }
    return QState::unchecked({d.dx(), d.dy(), nz}, std::move(rho));
}

/// Block relabelings realizing Omega_A^{(zbar)}, Omega_B^{(zbar)}: x and y
/// are mapped to their block in the maximal common partitioning of
/// p(x,y|zbar). Symbols outside the support of that conditional map nowhere.
struct OmegaMap {
    std::vector<std::optional<std::size_t>> alice;
    std::vector<std::optional<std::size_t>> bob;
    std::size_t blocks = 0;
};

inline OmegaMap omega_measurement(const Dist3 &d, const Channel &ch, std::size_t zbar) {
    auto dbar = apply_channel_z(d, ch);
    if (zbar >= dbar.dz()) {
        throw std::out_of_range("omega_measurement: zbar outside the channel output");
    }
    auto part = maximal_common_partition(conditional_xy_given_z(dbar, zbar));
    return {part.block_of_x, part.block_of_y, part.size()};
}

/// Dephases sigma^{AB Zbar} and applies Omega^{(zbar)}_A (x) Omega^{(zbar)}_B
/// conditioned on zbar. The result lives on [J, J, |Zbar|] with J the
/// largest block count; it is diagonal with entries p(zbar) p(j_A, j_B | zbar).
inline QState apply_omega(const QState &sigma, const Dist3 &d, const Channel &ch) {
    const auto &dims = sigma.dims();
    if (dims.size() != 3 || dims[0] != d.dx() || dims[1] != d.dy() || dims[2] != ch.out_dim()) {
        throw std::invalid_argument("apply_omega: sigma does not match the distribution/channel");
    }
    const auto pzbar = apply_channel_z(d, ch).pz();
    std::vector<std::optional<OmegaMap>> maps(ch.out_dim());
    std::size_t jdim = 1;
    for (std::size_t zb = 0; zb < ch.out_dim(); ++zb) {
        if (pzbar[zb] > kSupportEpsilon) {
            maps[zb] = omega_measurement(d, ch, zb);
            jdim = std::max(jdim, maps[zb]->blocks);
        }
    }
    const std::size_t nz = ch.out_dim();
    const auto n = static_cast<Eigen::Index>(jdim * jdim * nz);
    CMat out = CMat::Zero(n, n);
    for (std::size_t x = 0; x < d.dx(); ++x) {
        for (std::size_t y = 0; y < d.dy(); ++y) {
            for (std::size_t zb = 0; zb < nz; ++zb) {
                const auto i = static_cast<Eigen::Index>((x * d.dy() + y) * nz + zb);
                const double p = sigma.rho()(i, i).real();
                if (p <= kSupportEpsilon) {
                    continue;
                }
                if (!maps[zb] || !maps[zb]->alice[x] || !maps[zb]->bob[y]) {
                    throw std::invalid_argument("apply_omega: mass outside the block support");
                }
                const auto k = static_cast<Eigen::Index>(
                    (*maps[zb]->alice[x] * jdim + *maps[zb]->bob[y]) * nz + zb);
                out(k, k) += p;
            }
        }
    }
    return QState::unchecked({jdim, jdim, nz}, std::move(out));
}

}  // namespace secrecy_forge
