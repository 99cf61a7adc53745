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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "secrecy_forge/embed.hpp"
#include "secrecy_forge/instances.hpp"
#include "support/oracles.hpp"

namespace sf = secrecy_forge;
using sf::CMat;
using sf::CVec;
using sf::Dist3;
using sf::QState;

namespace {

double max_abs(const CMat &m) { return m.cwiseAbs().maxCoeff(); }

sf::PhaseAssignment random_phases(std::mt19937_64 &rng, const Dist3 &d) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    sf::PhaseAssignment ph(d.dx(), d.dy(), d.dz());
    for (std::size_t x = 0; x < d.dx(); ++x)
        for (std::size_t y = 0; y < d.dy(); ++y)
            for (std::size_t z = 0; z < d.dz(); ++z) ph.set(x, y, z, u(rng));
    return ph;
}

}  // namespace

TEST(PhaseAssignment, WrapsIntoRange) {
    EXPECT_NEAR(sf::PhaseAssignment::wrap(-0.5), 2 * std::numbers::pi - 0.5, 1e-15);
    EXPECT_NEAR(sf::PhaseAssignment::wrap(7.0), 7.0 - 2 * std::numbers::pi, 1e-15);
    EXPECT_EQ(sf::PhaseAssignment::wrap(2 * std::numbers::pi), 0.0);
    sf::PhaseAssignment empty;
    EXPECT_EQ(empty(3, 4, 5), 0.0);
}

TEST(EmbedQqq, CopiedBitIsBellTimesEveKet) {
    auto d = Dist3::from_function(2, 2, 1, [](auto x, auto y, auto) { return x == y ? 0.5 : 0.0; });
    auto psi = sf::embed_qqq(d);
    auto expected = sf::tensor(sf::PureState::max_entangled(2), sf::PureState::basis({1}, std::vector<std::size_t>{0}));
    EXPECT_LE((psi.amp() - expected.amp()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EmbedQqq, PointMassIsBasisState) {
    auto d = Dist3::from_function(2, 3, 2, [](auto x, auto y, auto z) { return (x == 1 && y == 2 && z == 0) ? 1.0 : 0.0; });
    auto psi = sf::embed_qqq(d);
    EXPECT_EQ(psi.amp()((1 * 3 + 2) * 2 + 0), sf::cplx(1.0));
}

TEST(EmbedQqq, EveAdvantageAmplitudes) {
    for (double lambda : {0.0, 0.1, 0.25, 0.4, 0.5}) {
        auto psi = sf::embed_qqq(sf::instances::eve_advantage(lambda));
        // sqrt(1/2)[Phi |0> + (sqrt(l)|00> + sqrt(1-l)|11>)|1>]
        CVec hand = CVec::Zero(8);
        hand(0) = hand(6) = std::sqrt(0.5) / std::sqrt(2.0);
        hand(1) = std::sqrt(0.5) * std::sqrt(lambda);
        hand(7) = std::sqrt(0.5) * std::sqrt(1 - lambda);
        EXPECT_LE((psi.amp() - hand).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(EmbedCcc, DiagonalEqualsDistribution) {
    auto u = sf::embed_ccc(Dist3(2, 2, 2, std::vector<double>(8, 0.125)));
    EXPECT_LE(max_abs(u.rho() - CMat::Identity(8, 8) / 8.0), 0.0);
    std::mt19937_64 rng(51);
    auto d = oracle::random_dist(rng, 3, 2, 2);
    auto c = sf::embed_ccc(d);
    for (std::size_t i = 0; i < d.pmf().size(); ++i) EXPECT_EQ(c.rho()(i, i).real(), d.pmf()[i]);
}

TEST(EmbedChain, DephasingChainOnRandomInputs) {
    std::mt19937_64 rng(52);
    for (int t = 0; t < 100; ++t) {
        auto d = oracle::random_small_dist(rng, 3);
        auto ph = random_phases(rng, d);
        QState qqq(sf::embed_qqq(d, ph));
        auto cqq = sf::embed_cqq(d, ph);
        auto ccq = sf::embed_ccq(d, ph);
        auto ccc = sf::embed_ccc(d);
        EXPECT_LE(max_abs(sf::dephase(qqq, 0).rho() - cqq.rho()), 1e-12);
        EXPECT_LE(max_abs(sf::dephase(cqq, 1).rho() - ccq.rho()), 1e-12);
        EXPECT_LE(max_abs(sf::dephase(ccq, 2).rho() - ccc.rho()), 1e-12);
    }
}

TEST(EmbedCqq, MatchesPrintedOneSidedStateOnItsDephasedDistribution) {
    // The cqq embedding of dephase_A of the three-block state is block
    // diagonal in x with pure conditional states on BE.
    auto d = sf::instances::one_sided_gap();
    auto ph = sf::instances::one_sided_gap_phases();
    auto cqq = sf::embed_cqq(d, ph);
    QState qqq(sf::embed_qqq(d, ph));
    EXPECT_LE(max_abs(sf::dephase(qqq, 0).rho() - cqq.rho()), 1e-12);
    // z = 0 block holds the classically correlated pair (Bell dephased on A).
    auto blocks = sf::classical_blocks(sf::dephase(cqq, 2), 2);
    EXPECT_NEAR(blocks[0].prob, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(sf::mutual_info_q(blocks[0].state), 1.0, 1e-12);
}

TEST(EmbedQqq, EvePhaseShiftsLeaveRhoAbUnchanged) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 6.0);
    for (int t = 0; t < 30; ++t) {
        auto d = oracle::random_small_dist(rng, 3);
        auto ph = random_phases(rng, d);
        auto shifted = ph;
        std::vector<double> g(d.dz());
        for (auto &v : g) v = u(rng);
        for (std::size_t x = 0; x < d.dx(); ++x)
            for (std::size_t y = 0; y < d.dy(); ++y)
                for (std::size_t z = 0; z < d.dz(); ++z) shifted.set(x, y, z, ph(x, y, z) + g[z]);
        auto a = sf::reduced(sf::embed_qqq(d, ph), {0, 1});
        auto b = sf::reduced(sf::embed_qqq(d, shifted), {0, 1});
        EXPECT_LE(max_abs(a.rho() - b.rho()), 1e-12);
        auto ch = sf::Channel::constant(d.dz());
        EXPECT_LE(max_abs(sf::extension_sigma(d, ph, ch).rho() - sf::extension_sigma(d, shifted, ch).rho()), 1e-12);
    }
}

TEST(ExtensionSigma, IdentityChannelGivesPureBlocks) {
    auto d = sf::instances::eve_advantage(0.25);
    auto sigma = sf::extension_sigma(d, {}, sf::Channel::identity(2));
    auto blocks = sf::classical_blocks(sigma, 2);
    for (const auto &b : blocks) EXPECT_NEAR(sf::von_neumann_entropy(b.state), 0.0, 1e-10);
    EXPECT_NEAR(blocks[0].prob, 0.5, 1e-15);
}

TEST(ExtensionSigma, ConstantChannelIsSingleMixedBlock) {
    auto d = sf::instances::eve_advantage(0.25);
    auto sigma = sf::extension_sigma(d, {}, sf::Channel::constant(2));
    ASSERT_EQ(sigma.dims(), (std::vector<std::size_t>{2, 2, 1}));
    auto rab = sf::reduced(sf::embed_qqq(d), {0, 1});
    EXPECT_LE(max_abs(sigma.rho() - rab.rho()), 1e-12);
}

TEST(ExtensionSigma, TracingZbarRecoversRhoAb) {
    std::mt19937_64 rng(54);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        auto d = oracle::random_small_dist(rng, 3);
        auto ph = random_phases(rng, d);
        const std::size_t out = 1 + t % 3;
        std::vector<double> k(d.dz() * out);
        for (std::size_t z = 0; z < d.dz(); ++z) {
            double s = 0.0;
            for (std::size_t w = 0; w < out; ++w) s += (k[z * out + w] = u(rng));
            for (std::size_t w = 0; w < out; ++w) k[z * out + w] /= s;
        }
        auto sigma = sf::extension_sigma(d, ph, sf::Channel(d.dz(), out, k, 1e-12));
        auto lhs = sf::partial_trace(sigma, {0, 1});
        auto rhs = sf::reduced(sf::embed_qqq(d, ph), {0, 1});
        EXPECT_LE(max_abs(lhs.rho() - rhs.rho()), 1e-12);
    }
}

TEST(Omega, BlockMaps) {
    auto d = sf::instances::eve_advantage(0.25);
    auto om = sf::omega_measurement(d, sf::Channel::identity(2), 0);
    EXPECT_EQ(om.alice[0], 0u);
    EXPECT_EQ(om.alice[1], 1u);
    auto indep = Dist3(2, 2, 1, std::vector<double>(4, 0.25));
    auto one = sf::omega_measurement(indep, sf::Channel::identity(1), 0);
    EXPECT_EQ(one.blocks, 1u);
    EXPECT_EQ(one.alice[0], one.alice[1]);
    auto two = sf::omega_measurement(sf::instances::two_block_copies(), sf::Channel::identity(2), 1);
    EXPECT_EQ(two.alice[2], 0u);
    EXPECT_EQ(two.alice[3], 1u);
    EXPECT_FALSE(two.alice[0].has_value());
}

TEST(Omega, RelabeledStateIsDiagonalBlockLaw) {
    auto d = sf::instances::two_block_copies();
    auto ch = sf::Channel::identity(2);
    auto hat = sf::apply_omega(sf::extension_sigma(d, {}, ch), d, ch);
    ASSERT_EQ(hat.dims(), (std::vector<std::size_t>{2, 2, 2}));
    // p(zbar) p(j,j|zbar) = 1/4 on each (j, j, zbar).
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t zb = 0; zb < 2; ++zb) EXPECT_NEAR(hat.rho()((j * 2 + j) * 2 + zb, (j * 2 + j) * 2 + zb).real(), 0.25, 1e-15);
    EXPECT_LE(max_abs(sf::dephase(sf::dephase(hat, 0), 1).rho() - hat.rho()), 0.0);
}
