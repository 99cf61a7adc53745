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

#include <random>

#include "secrecy_forge/dist.hpp"
#include "secrecy_forge/instances.hpp"
#include "support/oracles.hpp"

namespace sf = secrecy_forge;
using sf::Dist3;

namespace {

Dist3 uniform_bits() { return Dist3(2, 2, 2, std::vector<double>(8, 0.125)); }

}  // namespace

TEST(Validate, AcceptsUniform) {
    const std::size_t dims[] = {2, 2, 2};
    std::vector<double> v(8, 0.125);
    EXPECT_FALSE(sf::validate(dims, v).has_value());
}

TEST(Validate, ReportsNegativeEntry) {
    const std::size_t dims[] = {2, 1, 1};
    std::vector<double> v = {1.1, -0.1};
    auto bad = sf::validate(dims, v);
    ASSERT_TRUE(bad.has_value());
    EXPECT_EQ(bad->kind, sf::Violation::Kind::negative);
    EXPECT_NEAR(bad->magnitude, 0.1, 1e-15);
}

TEST(Validate, ReportsSumDeficit) {
    const std::size_t dims[] = {2, 1, 1};
    std::vector<double> v = {0.5, 0.499};
    auto bad = sf::validate(dims, v, 1e-12);
    ASSERT_TRUE(bad.has_value());
    EXPECT_EQ(bad->kind, sf::Violation::Kind::sum);
    EXPECT_THROW(Dist3(2, 1, 1, v), sf::DistributionError);
}

TEST(Validate, ReportsShapeMismatch) {
    const std::size_t dims[] = {2, 2, 1};
    std::vector<double> v = {1.0};
    auto bad = sf::validate(dims, v);
    ASSERT_TRUE(bad.has_value());
    EXPECT_EQ(bad->kind, sf::Violation::Kind::dims);
}

TEST(Marginal, UniformKeepX) {
    auto m = sf::marginal(uniform_bits(), {sf::X});
    ASSERT_EQ(m.size(), 2u);
    EXPECT_DOUBLE_EQ(m[0], 0.5);
    EXPECT_DOUBLE_EQ(m[1], 0.5);
}

TEST(Marginal, EveAdvantagePairAtHalf) {
    auto m = sf::marginal_pair(sf::instances::eve_advantage(0.5), sf::X, sf::Y);
    EXPECT_DOUBLE_EQ(m(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(m(1, 1), 0.5);
    EXPECT_DOUBLE_EQ(m(0, 1), 0.0);
}

TEST(Marginal, KeepAllIsIdentity) {
    std::mt19937_64 rng(3);
    auto d = oracle::random_dist(rng, 2, 3, 2);
    auto m = sf::marginal(d, {sf::X, sf::Y, sf::Z});
    for (std::size_t i = 0; i < m.size(); ++i) {
        EXPECT_EQ(m[i], d.pmf()[i]);
    }
}

TEST(Marginal, EmptyKeepIsAnError) {
    EXPECT_THROW(sf::marginal(uniform_bits(), std::span<const std::size_t>{}),
                 std::invalid_argument);
}

TEST(Conditional, CopiedBitGivesPointMass) {
    auto d = Dist3::from_function(2, 2, 2, [](auto x, auto y, auto z) {
        return (x == y && y == z) ? 0.5 : 0.0;
    });
    auto c = sf::conditional_xy_given_z(d, 0);
    EXPECT_DOUBLE_EQ(c(0, 0), 1.0);
}

TEST(Conditional, EveAdvantageSliceAtQuarter) {
    auto c = sf::conditional_xy_given_z(sf::instances::eve_advantage(0.25), 1);
    EXPECT_NEAR(c(0, 0), 0.25, 1e-15);
    EXPECT_NEAR(c(1, 1), 0.75, 1e-15);
}

TEST(Conditional, ZeroProbabilityAndOutOfRange) {
    auto d = sf::instances::eve_advantage(0.0);
    auto dz = Dist3::from_function(1, 1, 2, [](auto, auto, auto z) { return z == 0 ? 1.0 : 0.0; });
    EXPECT_THROW(sf::conditional_xy_given_z(dz, 1), std::domain_error);
    EXPECT_THROW(sf::conditional_xy_given_z(d, 2), std::out_of_range);
}

TEST(Entropy, Basics) {
    std::vector<double> u4(4, 0.25), point = {1.0, 0.0}, q = {0.25, 0.75};
    EXPECT_DOUBLE_EQ(sf::entropy(u4), 2.0);
    EXPECT_DOUBLE_EQ(sf::entropy(point), 0.0);
    EXPECT_NEAR(sf::entropy(q), 0.811278124459, 1e-11);
    EXPECT_NEAR(sf::entropy(q), oracle::h(q), 1e-14);
}

TEST(BinaryEntropy, ValuesAndDomain) {
    EXPECT_DOUBLE_EQ(sf::binary_entropy(0.5), 1.0);
    EXPECT_DOUBLE_EQ(sf::binary_entropy(0.0), 0.0);
    EXPECT_DOUBLE_EQ(sf::binary_entropy(1.0), 0.0);
    EXPECT_NEAR(sf::binary_entropy(0.25), 0.811278124459, 1e-11);
    EXPECT_THROW(sf::binary_entropy(-0.01), std::domain_error);
    EXPECT_THROW(sf::binary_entropy(1.01), std::domain_error);
}

TEST(BinaryEntropy, Symmetric) {
    for (double x = 0.0; x <= 1.0; x += 0.0625) {
        EXPECT_NEAR(sf::binary_entropy(x), sf::binary_entropy(1.0 - x), 1e-15);
    }
}

TEST(CondMutualInfo, ExamplesAndOracle) {
    auto copy = Dist3::from_function(2, 2, 1, [](auto x, auto y, auto) { return x == y ? 0.5 : 0.0; });
    EXPECT_NEAR(sf::cond_mutual_info(copy, {sf::X}, {sf::Y}, {sf::Z}), 1.0, 1e-14);
    EXPECT_NEAR(sf::cond_mutual_info(uniform_bits(), {sf::X}, {sf::Y}, {sf::Z}), 0.0, 1e-14);
    auto ab = sf::instances::ab_advantage();
    EXPECT_NEAR(sf::cond_mutual_info(ab, {sf::X}, {sf::Y}, {}), 0.311278124459, 1e-11);
}

TEST(CondMutualInfo, MatchesDenseOracleOnRandomInstances) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        auto d = oracle::random_small_dist(rng, 4);
        double lib = sf::cond_mutual_info(d, {sf::X}, {sf::Y}, {sf::Z});
        EXPECT_GE(lib, 0.0);
        EXPECT_NEAR(lib, oracle::cmi_xy_given_z(d), 1e-10);
    }
}

TEST(CondMutualInfo, ZeroExactlyWhenSlicesFactorize) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int t = 0; t < 50; ++t) {
        // p(x,y,z) = p(z) a_z(x) b_z(y).
        std::vector<double> pz = {u(rng), u(rng)}, a(6), b(6);
        for (auto &v : a) v = u(rng);
        for (auto &v : b) v = u(rng);
        auto raw = Dist3::from_function(
            3, 3, 2, [&](auto x, auto y, auto z) { return pz[z] * a[z * 3 + x] * b[z * 3 + y]; }, 1e9);
        double total = 0.0;
        for (std::size_t i = 0; i < raw.pmf().size(); ++i) total += raw.pmf()[i];
        auto d = Dist3::from_function(3, 3, 2, [&](auto x, auto y, auto z) { return raw(x, y, z) / total; });
        EXPECT_NEAR(sf::cond_mutual_info(d, {sf::X}, {sf::Y}, {sf::Z}), 0.0, 1e-12);
    }
}

TEST(Properties, ChainRuleAndValidMarginals) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 200; ++t) {
        auto d = oracle::random_small_dist(rng, 4);
        const std::size_t xy[] = {sf::X, sf::Y}, z[] = {sf::Z};
        auto law = sf::Outcomes::from(d);
        EXPECT_NEAR(d.pmf().entropy(), sf::entropy(d.pmf(), z) + law.cond_entropy(xy, z), 1e-9);
        for (auto keep : std::vector<std::vector<std::size_t>>{{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 2}}) {
            auto m = d.pmf().marginal(keep);
            EXPECT_FALSE(sf::validate(m.dims(), m.values(), 1e-10).has_value());
        }
        auto pz = d.pz();
        for (std::size_t zz = 0; zz < d.dz(); ++zz) {
            if (pz[zz] > 1e-12) {
                auto c = sf::conditional_xy_given_z(d, zz);
                EXPECT_FALSE(sf::validate(c.pmf().dims(), c.pmf().values(), 1e-10).has_value());
            }
        }
    }
}

TEST(ProductPower, IdentityUniformAndEntropyAdditivity) {
    auto d = uniform_bits();
    auto p1 = sf::product_power(d, 1);
    EXPECT_EQ(p1.pmf().values().size(), 8u);
    auto p2 = sf::product_power(d, 2);
    EXPECT_EQ(p2.dx() * p2.dy() * p2.dz(), 64u);
    for (double v : p2.pmf().values()) EXPECT_DOUBLE_EQ(v, 1.0 / 64.0);

    std::mt19937_64 rng(14);
    for (int t = 0; t < 30; ++t) {
        auto r = oracle::random_dist(rng, 2, 2, 2);
        for (std::size_t n = 1; n <= 3; ++n) {
            EXPECT_NEAR(sf::product_power(r, n).pmf().entropy(), n * r.pmf().entropy(), 1e-9);
        }
    }
    auto e = sf::instances::eve_advantage(0.25);
    EXPECT_NEAR(sf::product_power(e, 2).pmf().entropy(), 2 * e.pmf().entropy(), 1e-12);
}

TEST(ProductPower, CopyOrderAndCap) {
    auto e = sf::instances::eve_advantage(0.25);
    auto p2 = sf::product_power(e, 2);
    // ((x1,x2),(y1,y2),(z1,z2)) with the first copy most significant.
    EXPECT_NEAR(p2(0 * 2 + 1, 0 * 2 + 1, 1 * 2 + 0), e(0, 0, 1) * e(1, 1, 0), 1e-15);
    sf::Caps small;
    small.product_states = 32;
    EXPECT_THROW(sf::product_power(e, 2, small), std::length_error);
}

TEST(Channels, IdentityConstantAndMerge) {
    std::mt19937_64 rng(15);
    auto d = oracle::random_dist(rng, 2, 3, 3);
    auto same = sf::apply_channel_z(d, sf::Channel::identity(3));
    for (std::size_t i = 0; i < d.pmf().size(); ++i) EXPECT_EQ(same.pmf()[i], d.pmf()[i]);

    auto flat = sf::apply_channel_z(d, sf::Channel::constant(3));
    auto pxy = sf::marginal_pair(d, sf::X, sf::Y);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 3; ++y) EXPECT_NEAR(flat(x, y, 0), pxy(x, y), 1e-15);

    auto e = sf::instances::eve_advantage(0.25);
    auto merged = sf::apply_channel_z(e, sf::Channel::constant(2));
    EXPECT_NEAR(merged(0, 0, 0), 0.25 + 0.125, 1e-15);
    EXPECT_NEAR(merged(1, 1, 0), 0.25 + 0.375, 1e-15);

    EXPECT_THROW(sf::apply_channel_z(d, sf::Channel::identity(2)), std::invalid_argument);
}

TEST(Channels, RejectNonStochasticRows) {
    EXPECT_THROW(sf::Channel(2, 2, {0.5, 0.5, 0.7, 0.2}), std::invalid_argument);
    EXPECT_THROW(sf::Channel(1, 2, {1.5, -0.5}), std::invalid_argument);
}

TEST(Channels, PreserveXYMarginalOnRandomChannels) {
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        auto d = oracle::random_small_dist(rng, 3);
        const std::size_t out = 1 + t % 3;
        std::vector<double> k(d.dz() * out);
        for (std::size_t z = 0; z < d.dz(); ++z) {
            double s = 0.0;
            for (std::size_t w = 0; w < out; ++w) s += (k[z * out + w] = u(rng));
            for (std::size_t w = 0; w < out; ++w) k[z * out + w] /= s;
        }
        auto e = sf::apply_channel_z(d, sf::Channel(d.dz(), out, k, 1e-12));
        auto a = sf::marginal_pair(d, sf::X, sf::Y), b = sf::marginal_pair(e, sf::X, sf::Y);
        for (std::size_t x = 0; x < d.dx(); ++x)
            for (std::size_t y = 0; y < d.dy(); ++y) EXPECT_NEAR(a(x, y), b(x, y), 1e-12);
    }
}

TEST(Caps, ParseOverridesAndRejectsGarbage) {
    auto c = sf::Caps::parse("product_states=8192,qstate_dim=512");
    EXPECT_EQ(c.product_states, 8192u);
    EXPECT_EQ(c.qstate_dim, 512u);
    EXPECT_EQ(c.optimizer_dim, 16u);
    EXPECT_THROW(sf::Caps::parse("bogus=1"), std::invalid_argument);
    EXPECT_THROW(sf::Caps::parse("qstate_dim"), std::invalid_argument);
    EXPECT_THROW(sf::Caps::parse("qstate_dim=zero"), std::invalid_argument);
}
