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

#include <algorithm>
#include <random>

#include "secrecy_forge/classify.hpp"
#include "secrecy_forge/instances.hpp"
#include "support/oracles.hpp"

namespace sf = secrecy_forge;
using sf::Dist3;
using sf::Verdict;

namespace {

Dist3 noisy_copy() {
    // X = Y xor N with P[N=1] = 0.2, Z constant: full support, one block.
    return Dist3::from_function(2, 2, 1, [](auto x, auto y, auto) { return x == y ? 0.4 : 0.1; });
}

Dist3 copies_without_eve() {
    return Dist3::from_function(4, 4, 1, [](auto x, auto y, auto) { return x == y ? 0.25 : 0.0; });
}

Dist3 permuted(const Dist3 &d, const std::vector<std::size_t> &px, const std::vector<std::size_t> &py,
               const std::vector<std::size_t> &pz) {
    return Dist3::from_function(d.dx(), d.dy(), d.dz(),
                                [&](auto x, auto y, auto z) { return d(px[x], py[y], pz[z]); });
}

std::vector<std::size_t> random_perm(std::mt19937_64 &rng, std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

}  // namespace

TEST(BlockIndependence, Examples) {
    EXPECT_TRUE(sf::is_block_independent(sf::instances::eve_advantage(0.25)));
    EXPECT_FALSE(sf::is_block_independent(noisy_copy()));
    EXPECT_TRUE(sf::is_block_independent(Dist3(2, 2, 2, std::vector<double>(8, 0.125))));
}

TEST(BlockIndependence, MatchesPerBlockOracle) {
    // BI iff within every (z, block) the conditional factorizes; check via
    // the dense CMI oracle on the distribution with Z replaced by (Z, block).
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t) {
        auto d = oracle::random_small_dist(rng, 3);
        auto ccf = sf::conditional_common_function(d);
        const std::size_t nb = std::max<std::size_t>(1, ccf.max_blocks());
        auto ext = Dist3::from_function(d.dx(), d.dy(), d.dz() * nb, [&](auto x, auto y, auto zj) {
            auto z = zj / nb;
            auto b = ccf.block_at(x, y, z);
            return (b.value_or(0) == zj % nb) ? d(x, y, z) : 0.0;
        }, 1e-9);
        EXPECT_NEAR(sf::block_conditional_mi(d, ccf), oracle::cmi_xy_given_z(ext), 1e-10);
    }
}

TEST(Ubi, Examples) {
    EXPECT_TRUE(sf::is_ubi(sf::instances::eve_advantage(0.25)));
    EXPECT_TRUE(sf::is_ubi(sf::instances::two_block_copies()));
    EXPECT_FALSE(sf::is_ubi(sf::instances::block_flip()));
}

TEST(Ubi, InvariantUnderAlphabetPermutations) {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 200; ++t) {
        auto d = oracle::random_small_dist(rng, 3);
        auto q = permuted(d, random_perm(rng, d.dx()), random_perm(rng, d.dy()), random_perm(rng, d.dz()));
        EXPECT_EQ(sf::is_ubi(d), sf::is_ubi(q));
    }
}

TEST(Ubi, CertificatesVanishUnderReturnedLabeling) {
    std::mt19937_64 rng(33);
    int found = 0;
    for (int t = 0; t < 400; ++t) {
        auto d = oracle::random_small_dist(rng, 3);
        auto r = sf::classify(d);
        if (r.ubi != Verdict::yes) continue;
        ++found;
        EXPECT_LE(r.block_cmi, 1e-10);
        EXPECT_LE(r.label_given_x, 1e-10);
        EXPECT_LE(r.label_given_y, 1e-10);
    }
    EXPECT_GT(found, 20);
}

TEST(SemiUnambiguous, Examples) {
    EXPECT_TRUE(sf::is_semi_unambiguous(sf::instances::two_block_copies()));
    EXPECT_FALSE(sf::is_semi_unambiguous(sf::instances::eve_advantage(0.25)));
    EXPECT_FALSE(sf::is_semi_unambiguous(Dist3(2, 2, 2, std::vector<double>(8, 0.125))));
}

TEST(Unambiguous, Examples) {
    EXPECT_TRUE(sf::is_unambiguous(sf::instances::two_block_copies()));
    EXPECT_TRUE(sf::is_unambiguous(copies_without_eve()));
    auto xor_eve = Dist3::from_function(2, 2, 2, [](auto x, auto y, auto z) { return (x ^ y) == z ? 0.25 : 0.0; });
    EXPECT_TRUE(sf::is_semi_unambiguous(xor_eve));
    EXPECT_FALSE(sf::is_unambiguous(Dist3::from_function(
        2, 2, 1, [](auto, auto, auto) { return 0.25; })));
}

TEST(UbiPd, Examples) {
    EXPECT_EQ(sf::is_ubi_pd(sf::instances::two_block_copies()), Verdict::yes);
    EXPECT_EQ(sf::is_ubi_pd(sf::instances::eve_advantage(0.25)), Verdict::yes);
    EXPECT_EQ(sf::is_ubi_pd(sf::instances::block_flip()), Verdict::inconclusive);
    EXPECT_EQ(sf::is_ubi_pd(noisy_copy()), Verdict::no);
}

TEST(UbiPd, CanonicalMessageOnBlockFlip) {
    auto r = sf::check_ubi_pd(sf::instances::block_flip());
    EXPECT_TRUE(r.block_independent);
    EXPECT_FALSE(r.extended_ubi);
    EXPECT_EQ(r.message.count(), 1u);
}

TEST(UbiPdDown, UbiGivesIdentityChannelLast) {
    auto r = sf::is_ubi_pd_down(sf::instances::two_block_copies());
    ASSERT_TRUE(r.found());
    EXPECT_EQ(*r.assignment, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(r.channels_tested, 2u);
}

TEST(UbiPdDown, EveAdvantageTriesMergeThenIdentity) {
    // The merge makes p_XYZbar UBI, but Z still carries information about
    // the block given Zbar, so the search moves on to the identity.
    auto d = sf::instances::eve_advantage(0.25);
    const std::size_t merge[] = {0, 0};
    EXPECT_EQ(sf::is_ubi_pd(sf::apply_channel_z(d, sf::Channel::deterministic(merge))), Verdict::yes);
    auto r = sf::is_ubi_pd_down(d);
    ASSERT_TRUE(r.found());
    EXPECT_EQ(r.channels_tested, 2u);
    EXPECT_EQ(*r.assignment, (std::vector<std::size_t>{0, 1}));
}

TEST(UbiPdDown, SplitSymbolNeedsTheMerge) {
    auto d = sf::instances::split_eve_symbol(0.25);
    auto r = sf::is_ubi_pd_down(d);
    ASSERT_TRUE(r.found());
    const auto &f = *r.assignment;
    EXPECT_EQ(f[0], f[1]);
    auto merged = sf::apply_channel_z(d, r.channel());
    EXPECT_EQ(sf::is_ubi_pd(merged), Verdict::yes);
}

TEST(UbiPdDown, BudgetExhaustionIsInconclusive) {
    auto r = sf::is_ubi_pd_down(noisy_copy(), sf::kEntropyTol, 1);
    EXPECT_FALSE(r.found());
    EXPECT_EQ(r.channels_tested, 1u);
    auto big = oracle::random_dist(*std::make_unique<std::mt19937_64>(5), 2, 2, 5, 0.0);
    auto r2 = sf::is_ubi_pd_down(big, sf::kEntropyTol, 3);
    EXPECT_FALSE(r2.found());
    EXPECT_TRUE(r2.budget_exhausted);
    EXPECT_EQ(r2.channels_tested, 3u);
}

TEST(UbiPdDown, EnumeratesEveryPartitionOnce) {
    // With an unsatisfiable instance the search walks all Bell(n) channels.
    auto d = oracle::random_dist(*std::make_unique<std::mt19937_64>(6), 2, 2, 4, 0.0);
    auto r = sf::is_ubi_pd_down(d);
    if (!r.found()) {
        EXPECT_EQ(r.channels_tested, oracle::set_partitions(4).size());
    }
}

TEST(Classify, TwoBlockCopies) {
    auto r = sf::classify(sf::instances::two_block_copies());
    EXPECT_EQ(r.bi, Verdict::yes);
    EXPECT_EQ(r.ubi, Verdict::yes);
    EXPECT_EQ(r.ubi_pd, Verdict::yes);
    EXPECT_EQ(r.ubi_pd_down, Verdict::yes);
    EXPECT_EQ(r.semi_unambiguous, Verdict::yes);
    EXPECT_EQ(r.unambiguous, Verdict::yes);
}

TEST(Classify, EveAdvantageIsNotSemiUnambiguous) {
    auto r = sf::classify(sf::instances::eve_advantage(0.25));
    EXPECT_EQ(r.ubi, Verdict::yes);
    EXPECT_EQ(r.semi_unambiguous, Verdict::no);
    EXPECT_EQ(r.unambiguous, Verdict::no);
}

TEST(Classify, IndependentTriple) {
    auto r = sf::classify(Dist3(2, 2, 2, std::vector<double>(8, 0.125)));
    EXPECT_EQ(r.bi, Verdict::yes);
    EXPECT_EQ(r.ubi, Verdict::yes);
    EXPECT_EQ(r.semi_unambiguous, Verdict::no);
}

TEST(Classify, NestingHoldsOnRandomDistributions) {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 300; ++t) {
        auto d = oracle::random_small_dist(rng, 3);
        sf::ClassifyOptions opt;
        opt.always_search = (t % 3 == 0);
        auto r = sf::classify(d, opt);
        EXPECT_TRUE(sf::nesting_violations(r).empty());
        if (r.ubi == Verdict::yes) {
            EXPECT_EQ(r.ubi_pd, Verdict::yes);
            EXPECT_EQ(r.ubi_pd_down, Verdict::yes);
        }
        if (r.unambiguous == Verdict::yes) {
            EXPECT_EQ(r.semi_unambiguous, Verdict::yes);
        }
        if (opt.always_search && r.ubi_pd == Verdict::yes) {
            EXPECT_TRUE(r.pd_down.found());
        }
    }
}
