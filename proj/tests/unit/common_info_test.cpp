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
#include "secrecy_forge/common_info.hpp"
#include "secrecy_forge/instances.hpp"
#include "support/oracles.hpp"

namespace sf = secrecy_forge;
using sf::Dist2;
using sf::Dist3;

namespace {

Dist2 random_pair(std::mt19937_64 &rng, std::size_t da, std::size_t db) {
    auto d = oracle::random_dist(rng, da, db, 1, 0.6);
    return sf::marginal_pair(d, sf::X, sf::Y);
}

void expect_partition_invariants(const Dist2 &d, const sf::CommonPartition &part) {
    std::vector<int> seen_x(d.da(), 0), seen_y(d.db(), 0);
    auto px = d.marginal_a(), py = d.marginal_b();
    for (std::size_t b = 0; b < part.size(); ++b) {
        const auto &blk = part.blocks[b];
        ASSERT_FALSE(blk.xs.empty());
        ASSERT_FALSE(blk.ys.empty());
        for (auto x : blk.xs) {
            ++seen_x[x];
            EXPECT_GT(px[x], 0.0);
            EXPECT_EQ(part.block_of_x[x], b);
        }
        for (auto y : blk.ys) {
            ++seen_y[y];
            EXPECT_GT(py[y], 0.0);
            EXPECT_EQ(part.block_of_y[y], b);
        }
    }
    for (auto c : seen_x) EXPECT_LE(c, 1);
    for (auto c : seen_y) EXPECT_LE(c, 1);
    for (std::size_t x = 0; x < d.da(); ++x)
        for (std::size_t y = 0; y < d.db(); ++y)
            if (d(x, y) > sf::kSupportEpsilon) {
                ASSERT_TRUE(part.block_of_x[x].has_value());
                EXPECT_EQ(part.block_of_x[x], part.block_of_y[y]);
            }
    // Canonical order: ascending smallest x.
    for (std::size_t b = 1; b < part.size(); ++b) {
        EXPECT_LT(part.blocks[b - 1].xs.front(), part.blocks[b].xs.front());
    }
}

}  // namespace

TEST(MaximalCommonPartition, CopiedBit) {
    Dist2 d(2, 2, {0.5, 0.0, 0.0, 0.5});
    auto part = sf::maximal_common_partition(d);
    ASSERT_EQ(part.size(), 2u);
    EXPECT_EQ(part.blocks[0], (sf::CommonBlock{{0}, {0}}));
    EXPECT_EQ(part.blocks[1], (sf::CommonBlock{{1}, {1}}));
}

TEST(MaximalCommonPartition, IndependentFullSupportIsOneBlock) {
    Dist2 d(2, 3, std::vector<double>(6, 1.0 / 6.0));
    EXPECT_EQ(sf::maximal_common_partition(d).size(), 1u);
}

TEST(MaximalCommonPartition, ChainConnectsEverything) {
    Dist2 d(2, 2, {1.0 / 3, 1.0 / 3, 0.0, 1.0 / 3});
    EXPECT_EQ(sf::maximal_common_partition(d).size(), 1u);
    EXPECT_EQ(oracle::brute_force_common_blocks(d), 1u);
}

TEST(MaximalCommonPartition, MatchesClosureAndExhaustiveSearch) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    for (int t = 0; t < 300; ++t) {
        auto d = random_pair(rng, dim(rng), dim(rng));
        auto part = sf::maximal_common_partition(d);
        expect_partition_invariants(d, part);
        EXPECT_EQ(part.size(), oracle::brute_force_common_blocks(d));
        auto comp = oracle::support_components(d);
        for (std::size_t x = 0; x < d.da(); ++x) {
            for (std::size_t x2 = 0; x2 < d.da(); ++x2) {
                if (comp.x_rep[x] < 0 || comp.x_rep[x2] < 0) continue;
                EXPECT_EQ(comp.x_rep[x] == comp.x_rep[x2], part.block_of_x[x] == part.block_of_x[x2]);
            }
        }
    }
}

TEST(CommonInformation, Examples) {
    auto copies = sf::marginal_pair(sf::instances::two_block_copies(), sf::X, sf::Y);
    EXPECT_NEAR(sf::common_information(copies), 2.0, 1e-15);
    Dist2 indep(2, 2, std::vector<double>(4, 0.25));
    EXPECT_EQ(sf::common_information(indep), 0.0);
    Dist2 mixed(2, 3, {0.5, 0.0, 0.0, 0.0, 0.25, 0.25});
    auto part = sf::maximal_common_partition(mixed);
    ASSERT_EQ(part.size(), 2u);
    EXPECT_EQ(part.blocks[1].ys, (std::vector<std::size_t>{1, 2}));
    EXPECT_NEAR(sf::common_information(mixed), 1.0, 1e-15);
}

TEST(CommonInformation, BoundedByMarginalEntropies) {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 300; ++t) {
        auto d = random_pair(rng, 1 + t % 4, 1 + (t / 4) % 4);
        double ci = sf::common_information(d);
        EXPECT_GE(ci, 0.0);
        EXPECT_LE(ci, std::min(sf::entropy(d.marginal_a()), sf::entropy(d.marginal_b())) + 1e-12);
    }
}

TEST(ConditionalCommonFunction, TwoBlockCopies) {
    auto ccf = sf::conditional_common_function(sf::instances::two_block_copies());
    ASSERT_TRUE(ccf.per_z[0] && ccf.per_z[1]);
    EXPECT_EQ(ccf.per_z[0]->size(), 2u);
    EXPECT_EQ(ccf.per_z[1]->size(), 2u);
    EXPECT_EQ(ccf.label_count, 4u);
    EXPECT_TRUE(ccf.per_z_injective);
    EXPECT_EQ(ccf.label_at(0, 0, 0), 0u);
    EXPECT_EQ(ccf.label_at(3, 3, 1), 3u);
}

TEST(ConditionalCommonFunction, IndependentTripleMergesToOneLabel) {
    auto d = Dist3(2, 2, 2, std::vector<double>(8, 0.125));
    auto ccf = sf::conditional_common_function(d);
    EXPECT_EQ(ccf.label_count, 1u);
    EXPECT_TRUE(ccf.per_z_injective);
    EXPECT_EQ(ccf.max_blocks(), 1u);
}

TEST(ConditionalCommonFunction, EveAdvantageLabelsAgreeAcrossZ) {
    auto ccf = sf::conditional_common_function(sf::instances::eve_advantage(0.25));
    EXPECT_EQ(ccf.per_z[0]->size(), 2u);
    EXPECT_EQ(ccf.per_z[1]->size(), 2u);
    EXPECT_TRUE(ccf.per_z_injective);
    EXPECT_EQ(ccf.label_at(0, 0, 0), ccf.label_at(0, 0, 1));
    EXPECT_EQ(ccf.label_at(1, 1, 0), ccf.label_at(1, 1, 1));
}

TEST(ConditionalCommonFunction, BlockFlipIsNotInjective) {
    auto ccf = sf::conditional_common_function(sf::instances::block_flip());
    EXPECT_FALSE(ccf.per_z_injective);
    EXPECT_EQ(ccf.label_count, 1u);
}

TEST(CondCommonEntropy, Examples) {
    EXPECT_NEAR(sf::cond_common_entropy(sf::instances::two_block_copies()), 1.0, 1e-15);
    EXPECT_EQ(sf::cond_common_entropy(Dist3(2, 2, 2, std::vector<double>(8, 0.125))), 0.0);
    EXPECT_NEAR(sf::cond_common_entropy(sf::instances::eve_advantage(0.0)), 0.5, 1e-15);
}

TEST(CondCommonEntropy, InvariantUnderLabelShuffling) {
    // Entropy of the per-z block law computed with randomly permuted labels.
    std::mt19937_64 rng(23);
    for (int t = 0; t < 100; ++t) {
        auto d = oracle::random_small_dist(rng, 3);
        auto ccf = sf::conditional_common_function(d);
        double h = 0.0;
        auto pz = d.pz();
        for (std::size_t z = 0; z < d.dz(); ++z) {
            if (!ccf.per_z[z]) continue;
            std::vector<std::size_t> perm(ccf.per_z[z]->size());
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            std::shuffle(perm.begin(), perm.end(), rng);
            std::vector<double> mass(perm.size(), 0.0);
            for (std::size_t x = 0; x < d.dx(); ++x)
                for (std::size_t y = 0; y < d.dy(); ++y)
                    if (auto b = ccf.block_at(x, y, z)) mass[perm[*b]] += d(x, y, z) / pz[z];
            h += pz[z] * oracle::h(mass);
        }
        EXPECT_NEAR(sf::cond_common_entropy(d), h, 1e-12);
    }
}

TEST(CondCommonEntropy, AdditiveOnUbiSquares) {
    std::mt19937_64 rng(24);
    int found = 0;
    for (int t = 0; t < 300 && found < 25; ++t) {
        auto d = oracle::random_small_dist(rng, 3);
        if (!sf::is_ubi(d)) continue;
        ++found;
        EXPECT_NEAR(sf::cond_common_entropy(sf::product_power(d, 2)), 2 * sf::cond_common_entropy(d), 1e-9);
    }
    EXPECT_GT(found, 5);
}
