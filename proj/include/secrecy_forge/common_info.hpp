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

/// \file common_info.hpp
/// Gacs-Korner maximal common partitioning and its conditional version.
///
/// The maximal common partitioning of p(x,y) is the set of connected
/// components of the bipartite support graph: vertices are the symbols of
/// positive marginal probability, with an edge x--y whenever p(x,y) is in the
/// support. Any coarser grouping is a common partitioning; nothing finer is.
/// Blocks are ordered by their smallest x.
///
/// The conditional version computes one partitioning per Eve symbol z and
/// merges block instances (z,i), (z',j) that share an x or a y. Labels of
/// the merged components are a function of x alone and of y alone; they form
/// a valid maximal conditional common function iff no two blocks of the same
/// z fall in one component (`per_z_injective`).

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "secrecy_forge/config.hpp"
#include "secrecy_forge/dist.hpp"

namespace secrecy_forge {

namespace detail {

class DisjointSets {
  public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return;
        }
        if (rank_[a] < rank_[b]) {
            std::swap(a, b);
        }
        parent_[b] = a;
        if (rank_[a] == rank_[b]) {
            ++rank_[a];
        }
    }

  private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

}  // namespace detail

struct CommonBlock {
    std::vector<std::size_t> xs;
    std::vector<std::size_t> ys;

    friend bool operator==(const CommonBlock &, const CommonBlock &) = default;
};

struct CommonPartition {
    std::vector<CommonBlock> blocks;
    /// Block of each x; empty for symbols of zero marginal probability.
    std::vector<std::optional<std::size_t>> block_of_x;
    std::vector<std::optional<std::size_t>> block_of_y;

    std::size_t size() const noexcept { return blocks.size(); }
};

/// Maximal common partitioning of the support pattern `in_support(a, b)`
/// over an da x db grid.
template <class SupportFn>
CommonPartition maximal_common_partition(std::size_t da, std::size_t db, SupportFn &&in_support) {
    std::vector<bool> live_a(da, false);
    std::vector<bool> live_b(db, false);
    detail::DisjointSets sets(da + db);
    for (std::size_t a = 0; a < da; ++a) {
        for (std::size_t b = 0; b < db; ++b) {
            if (in_support(a, b)) {
                live_a[a] = true;
                live_b[b] = true;
                sets.unite(a, da + b);
            }
        }
    }

    CommonPartition part;
    part.block_of_x.assign(da, std::nullopt);
    part.block_of_y.assign(db, std::nullopt);
    std::vector<std::optional<std::size_t>> block_of_root(da + db);
    for (std::size_t a = 0; a < da; ++a) {
        if (!live_a[a]) {
            continue;
        }
        auto root = sets.find(a);
        if (!block_of_root[root]) {
            block_of_root[root] = part.blocks.size();
            part.blocks.emplace_back();
        }
        part.block_of_x[a] = *block_of_root[root];
        part.blocks[*block_of_root[root]].xs.push_back(a);
    }
    for (std::size_t b = 0; b < db; ++b) {
        if (!live_b[b]) {
            continue;
        }
        auto block = *block_of_root[sets.find(da + b)];
        part.block_of_y[b] = block;
        part.blocks[block].ys.push_back(b);
    }
    return part;
}

inline CommonPartition maximal_common_partition(const Dist2 &d) {
    return maximal_common_partition(
        d.da(), d.db(), [&](std::size_t a, std::size_t b) { return d(a, b) > kSupportEpsilon; });
}

/// Probability of each block under `d`.
inline std::vector<double> block_probabilities(const Dist2 &d, const CommonPartition &part) {
    std::vector<double> probs(part.size(), 0.0);
    for (std::size_t a = 0; a < d.da(); ++a) {
        if (!part.block_of_x[a]) {
            continue;
        }
        for (std::size_t b = 0; b < d.db(); ++b) {
            probs[*part.block_of_x[a]] += d(a, b);
        }
    }
    return probs;
}

/// H(J_XY), the Gacs-Korner common information.
inline double common_information(const Dist2 &d) {
    auto part = maximal_common_partition(d);
    return entropy(block_probabilities(d, part));
}

struct CondCommonFunction {
    /// Maximal common partitioning of p(x,y|Z=z); empty when p_Z(z) = 0.
    std::vector<std::optional<CommonPartition>> per_z;
    /// global_labels[z][block] is the merge-component label of that block.
    std::vector<std::vector<std::size_t>> global_labels;
    std::size_t label_count = 0;
    bool per_z_injective = true;

    /// Per-z block index of (x,y,z), if (x,y) lies in a block given z.
    std::optional<std::size_t> block_at(std::size_t x, std::size_t y, std::size_t z) const {
        if (!per_z.at(z)) {
            return std::nullopt;
        }
        const auto &part = *per_z[z];
        auto bx = part.block_of_x.at(x);
        if (!bx || part.block_of_y.at(y) != bx) {
            return std::nullopt;
        }
        return bx;
    }

    std::optional<std::size_t> label_at(std::size_t x, std::size_t y, std::size_t z) const {
        auto b = block_at(x, y, z);
        if (!b) {
            return std::nullopt;
        }
        return global_labels[z][*b];
    }

    /// Largest number of blocks over all z.
    std::size_t max_blocks() const {
        std::size_t m = 0;
        for (const auto &p : per_z) {
            if (p) {
                m = std::max(m, p->size());
            }
        }
        return m;
    }
};

inline CondCommonFunction conditional_common_function(const Dist3 &d) {
    CondCommonFunction out;
    const auto pz = d.pz();
    out.per_z.resize(d.dz());
    out.global_labels.resize(d.dz());

    std::vector<std::size_t> offset(d.dz() + 1, 0);
    for (std::size_t z = 0; z < d.dz(); ++z) {
        if (pz[z] > kSupportEpsilon) {
            out.per_z[z] = maximal_common_partition(conditional_xy_given_z(d, z));
        }
        offset[z + 1] = offset[z] + (out.per_z[z] ? out.per_z[z]->size() : 0);
    }

    // Merge instances that share an x (or a y) across different z.
    detail::DisjointSets sets(offset.back());
    std::vector<std::optional<std::size_t>> first_x(d.dx());
    std::vector<std::optional<std::size_t>> first_y(d.dy());
    for (std::size_t z = 0; z < d.dz(); ++z) {
        if (!out.per_z[z]) {
            continue;
        }
        const auto &part = *out.per_z[z];
        for (std::size_t b = 0; b < part.size(); ++b) {
            const std::size_t inst = offset[z] + b;
            for (auto x : part.blocks[b].xs) {
                if (first_x[x]) {
                    sets.unite(*first_x[x], inst);
                } else {
                    first_x[x] = inst;
                }
            }
            for (auto y : part.blocks[b].ys) {
                if (first_y[y]) {
                    sets.unite(*first_y[y], inst);
                } else {
                    first_y[y] = inst;
                }
            }
        }
    }

    std::vector<std::optional<std::size_t>> label_of_root(offset.back());
    for (std::size_t z = 0; z < d.dz(); ++z) {
        if (!out.per_z[z]) {
            continue;
        }
        const auto n = out.per_z[z]->size();
        out.global_labels[z].resize(n);
        for (std::size_t b = 0; b < n; ++b) {
            auto root = sets.find(offset[z] + b);
            if (!label_of_root[root]) {
                label_of_root[root] = out.label_count++;
            }
            out.global_labels[z][b] = *label_of_root[root];
        }
        auto labels = out.global_labels[z];
        std::sort(labels.begin(), labels.end());
        if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
            out.per_z_injective = false;
        }
    }
    return out;
}

/// H(J_XY|Z | Z) = sum_z p(z) H(block distribution of p(x,y|z)).
inline double cond_common_entropy(const Dist3 &d) {
    const auto pz = d.pz();
    double h = 0.0;
    for (std::size_t z = 0; z < d.dz(); ++z) {
        if (pz[z] <= kSupportEpsilon) {
            continue;
        }
        auto cond = conditional_xy_given_z(d, z);
        auto part = maximal_common_partition(cond);
        h += pz[z] * entropy(block_probabilities(cond, part));
    }
    return h;
}

/// Sparse law of (X, Y, Z, J) where J is the per-z block index of (x,y).
/// Entries outside every block carry probability at most kSupportEpsilon
/// and get label 0.
inline Outcomes with_block_label(const Dist3 &d, const CondCommonFunction &ccf) {
    return Outcomes::from(d).extend([&](const Outcomes::Row &r) {
        return ccf.block_at(r[X], r[Y], r[Z]).value_or(0);
    });
}

}  // namespace secrecy_forge
