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

/// \file instances.hpp
/// Named distributions used by the reproduction reports, the tests and the
/// sample files.

#pragma once

#include <numbers>
#include <stdexcept>
#include <vector>

#include "secrecy_forge/dist.hpp"
#include "secrecy_forge/embed.hpp"

namespace secrecy_forge::instances {

/// p(000) = p(110) = 1/4, p(001) = lambda/2, p(111) = (1-lambda)/2.
inline Dist3 eve_advantage(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::domain_error("lambda must lie in [0,1]");
    }
    std::vector<double> v(8, 0.0);
    v[0] = 0.25;                 // (0,0,0)
    v[6] = 0.25;                 // (1,1,0)
    v[1] = lambda / 2.0;         // (0,0,1)
    v[7] = (1.0 - lambda) / 2.0; // (1,1,1)
    return Dist3(2, 2, 2, std::move(v));
}

/// Computational-basis statistics of sqrt(1/2)(|00> + |1+>) with a trivial Eve.
inline Dist3 ab_advantage() {
    return Dist3(2, 2, 1, {0.5, 0.0, 0.25, 0.25});
}

/// X = Y uniform on {0..3}, Z = floor(X/2).
inline Dist3 two_block_copies() {
    return Dist3::from_function(4, 4, 2, [](std::size_t x, std::size_t y, std::size_t z) {
        return (x == y && z == x / 2) ? 0.25 : 0.0;
    });
}

/// eve_advantage(lambda) with z = 0 split into two Eve symbols carrying
/// identical conditionals. UBI-PD-down needs the merge of those symbols.
inline Dist3 split_eve_symbol(double lambda) {
    auto d = eve_advantage(lambda);
    return Dist3::from_function(2, 2, 3, [&](std::size_t x, std::size_t y, std::size_t z) {
        return z < 2 ? d(x, y, 0) / 2.0 : d(x, y, 1);
    });
}

/// p(0,0,0) = p(1,1,0) = p(0,1,1) = p(1,0,1) = 1/4: the block labels flip with z.
inline Dist3 block_flip() {
    return Dist3::from_function(2, 2, 2, [](std::size_t x, std::size_t y, std::size_t z) {
        return ((x == y) == (z == 0)) ? 0.25 : 0.0;
    });
}

/// Statistics of the three-block state used to separate the qqq, cqq and
/// ccq key rates: (|00>+|11>)|0> + (|+2>+|-3>)|1> + (|2+>+|3->)|2>, over
/// sqrt(6).
inline Dist3 one_sided_gap() {
    return Dist3::from_function(4, 4, 3, [](std::size_t x, std::size_t y, std::size_t z) {
        switch (z) {
            case 0:
                return (x == y && x < 2) ? 1.0 / 6.0 : 0.0;
            case 1:
                return (x < 2 && y >= 2) ? 1.0 / 12.0 : 0.0;
            default:
                return (x >= 2 && y < 2) ? 1.0 / 12.0 : 0.0;
        }
    });
}

/// Phases reproducing the |-> components of one_sided_gap's state.
inline PhaseAssignment one_sided_gap_phases() {
    PhaseAssignment ph(4, 4, 3);
    ph.set(1, 3, 1, std::numbers::pi);
    ph.set(3, 1, 2, std::numbers::pi);
    return ph;
}

}  // namespace secrecy_forge::instances
