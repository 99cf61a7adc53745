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

// Independent reference computations for the test suites. Everything here is
// written from first principles (dense loops, closures, enumeration) and
// deliberately shares no code paths with the library beyond the data types.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <cstddef>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "secrecy_forge/dist.hpp"
#include "secrecy_forge/qlinalg.hpp"

namespace oracle {

using secrecy_forge::CMat;
using secrecy_forge::CVec;
using secrecy_forge::Dist2;
using secrecy_forge::Dist3;

/// Random distribution; each cell is zeroed with probability `sparsity`.
inline Dist3 random_dist(std::mt19937_64 &rng, std::size_t dx, std::size_t dy, std::size_t dz,
                         double sparsity = 0.5) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(dx * dy * dz);
    double total = 0.0;
    for (auto &e : v) {
        e = u(rng) < sparsity ? 0.0 : u(rng);
        total += e;
    }
    if (total == 0.0) {
        v[0] = total = 1.0;
    }
    for (auto &e : v) {
        e /= total;
    }
    return Dist3(dx, dy, dz, std::move(v), 1e-9);
}

/// Random distribution with a random number of symbols per variable.
inline Dist3 random_small_dist(std::mt19937_64 &rng, std::size_t max_dim) {
    std::uniform_int_distribution<std::size_t> dim(1, max_dim);
    std::uniform_real_distribution<double> sp(0.2, 0.8);
    const auto dx = dim(rng), dy = dim(rng), dz = dim(rng);
    return random_dist(rng, dx, dy, dz, sp(rng));
}

/// Entropy in bits straight from the definition.
inline double h(const std::vector<double> &p) {
    double s = 0.0;
    for (double v : p) {
        if (v > 0.0) {
            s -= v * std::log(v) / std::log(2.0);
        }
    }
    return s;
}

/// I(X:Y|Z) by dense triple loops.
inline double cmi_xy_given_z(const Dist3 &d) {
    double total = 0.0;
    for (std::size_t z = 0; z < d.dz(); ++z) {
        double pz = 0.0;
        std::vector<double> px(d.dx(), 0.0), py(d.dy(), 0.0);
        for (std::size_t x = 0; x < d.dx(); ++x) {
            for (std::size_t y = 0; y < d.dy(); ++y) {
                pz += d(x, y, z);
                px[x] += d(x, y, z);
                py[y] += d(x, y, z);
            }
        }
        for (std::size_t x = 0; x < d.dx(); ++x) {
            for (std::size_t y = 0; y < d.dy(); ++y) {
                double p = d(x, y, z);
                if (p > 0.0) {
                    total += p * std::log2(p * pz / (px[x] * py[y]));
                }
            }
        }
    }
    return total;
}

/// Connected components of the support graph via a boolean transitive
/// closure (Warshall). Returns, for each x, the smallest x in its component
/// (-1 for symbols off the support), and likewise for y (keyed by smallest
/// x of the component).
struct Components {
    std::vector<int> x_rep;
    std::vector<int> y_rep;
};

inline Components support_components(const Dist2 &d, double eps = 1e-12) {
    const std::size_t n = d.da() + d.db();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < d.da(); ++a) {
        for (std::size_t b = 0; b < d.db(); ++b) {
            if (d(a, b) > eps) {
                r[a][d.da() + b] = r[d.da() + b][a] = true;
                r[a][a] = r[d.da() + b][d.da() + b] = true;
            }
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!r[i][k]) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (r[k][j]) {
                    r[i][j] = true;
                }
            }
        }
    }
    Components c;
    auto rep = [&](std::size_t v) {
        for (std::size_t a = 0; a < d.da(); ++a) {
            if (r[v][a]) {
                return static_cast<int>(a);
            }
        }
        return -1;
    };
    for (std::size_t a = 0; a < d.da(); ++a) {
        c.x_rep.push_back(rep(a));
    }
    for (std::size_t b = 0; b < d.db(); ++b) {
        c.y_rep.push_back(rep(d.da() + b));
    }
    return c;
}

/// All set partitions of {0..n-1}, as block labels per element.
inline std::vector<std::vector<std::size_t>> set_partitions(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> a(n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
        if (i == n) {
            out.push_back(a);
            return;
        }
        for (std::size_t v = 0; v <= used && v < n; ++v) {
            a[i] = v;
            rec(i + 1, std::max(used, v + 1));
        }
    };
    if (n == 0) {
        out.push_back({});
    } else {
        rec(0, 0);
    }
    return out;
}

/// Finest common partitioning by exhaustive search over partitions of the
/// live x symbols: the partition of x with the most blocks such that a
/// function of y alone agrees with it on the support. Returns the number of
/// blocks.
inline std::size_t brute_force_common_blocks(const Dist2 &d, double eps = 1e-12) {
    std::vector<std::size_t> live;
    for (std::size_t a = 0; a < d.da(); ++a) {
        for (std::size_t b = 0; b < d.db(); ++b) {
            if (d(a, b) > eps) {
                live.push_back(a);
                break;
            }
        }
    }
    std::size_t best = 0;
    for (const auto &lab : set_partitions(live.size())) {
        std::map<std::size_t, std::size_t> g;  // y -> label
        bool ok = true;
        for (std::size_t i = 0; i < live.size() && ok; ++i) {
            for (std::size_t b = 0; b < d.db(); ++b) {
                if (d(live[i], b) <= eps) {
                    continue;
                }
                auto [it, fresh] = g.emplace(b, lab[i]);
                if (!fresh && it->second != lab[i]) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            std::set<std::size_t> used(lab.begin(), lab.end());
            best = std::max(best, used.size());
        }
    }
    return best;
}

/// Kronecker product by explicit index arithmetic.
inline CMat kron(const CMat &a, const CMat &b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
        }
    }
    return out;
}

inline CMat random_density(std::mt19937_64 &rng, std::size_t n, std::size_t rank = 0) {
    std::normal_distribution<double> g(0.0, 1.0);
    if (rank == 0) {
        rank = n;
    }
    CMat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rank));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = {g(rng), g(rng)};
        }
    }
    CMat rho = m * m.adjoint();
    return rho / rho.trace().real();
}

inline CMat random_unitary(std::mt19937_64 &rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = {g(rng), g(rng)};
        }
    }
    Eigen::HouseholderQR<CMat> qr(m);
    return qr.householderQ();
}

/// Binary entropy from the definition.
inline double hb(double p) { return h({p, 1.0 - p}); }

}  // namespace oracle
