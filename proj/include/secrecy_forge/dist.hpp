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

/// \file dist.hpp
/// Finite probability distributions: validation, marginals, conditionals,
/// channels on Eve's variable, i.i.d. powers and Shannon quantities.
///
/// All entropies are in bits with the convention 0 log 0 = 0.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "secrecy_forge/config.hpp"

namespace secrecy_forge {

/// What went wrong when a table failed to be a probability distribution.
struct Violation {
    enum class Kind { dims, negative, sum };
    Kind kind;
    std::string message;
    double magnitude = 0.0;
};

class DistributionError : public std::invalid_argument {
  public:
    explicit DistributionError(Violation v)
        : std::invalid_argument(v.message), violation_(std::move(v)) {}
    const Violation &violation() const noexcept { return violation_; }

  private:
    Violation violation_;
};

/// Checks that `values` is a pmf over the grid `dims` (row-major).
inline std::optional<Violation> validate(std::span<const std::size_t> dims,
                                         std::span<const double> values,
                                         double tol = kValidationTol) {
    if (dims.empty()) {
        return Violation{Violation::Kind::dims, "no dimensions given", 0.0};
    }
    std::size_t expected = 1;
    for (auto d : dims) {
        if (d == 0) {
            return Violation{Violation::Kind::dims, "zero-sized alphabet", 0.0};
        }
        expected *= d;
    }
    if (expected != values.size()) {
        return Violation{Violation::Kind::dims,
                         "dims describe " + std::to_string(expected) + " entries but " +
                             std::to_string(values.size()) + " were given",
                         static_cast<double>(values.size()) - static_cast<double>(expected)};
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
            return Violation{Violation::Kind::negative,
                             "negative entry " + std::to_string(values[i]) + " at flat index " +
                                 std::to_string(i),
                             std::abs(values[i])};
        }
        sum += values[i];
    }
    if (std::abs(sum - 1.0) > tol) {
        return Violation{Violation::Kind::sum,
                         "entries sum to " + std::to_string(sum) + " (off by " +
                             std::to_string(sum - 1.0) + ")",
                         sum - 1.0};
    }
    return std::nullopt;
}

/// Shannon entropy of a list of non-negative weights (in bits). Weights are
/// used as given; callers pass normalized vectors.
inline double entropy(std::span<const double> p) {
    double h = 0.0;
    for (double v : p) {
        if (v > 0.0) {
            h -= v * std::log2(v);
        }
    }
    return h < 0.0 ? 0.0 : h;
}

inline double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("binary_entropy argument outside [0,1]: " + std::to_string(x));
    }
    const double pair[2] = {x, 1.0 - x};
    return entropy(pair);
}

/// Dense joint pmf over a grid of finite alphabets, stored row-major with
/// the first variable most significant.
class Pmf {
  public:
    Pmf() = default;

    Pmf(std::vector<std::size_t> dims, std::vector<double> values, double tol = kValidationTol)
        : dims_(std::move(dims)), p_(std::move(values)) {
        if (auto v = validate(dims_, p_, tol)) {
            throw DistributionError(*v);
        }
    }

    /// Skips validation; for results of operations that preserve validity.
    static Pmf unchecked(std::vector<std::size_t> dims, std::vector<double> values) {
        Pmf out;
        out.dims_ = std::move(dims);
        out.p_ = std::move(values);
        return out;
    }

    std::size_t rank() const noexcept { return dims_.size(); }
    const std::vector<std::size_t> &dims() const noexcept { return dims_; }
    std::size_t dim(std::size_t var) const { return dims_.at(var); }
    std::size_t size() const noexcept { return p_.size(); }
    std::span<const double> values() const noexcept { return p_; }
    double operator[](std::size_t flat) const { return p_[flat]; }

    std::size_t flat_index(std::span<const std::size_t> idx) const {
        std::size_t flat = 0;
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            flat = flat * dims_[k] + idx[k];
        }
        return flat;
    }

    std::vector<std::size_t> unflatten(std::size_t flat) const {
        std::vector<std::size_t> idx(dims_.size());
        for (std::size_t k = dims_.size(); k-- > 0;) {
            idx[k] = flat % dims_[k];
            flat /= dims_[k];
        }
        return idx;
    }

    /// Marginal on the listed variables, in the order listed.
    Pmf marginal(std::span<const std::size_t> keep) const {
        if (keep.empty()) {
            throw std::invalid_argument("marginal: empty variable set");
        }
        std::vector<std::size_t> out_dims;
        for (auto v : keep) {
            if (v >= rank()) {
                throw std::out_of_range("marginal: variable index out of range");
            }
            if (std::count(keep.begin(), keep.end(), v) > 1) {
                throw std::invalid_argument("marginal: repeated variable");
            }
            out_dims.push_back(dims_[v]);
        }
        std::size_t out_size = 1;
        for (auto d : out_dims) {
            out_size *= d;
        }
        std::vector<double> out(out_size, 0.0);
        std::vector<std::size_t> idx(rank(), 0);
        for (std::size_t flat = 0; flat < p_.size(); ++flat) {
            std::size_t o = 0;
            for (std::size_t k = 0; k < keep.size(); ++k) {
                o = o * out_dims[k] + idx[keep[k]];
            }
            out[o] += p_[flat];
            advance(idx);
        }
        return unchecked(std::move(out_dims), std::move(out));
    }

    double entropy() const { return secrecy_forge::entropy(p_); }

  private:
    void advance(std::vector<std::size_t> &idx) const {
        for (std::size_t k = idx.size(); k-- > 0;) {
            if (++idx[k] < dims_[k]) {
                return;
            }
            idx[k] = 0;
        }
    }

    std::vector<std::size_t> dims_;
    std::vector<double> p_;
};

/// Variable positions in a tripartite distribution.
enum Var : std::size_t { X = 0, Y = 1, Z = 2 };

/// Bipartite pmf p(a,b).
class Dist2 {
  public:
    Dist2(std::size_t da, std::size_t db, std::vector<double> values, double tol = kValidationTol)
        : pmf_({da, db}, std::move(values), tol) {}
    explicit Dist2(Pmf pmf) : pmf_(std::move(pmf)) {
        if (pmf_.rank() != 2) {
            throw std::invalid_argument("Dist2 needs a rank-2 pmf");
        }
    }

    std::size_t da() const { return pmf_.dim(0); }
    std::size_t db() const { return pmf_.dim(1); }
    double operator()(std::size_t a, std::size_t b) const { return pmf_[a * db() + b]; }
    const Pmf &pmf() const noexcept { return pmf_; }

    std::vector<double> marginal_a() const {
        std::vector<double> m(da(), 0.0);
        for (std::size_t a = 0; a < da(); ++a) {
            for (std::size_t b = 0; b < db(); ++b) {
                m[a] += (*this)(a, b);
            }
        }
        return m;
    }
    std::vector<double> marginal_b() const {
        std::vector<double> m(db(), 0.0);
        for (std::size_t a = 0; a < da(); ++a) {
            for (std::size_t b = 0; b < db(); ++b) {
                m[b] += (*this)(a, b);
            }
        }
        return m;
    }

  private:
    Pmf pmf_;
};

/// Tripartite pmf p(x,y,z), x major and z minor.
class Dist3 {
  public:
    Dist3(std::size_t dx, std::size_t dy, std::size_t dz, std::vector<double> values,
          double tol = kValidationTol)
        : pmf_({dx, dy, dz}, std::move(values), tol) {}
    explicit Dist3(Pmf pmf) : pmf_(std::move(pmf)) {
        if (pmf_.rank() != 3) {
            throw std::invalid_argument("Dist3 needs a rank-3 pmf");
        }
    }

    /// Builds a distribution from a callable p(x,y,z).
    template <class F>
    static Dist3 from_function(std::size_t dx, std::size_t dy, std::size_t dz, F &&f,
                               double tol = kValidationTol) {
        std::vector<double> v(dx * dy * dz);
        for (std::size_t x = 0; x < dx; ++x) {
            for (std::size_t y = 0; y < dy; ++y) {
                for (std::size_t z = 0; z < dz; ++z) {
                    v[(x * dy + y) * dz + z] = f(x, y, z);
                }
            }
        }
        return Dist3(dx, dy, dz, std::move(v), tol);
    }

    std::size_t dx() const { return pmf_.dim(X); }
    std::size_t dy() const { return pmf_.dim(Y); }
    std::size_t dz() const { return pmf_.dim(Z); }
    double operator()(std::size_t x, std::size_t y, std::size_t z) const {
        return pmf_[(x * dy() + y) * dz() + z];
    }
    const Pmf &pmf() const noexcept { return pmf_; }

    std::vector<double> pz() const {
        std::vector<double> m(dz(), 0.0);
        for (std::size_t f = 0; f < pmf_.size(); ++f) {
            m[f % dz()] += pmf_[f];
        }
        return m;
    }

  private:
    Pmf pmf_;
};

inline Pmf marginal(const Dist3 &d, std::span<const std::size_t> keep) {
    return d.pmf().marginal(keep);
}
inline Pmf marginal(const Dist3 &d, std::initializer_list<std::size_t> keep) {
    return d.pmf().marginal(std::span<const std::size_t>(keep.begin(), keep.size()));
}
inline Dist2 marginal_pair(const Dist3 &d, std::size_t a, std::size_t b) {
    const std::size_t keep[2] = {a, b};
    return Dist2(d.pmf().marginal(keep));
}

/// p(x,y | Z=z).
inline Dist2 conditional_xy_given_z(const Dist3 &d, std::size_t z) {
    if (z >= d.dz()) {
        throw std::out_of_range("conditional_xy_given_z: z outside alphabet");
    }
    double pz = 0.0;
    for (std::size_t x = 0; x < d.dx(); ++x) {
        for (std::size_t y = 0; y < d.dy(); ++y) {
            pz += d(x, y, z);
        }
    }
    if (pz <= kSupportEpsilon) {
        throw std::domain_error("conditional_xy_given_z: p_Z(" + std::to_string(z) + ") is zero");
    }
    std::vector<double> slice(d.dx() * d.dy());
    for (std::size_t x = 0; x < d.dx(); ++x) {
        for (std::size_t y = 0; y < d.dy(); ++y) {
            slice[x * d.dy() + y] = d(x, y, z) / pz;
        }
    }
    return Dist2(Pmf::unchecked({d.dx(), d.dy()}, std::move(slice)));
}

/// Sparse joint law over integer-valued variables. Used to carry derived
/// variables (block labels, messages, channel outputs) next to X, Y, Z
/// without materializing a dense grid.
class Outcomes {
  public:
    using Row = std::vector<std::size_t>;

    Outcomes() = default;
    explicit Outcomes(std::size_t width) : width_(width) {}

    static Outcomes from(const Pmf &p) {
        Outcomes out(p.rank());
        for (std::size_t f = 0; f < p.size(); ++f) {
            if (p[f] > 0.0) {
                out.add(p.unflatten(f), p[f]);
            }
        }
        return out;
    }

    static Outcomes from(const Dist3 &d) { return from(d.pmf()); }

    void add(Row row, double prob) {
        if (row.size() != width_) {
            throw std::invalid_argument("Outcomes::add: row width mismatch");
        }
        rows_.push_back(std::move(row));
        probs_.push_back(prob);
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t size() const noexcept { return rows_.size(); }
    const Row &row(std::size_t i) const { return rows_[i]; }
    double prob(std::size_t i) const { return probs_[i]; }

    /// Appends a derived variable computed from each row.
    Outcomes extend(const std::function<std::size_t(const Row &)> &f) const {
        Outcomes out(width_ + 1);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            Row r = rows_[i];
            r.push_back(f(rows_[i]));
            out.add(std::move(r), probs_[i]);
        }
        return out;
    }

    /// Entropy of the marginal on `vars` (empty set gives 0).
    double entropy_of(std::span<const std::size_t> vars) const {
        if (vars.empty()) {
            return 0.0;
        }
        std::map<Row, double> m;
        Row key(vars.size());
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            for (std::size_t k = 0; k < vars.size(); ++k) {
                key[k] = rows_[i].at(vars[k]);
            }
            m[key] += probs_[i];
        }
        double h = 0.0;
        for (const auto &[k, v] : m) {
            if (v > 0.0) {
                h -= v * std::log2(v);
            }
        }
        return h;
    }

    /// H(A | C).
    double cond_entropy(std::span<const std::size_t> a, std::span<const std::size_t> c) const {
        auto ac = join(a, c);
        double v = entropy_of(ac) - entropy_of(c);
        return v < 0.0 ? 0.0 : v;
    }

    /// I(A : B | C) = H(AC) + H(BC) - H(ABC) - H(C), clamped at zero.
    double cond_mutual_info(std::span<const std::size_t> a, std::span<const std::size_t> b,
                            std::span<const std::size_t> c) const {
        auto ac = join(a, c);
        auto bc = join(b, c);
        auto abc = join(a, bc);
        double v = entropy_of(ac) + entropy_of(bc) - entropy_of(abc) - entropy_of(c);
        return v < 0.0 ? 0.0 : v;
    }

  private:
    static std::vector<std::size_t> join(std::span<const std::size_t> a,
                                         std::span<const std::size_t> b) {
        std::vector<std::size_t> out(a.begin(), a.end());
        out.insert(out.end(), b.begin(), b.end());
        return out;
    }

    std::size_t width_ = 0;
    std::vector<Row> rows_;
    std::vector<double> probs_;
};

/// Entropy of the marginal of `p` on `vars` (all variables when empty).
inline double entropy(const Pmf &p, std::span<const std::size_t> vars = {}) {
    if (vars.empty()) {
        return p.entropy();
    }
    return p.marginal(vars).entropy();
}

/// I(A : B | C) for variable groups of a joint pmf.
inline double cond_mutual_info(const Pmf &p, std::span<const std::size_t> a,
                               std::span<const std::size_t> b, std::span<const std::size_t> c) {
    return Outcomes::from(p).cond_mutual_info(a, b, c);
}

inline double cond_mutual_info(const Dist3 &d, std::initializer_list<std::size_t> a,
                               std::initializer_list<std::size_t> b,
                               std::initializer_list<std::size_t> c) {
    return cond_mutual_info(d.pmf(), std::span<const std::size_t>(a.begin(), a.size()),
                            std::span<const std::size_t>(b.begin(), b.size()),
                            std::span<const std::size_t>(c.begin(), c.size()));
}

/// Row-stochastic matrix k[z][zbar] = Pr[zbar | z].
class Channel {
  public:
    Channel(std::size_t in_dim, std::size_t out_dim, std::vector<double> k,
            double tol = kValidationTol)
        : in_(in_dim), out_(out_dim), k_(std::move(k)) {
        if (in_ == 0 || out_ == 0 || k_.size() != in_ * out_) {
            throw std::invalid_argument("Channel: dimension mismatch");
        }
        for (std::size_t z = 0; z < in_; ++z) {
            double row = 0.0;
            for (std::size_t w = 0; w < out_; ++w) {
                double v = k_[z * out_ + w];
                if (!(v >= 0.0)) {
                    throw std::invalid_argument("Channel: negative transition probability");
                }
                row += v;
            }
            if (std::abs(row - 1.0) > tol) {
                throw std::invalid_argument("Channel: row " + std::to_string(z) + " sums to " +
                                            std::to_string(row));
            }
        }
    }

    static Channel identity(std::size_t n) {
        std::vector<double> k(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            k[i * n + i] = 1.0;
        }
        return Channel(n, n, std::move(k));
    }

    /// Deterministic channel z -> f[z]; the output alphabet is 0..max(f).
    static Channel deterministic(std::span<const std::size_t> f) {
        if (f.empty()) {
            throw std::invalid_argument("Channel::deterministic: empty map");
        }
        std::size_t out = *std::max_element(f.begin(), f.end()) + 1;
        std::vector<double> k(f.size() * out, 0.0);
        for (std::size_t z = 0; z < f.size(); ++z) {
            k[z * out + f[z]] = 1.0;
        }
        return Channel(f.size(), out, std::move(k));
    }

    static Channel constant(std::size_t n) { return deterministic(std::vector<std::size_t>(n, 0)); }

    std::size_t in_dim() const noexcept { return in_; }
    std::size_t out_dim() const noexcept { return out_; }
    double operator()(std::size_t z, std::size_t zbar) const { return k_[z * out_ + zbar]; }

    /// The map z -> zbar when every row is a point mass.
    std::optional<std::vector<std::size_t>> as_function() const {
        std::vector<std::size_t> f(in_);
        for (std::size_t z = 0; z < in_; ++z) {
            auto row = std::span<const double>(k_).subspan(z * out_, out_);
            auto it = std::find(row.begin(), row.end(), 1.0);
            if (it == row.end()) {
                return std::nullopt;
            }
            f[z] = static_cast<std::size_t>(it - row.begin());
        }
        return f;
    }

  private:
    std::size_t in_;
    std::size_t out_;
    std::vector<double> k_;
};

/// p(x,y,zbar) = sum_z p(x,y,z) k[z][zbar].
inline Dist3 apply_channel_z(const Dist3 &d, const Channel &ch) {
    if (ch.in_dim() != d.dz()) {
        throw std::invalid_argument("apply_channel_z: channel input dim " +
                                    std::to_string(ch.in_dim()) + " != |Z| " +
                                    std::to_string(d.dz()));
    }
    const std::size_t dw = ch.out_dim();
    std::vector<double> out(d.dx() * d.dy() * dw, 0.0);
    for (std::size_t x = 0; x < d.dx(); ++x) {
        for (std::size_t y = 0; y < d.dy(); ++y) {
            for (std::size_t z = 0; z < d.dz(); ++z) {
                double p = d(x, y, z);
                if (p == 0.0) {
                    continue;
                }
                for (std::size_t w = 0; w < dw; ++w) {
                    out[(x * d.dy() + y) * dw + w] += p * ch(z, w);
                }
            }
        }
    }
    return Dist3(Pmf::unchecked({d.dx(), d.dy(), dw}, std::move(out)));
}

/// Product of two distributions on paired alphabets: ((x,x'),(y,y'),(z,z')).
inline Dist3 product(const Dist3 &a, const Dist3 &b, const Caps &caps = default_caps()) {
    const std::size_t dx = a.dx() * b.dx();
    const std::size_t dy = a.dy() * b.dy();
    const std::size_t dz = a.dz() * b.dz();
    if (dx * dy * dz > caps.product_states) {
        throw std::length_error("product distribution has " + std::to_string(dx * dy * dz) +
                                " joint states, above the cap of " +
                                std::to_string(caps.product_states));
    }
    std::vector<double> out(dx * dy * dz, 0.0);
    for (std::size_t x = 0; x < a.dx(); ++x)
        for (std::size_t y = 0; y < a.dy(); ++y)
            for (std::size_t z = 0; z < a.dz(); ++z) {
                double pa = a(x, y, z);
                if (pa == 0.0) {
                    continue;
                }
                for (std::size_t x2 = 0; x2 < b.dx(); ++x2)
                    for (std::size_t y2 = 0; y2 < b.dy(); ++y2)
                        for (std::size_t z2 = 0; z2 < b.dz(); ++z2) {
                            std::size_t xi = x * b.dx() + x2;
                            std::size_t yi = y * b.dy() + y2;
                            std::size_t zi = z * b.dz() + z2;
                            out[(xi * dy + yi) * dz + zi] = pa * b(x2, y2, z2);
                        }
            }
    return Dist3(Pmf::unchecked({dx, dy, dz}, std::move(out)));
}

/// n i.i.d. copies; symbol tuples are encoded mixed-radix, first copy most
/// significant.
inline Dist3 product_power(const Dist3 &d, std::size_t n, const Caps &caps = default_caps()) {
    if (n == 0) {
        throw std::invalid_argument("product_power: n must be positive");
    }
    double states = std::pow(static_cast<double>(d.pmf().size()), static_cast<double>(n));
    if (states > static_cast<double>(caps.product_states)) {
        throw std::length_error("product_power: " + std::to_string(n) + " copies exceed the cap of " +
                                std::to_string(caps.product_states) + " joint states");
    }
    Dist3 out = d;
    for (std::size_t i = 1; i < n; ++i) {
        out = product(out, d, caps);
    }
    return out;
}

}  // namespace secrecy_forge
