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

/// \file qlinalg.hpp
/// Dense states of small multipartite quantum systems.
///
/// Subsystems are flattened with the first subsystem most significant
/// (for A,B,E: x major, z minor). Entropies are in bits.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "secrecy_forge/config.hpp"

namespace secrecy_forge {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Hermiticity, trace and positivity tolerance for states.
inline constexpr double kStateTol = 1e-10;
/// Eigenvalues below this are a hard error when taking entropies.
inline constexpr double kNegativeEigenError = -1e-8;
inline constexpr double kEigenClip = 1e-12;

namespace detail {

inline std::size_t product_of(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

inline void check_dim_cap(std::size_t total, const Caps &caps) {
    if (total > caps.qstate_dim) {
        throw std::length_error("state dimension " + std::to_string(total) +
                                " exceeds cap qstate_dim=" + std::to_string(caps.qstate_dim));
    }
}

/// For each flat index of `dims`, its flat index restricted to `subset`
/// (in subset order) and to the complement (in ascending order).
struct IndexSplit {
    std::vector<std::size_t> inner;
    std::vector<std::size_t> outer;
    std::size_t inner_dim = 1;
    std::size_t outer_dim = 1;
};

inline IndexSplit split_indices(std::span<const std::size_t> dims,
                                std::span<const std::size_t> subset) {
    const std::size_t n = dims.size();
    std::vector<bool> in(n, false);
    for (auto s : subset) {
        if (s >= n || in[s]) {
            throw std::invalid_argument("subsystem list out of range or repeated");
        }
        in[s] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n; ++i) {
        if (!in[i]) {
            rest.push_back(i);
        }
    }
    IndexSplit out;
    const std::size_t total = product_of(dims);
    out.inner.resize(total);
    out.outer.resize(total);
    for (auto s : subset) {
        out.inner_dim *= dims[s];
    }
    for (auto s : rest) {
        out.outer_dim *= dims[s];
    }
    std::vector<std::size_t> digit(n, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t a = 0, b = 0;
        for (auto s : subset) {
            a = a * dims[s] + digit[s];
        }
        for (auto s : rest) {
            b = b * dims[s] + digit[s];
        }
        out.inner[flat] = a;
        out.outer[flat] = b;
        for (std::size_t k = n; k-- > 0;) {
            if (++digit[k] < dims[k]) {
                break;
            }
            digit[k] = 0;
        }
    }
    return out;
}

}  // namespace detail

struct HermEig {
    Eigen::VectorXd values;  ///< descending
    CMat vectors;            ///< columns match `values`
};

inline double hermiticity_defect(const CMat &m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline HermEig hermitian_eigs(const CMat &m, double tol = kStateTol) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("hermitian_eigs: matrix is not square");
    }
    if (m.size() > 0 && hermiticity_defect(m) > tol) {
        throw std::invalid_argument("hermitian_eigs: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(m);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eigs: eigensolver failed");
    }
    HermEig out;
    out.values = es.eigenvalues().reverse();
    out.vectors = es.eigenvectors().rowwise().reverse();
    return out;
}

/// -sum lambda log2 lambda over the spectrum of a density matrix.
inline double spectral_entropy(const Eigen::VectorXd &eigs) {
    double h = 0.0;
    for (double l : eigs) {
        if (l < kNegativeEigenError) {
            throw std::domain_error("negative eigenvalue " + std::to_string(l) +
                                    " in density matrix");
        }
        l = std::clamp(l, 0.0, 1.0);
        if (l > kEigenClip) {
            h -= l * std::log2(l);
        }
    }
    return h;
}

inline double matrix_entropy(const CMat &rho) {
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    return spectral_entropy(es.eigenvalues());
}

class PureState {
  public:
    PureState(std::vector<std::size_t> dims, CVec amp, double tol = 1e-12)
        : dims_(std::move(dims)), amp_(std::move(amp)) {
        if (static_cast<std::size_t>(amp_.size()) != detail::product_of(dims_)) {
            throw std::invalid_argument("PureState: amplitude count does not match dims");
        }
        if (std::abs(amp_.norm() - 1.0) > tol) {
            throw std::invalid_argument("PureState: amplitude vector is not normalized");
        }
    }

    static PureState basis(std::vector<std::size_t> dims, std::span<const std::size_t> digits) {
        CVec v = CVec::Zero(static_cast<Eigen::Index>(detail::product_of(dims)));
        std::size_t flat = 0;
        for (std::size_t i = 0; i < dims.size(); ++i) {
            flat = flat * dims[i] + digits[i];
        }
        v(static_cast<Eigen::Index>(flat)) = 1.0;
        return PureState(std::move(dims), std::move(v));
    }

    /// Maximally entangled state (1/sqrt d) sum_i |ii>.
    static PureState max_entangled(std::size_t d) {
        CVec v = CVec::Zero(static_cast<Eigen::Index>(d * d));
        for (std::size_t i = 0; i < d; ++i) {
            v(static_cast<Eigen::Index>(i * d + i)) = 1.0 / std::sqrt(static_cast<double>(d));
        }
        return PureState({d, d}, std::move(v));
    }

    const std::vector<std::size_t> &dims() const noexcept { return dims_; }
    const CVec &amp() const noexcept { return amp_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(amp_.size()); }

    CMat projector() const { return amp_ * amp_.adjoint(); }

  private:
    std::vector<std::size_t> dims_;
    CVec amp_;
};

class QState {
  public:
    QState(std::vector<std::size_t> dims, CMat rho, double tol = kStateTol)
        : dims_(std::move(dims)), rho_(std::move(rho)) {
        if (auto why = defect(tol); !why.empty()) {
            throw std::invalid_argument("QState: " + why);
        }
    }

    explicit QState(const PureState &psi) : dims_(psi.dims()), rho_(psi.projector()) {}

    /// Skips validation; for results that are states by construction.
    static QState unchecked(std::vector<std::size_t> dims, CMat rho) {
        QState s;
        s.dims_ = std::move(dims);
        s.rho_ = std::move(rho);
        return s;
    }

    static QState maximally_mixed(std::vector<std::size_t> dims) {
        const auto n = static_cast<Eigen::Index>(detail::product_of(dims));
        return unchecked(std::move(dims), CMat::Identity(n, n) / static_cast<double>(n));
    }

    /// Empty when the state invariants hold at `tol`, else a description.
    std::string defect(double tol = kStateTol) const {
        const auto n = detail::product_of(dims_);
        if (rho_.rows() != rho_.cols() || static_cast<std::size_t>(rho_.rows()) != n) {
            return "matrix size does not match dims";
        }
        if (hermiticity_defect(rho_) > tol) {
            return "matrix is not Hermitian";
        }
        if (std::abs(rho_.trace().real() - 1.0) > tol) {
            return "trace is not 1";
        }
        Eigen::SelfAdjointEigenSolver<CMat> es(rho_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol) {
            return "matrix is not positive semidefinite";
        }
        return {};
    }

    const std::vector<std::size_t> &dims() const noexcept { return dims_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
    std::size_t subsystems() const noexcept { return dims_.size(); }
    const CMat &rho() const noexcept { return rho_; }

  private:
    QState() = default;
    std::vector<std::size_t> dims_;
    CMat rho_;
};

inline std::vector<std::size_t> concat_dims(const std::vector<std::size_t> &a,
                                            const std::vector<std::size_t> &b) {
    auto out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline CMat kron(const CMat &a, const CMat &b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline QState tensor(const QState &a, const QState &b, const Caps &caps = default_caps()) {
    detail::check_dim_cap(a.dim() * b.dim(), caps);
    return QState::unchecked(concat_dims(a.dims(), b.dims()), kron(a.rho(), b.rho()));
}

inline PureState tensor(const PureState &a, const PureState &b) {
    CVec v(a.amp().size() * b.amp().size());
    for (Eigen::Index i = 0; i < a.amp().size(); ++i) {
        v.segment(i * b.amp().size(), b.amp().size()) = a.amp()(i) * b.amp();
    }
    return PureState(concat_dims(a.dims(), b.dims()), std::move(v), 1e-10);
}

/// Reduced state on `keep` (subsystems listed in the order given).
inline QState partial_trace(const QState &s, std::span<const std::size_t> keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set is empty");
    }
    auto split = detail::split_indices(s.dims(), keep);
    std::vector<std::size_t> out_dims;
    for (auto k : keep) {
        out_dims.push_back(s.dims()[k]);
    }
    // Group full indices by their traced-out part.
    std::vector<std::vector<std::size_t>> by_outer(split.outer_dim);
    for (std::size_t a = 0; a < split.inner.size(); ++a) {
        by_outer[split.outer[a]].push_back(a);
    }
    const auto n = static_cast<Eigen::Index>(split.inner_dim);
    CMat out = CMat::Zero(n, n);
    for (const auto &group : by_outer) {
        for (auto a : group) {
            for (auto b : group) {
                out(static_cast<Eigen::Index>(split.inner[a]),
                    static_cast<Eigen::Index>(split.inner[b])) +=
                    s.rho()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
        }
    }
    return QState::unchecked(std::move(out_dims), std::move(out));
}

inline QState partial_trace(const QState &s, std::initializer_list<std::size_t> keep) {
    return partial_trace(s, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Reduced state of a pure state, computed from its amplitudes.
inline QState reduced(const PureState &psi, std::span<const std::size_t> keep) {
    if (keep.empty()) {
        throw std::invalid_argument("reduced: keep set is empty");
    }
    auto split = detail::split_indices(psi.dims(), keep);
    CMat m = CMat::Zero(static_cast<Eigen::Index>(split.inner_dim),
                        static_cast<Eigen::Index>(split.outer_dim));
    for (std::size_t a = 0; a < split.inner.size(); ++a) {
        m(static_cast<Eigen::Index>(split.inner[a]), static_cast<Eigen::Index>(split.outer[a])) =
            psi.amp()(static_cast<Eigen::Index>(a));
    }
    std::vector<std::size_t> out_dims;
    for (auto k : keep) {
        out_dims.push_back(psi.dims()[k]);
    }
    return QState::unchecked(std::move(out_dims), m * m.adjoint());
}

inline QState reduced(const PureState &psi, std::initializer_list<std::size_t> keep) {
    return reduced(psi, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Completely dephases one subsystem in the computational basis.
inline QState dephase(const QState &s, std::size_t subsystem) {
    const std::size_t sub[] = {subsystem};
    auto split = detail::split_indices(s.dims(), sub);
    CMat out = s.rho();
    for (std::size_t a = 0; a < split.inner.size(); ++a) {
        for (std::size_t b = 0; b < split.inner.size(); ++b) {
            if (split.inner[a] != split.inner[b]) {
                out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 0.0;
            }
        }
    }
    return QState::unchecked(s.dims(), std::move(out));
}

inline QState dephase(const QState &s, std::span<const std::size_t> subsystems) {
    QState out = s;
    for (auto k : subsystems) {
        out = dephase(out, k);
    }
    return out;
}

inline double von_neumann_entropy(const QState &s) { return matrix_entropy(s.rho()); }

/// S of the reduced state on `subs`; zero for the empty set.
inline double subsystem_entropy(const QState &s, std::span<const std::size_t> subs) {
    if (subs.empty()) {
        return 0.0;
    }
    if (subs.size() == s.subsystems()) {
        return von_neumann_entropy(s);
    }
    return von_neumann_entropy(partial_trace(s, subs));
}

inline double trace_norm_hermitian(const CMat &m) {
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

inline double trace_distance(const QState &a, const QState &b) {
    if (a.dims() != b.dims()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    return 0.5 * trace_norm_hermitian(a.rho() - b.rho());
}

namespace detail {

inline std::vector<std::size_t> join(std::span<const std::size_t> a,
                                     std::span<const std::size_t> b) {
    std::vector<std::size_t> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// I(A:B|E) = S(AE) + S(BE) - S(ABE) - S(E).
inline double cond_mutual_info_q(const QState &s, std::span<const std::size_t> a,
                                 std::span<const std::size_t> b, std::span<const std::size_t> e) {
    auto ae = detail::join(a, e);
    auto be = detail::join(b, e);
    auto abe = detail::join(detail::join(a, b), e);
    return subsystem_entropy(s, ae) + subsystem_entropy(s, be) - subsystem_entropy(s, abe) -
           subsystem_entropy(s, std::vector<std::size_t>(e.begin(), e.end()));
}

inline double mutual_info_q(const QState &s, std::span<const std::size_t> a,
                            std::span<const std::size_t> b) {
    return cond_mutual_info_q(s, a, b, {});
}

/// Bipartite shorthand: I(A:B) for a two-subsystem state.
inline double mutual_info_q(const QState &s) {
    const std::size_t a[] = {0}, b[] = {1};
    return mutual_info_q(s, a, b);
}

/// Partial transpose on one subsystem.
inline CMat partial_transpose(const QState &s, std::size_t subsystem) {
    const std::size_t sub[] = {subsystem};
    auto split = detail::split_indices(s.dims(), sub);
    // Each flat index is determined by (inner, outer); build the inverse map.
    std::vector<std::size_t> flat_of(split.inner.size());
    for (std::size_t a = 0; a < split.inner.size(); ++a) {
        flat_of[split.outer[a] * split.inner_dim + split.inner[a]] = a;
    }
    const auto n = static_cast<Eigen::Index>(s.dim());
    CMat out(n, n);
    for (std::size_t a = 0; a < split.inner.size(); ++a) {
        for (std::size_t b = 0; b < split.inner.size(); ++b) {
            auto a2 = flat_of[split.outer[a] * split.inner_dim + split.inner[b]];
            auto b2 = flat_of[split.outer[b] * split.inner_dim + split.inner[a]];
            out(static_cast<Eigen::Index>(a2), static_cast<Eigen::Index>(b2)) =
                s.rho()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        }
    }
    return out;
}

/// A state decomposed along a classical (diagonal) register.
struct ClassicalBlock {
    double prob = 0.0;
    QState state;  ///< normalized conditional state on the other subsystems
};

/// Splits `s` along the diagonal register `subsystem`, which must carry no
/// coherences (off-diagonal register entries at most `tol`). Blocks with
/// probability at most kSupportEpsilon are returned with the maximally mixed
/// state as a placeholder.
inline std::vector<ClassicalBlock> classical_blocks(const QState &s, std::size_t subsystem,
                                                    double tol = kStateTol) {
    const std::size_t sub[] = {subsystem};
    auto split = detail::split_indices(s.dims(), sub);
    std::vector<std::size_t> rest_dims;
    for (std::size_t k = 0; k < s.subsystems(); ++k) {
        if (k != subsystem) {
            rest_dims.push_back(s.dims()[k]);
        }
    }
    const auto n = static_cast<Eigen::Index>(split.outer_dim);
    std::vector<CMat> blocks(split.inner_dim, CMat::Zero(n, n));
    for (std::size_t a = 0; a < split.inner.size(); ++a) {
        for (std::size_t b = 0; b < split.inner.size(); ++b) {
            const auto v = s.rho()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            if (split.inner[a] != split.inner[b]) {
                if (std::abs(v) > tol) {
                    throw std::invalid_argument("classical_blocks: register is not classical");
                }
                continue;
            }
            blocks[split.inner[a]](static_cast<Eigen::Index>(split.outer[a]),
                                   static_cast<Eigen::Index>(split.outer[b])) = v;
        }
    }
    std::vector<ClassicalBlock> out;
    for (auto &m : blocks) {
        const double p = m.trace().real();
        if (p <= kSupportEpsilon) {
            out.push_back({p, QState::maximally_mixed(rest_dims)});
        } else {
            out.push_back({p, QState::unchecked(rest_dims, m / p)});
        }
    }
    return out;
}

}  // namespace secrecy_forge
