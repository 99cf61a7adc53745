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

/// \file entangle.hpp
/// Entanglement measures of small bipartite states: closed forms where they
/// exist (pure states, two-qubit concurrence) and numerical upper bounds
/// otherwise.
///
/// eof_numeric minimizes the average entanglement over ensembles
/// {psi_i} with sum_i |psi_i><psi_i| = rho. Every such ensemble of size m is
/// psi_i = sum_k U_ik sqrt(lambda_k) e_k for an m x r isometry U, so the
/// search runs over the complex Stiefel manifold with Riemannian conjugate
/// gradients and a QR retraction.
///
/// rel_ent_upper minimizes S(rho || sigma) over separable
/// sigma = (1-eps) S / tr S + eps I / D with S = sum_i |a_i><a_i| (x) |b_i><b_i|,
/// using L-BFGS on the unnormalized product vectors.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "secrecy_forge/config.hpp"
#include "secrecy_forge/dist.hpp"
#include "secrecy_forge/qlinalg.hpp"

namespace secrecy_forge {

enum class MeasureKind { exact, upper_bound, lower_bound, inconclusive };

inline const char *to_string(MeasureKind k) {
    switch (k) {
        case MeasureKind::exact:
            return "exact";
        case MeasureKind::upper_bound:
            return "upper_bound";
        case MeasureKind::lower_bound:
            return "lower_bound";
        case MeasureKind::inconclusive:
            return "inconclusive";
    }
    return "?";
}

struct OptimizerDiagnostics {
    std::size_t iterations = 0;  ///< summed over restarts
    std::size_t restarts = 0;
    std::size_t best_restart = 0;
    std::uint64_t seed = 0;
    bool converged = true;  ///< the best restart met the stopping rule
};

struct MeasureResult {
    std::string name;
    double value = 0.0;
    MeasureKind kind = MeasureKind::exact;
    std::string method;
    std::optional<OptimizerDiagnostics> diagnostics;
    /// [lower, upper] when only bounds are known.
    std::optional<std::pair<double, double>> interval;
};

namespace detail {

inline void require_bipartite(const QState &s, const char *who) {
    if (s.subsystems() != 2) {
        throw std::invalid_argument(std::string(who) + ": state must have two subsystems");
    }
}

inline void require_optimizer_dim(const QState &s, const Caps &caps, const char *who) {
    if (s.dim() > caps.optimizer_dim) {
        throw std::length_error(std::string(who) + ": dimension " + std::to_string(s.dim()) +
                                " exceeds cap optimizer_dim=" +
                                std::to_string(caps.optimizer_dim));
    }
}

inline std::mt19937_64 restart_rng(std::uint64_t seed, std::size_t restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    return std::mt19937_64(seq);
}

inline CMat gaussian_matrix(std::mt19937_64 &rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m(i) = {g(rng), g(rng)};
    }
    return m;
}

/// Thin Q factor of m with a positive real diagonal in R.
inline CMat qf(const CMat &m) {
    Eigen::HouseholderQR<CMat> qr(m);
    CMat q = qr.householderQ() * CMat::Identity(m.rows(), m.cols());
    const CMat &r = qr.matrixQR();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
        const cplx d = r(k, k);
        if (std::abs(d) > 0.0) {
            q.col(k) *= d / std::abs(d);
        }
    }
    return q;
}

inline double real_inner(const CMat &a, const CMat &b) {
    return (a.array().conjugate() * b.array()).real().sum();
}

}  // namespace detail

/// S(tr_B |psi><psi|) for a bipartite pure state.
inline MeasureResult entanglement_entropy(const PureState &psi) {
    if (psi.dims().size() != 2) {
        throw std::invalid_argument("entanglement_entropy: state must have two subsystems");
    }
    return {"E_entropy", von_neumann_entropy(reduced(psi, {0})), MeasureKind::exact,
            "entropy of the reduced state", std::nullopt, std::nullopt};
}

/// Wootters concurrence of a two-qubit state.
inline MeasureResult concurrence_2q(const QState &rho) {
    if (rho.dims() != std::vector<std::size_t>{2, 2}) {
        throw std::invalid_argument("concurrence_2q: state must be two qubits");
    }
    CMat sy(2, 2);
    sy << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    const CMat yy = kron(sy, sy);
    const CMat tilde = yy * rho.rho().conjugate() * yy;
    auto eig = hermitian_eigs(rho.rho(), 1e-9);
    Eigen::VectorXd root = eig.values.cwiseMax(0.0).cwiseSqrt();
    const CMat sq = eig.vectors * root.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
    CMat r = sq * tilde * sq;
    r = 0.5 * (r + r.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(r, Eigen::EigenvaluesOnly);
    Eigen::VectorXd l = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().reverse();
    const double c = std::clamp(l(0) - l(1) - l(2) - l(3), 0.0, 1.0);
    return {"concurrence", c, MeasureKind::exact, "Wootters concurrence", std::nullopt,
            std::nullopt};
}

/// E_F = h((1 + sqrt(1 - C^2)) / 2) for a two-qubit state.
inline MeasureResult eof_2q(const QState &rho) {
    const double c = concurrence_2q(rho).value;
    const double x = std::clamp((1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))) / 2.0, 0.0, 1.0);
    return {"E_F", binary_entropy(x), MeasureKind::exact, "Wootters concurrence formula",
            std::nullopt, std::nullopt};
}

struct EnsembleMember {
    double prob = 0.0;
    PureState state;
};

/// sum_i p_i S(tr_B psi_i): an upper bound on E_F(rho) attained by the
/// supplied decomposition.
inline MeasureResult eof_ensemble_value(const QState &rho, const std::vector<EnsembleMember> &ens,
                                        double tol = 1e-9) {
    detail::require_bipartite(rho, "eof_ensemble_value");
    CMat sum = CMat::Zero(rho.rho().rows(), rho.rho().cols());
    double value = 0.0;
    for (const auto &m : ens) {
        if (m.state.dims() != rho.dims()) {
            throw std::invalid_argument("eof_ensemble_value: ensemble state dims differ from rho");
        }
        if (m.prob < 0.0) {
            throw std::invalid_argument("eof_ensemble_value: negative ensemble weight");
        }
        sum += m.prob * m.state.projector();
        value += m.prob * von_neumann_entropy(reduced(m.state, {0}));
    }
    if ((sum - rho.rho()).cwiseAbs().maxCoeff() > tol) {
        throw std::invalid_argument("eof_ensemble_value: ensemble does not average to rho");
    }
    return {"E_F", value, MeasureKind::upper_bound, "given pure-state ensemble", std::nullopt,
            std::nullopt};
}

struct EofOptions {
    std::size_t restarts = 32;
    std::size_t max_iter = 1500;
    std::uint64_t seed = 0;
    double tol = 1e-8;              ///< stop after repeated value changes below this
    std::size_t ensemble_size = 0;  ///< 0 selects r^2
};

namespace detail {

/// Average entanglement of the ensemble generated by an isometry U and its
/// Euclidean gradient with respect to U.
class EofObjective {
  public:
    EofObjective(const QState &rho) : da_(rho.dims()[0]), db_(rho.dims()[1]) {
        auto eig = hermitian_eigs(rho.rho(), 1e-9);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
            if (eig.values(k) > 1e-13) {
                keep.push_back(k);
            }
        }
        w_.resize(eig.vectors.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j) {
            w_.col(static_cast<Eigen::Index>(j)) =
                std::sqrt(eig.values(keep[j])) * eig.vectors.col(keep[j]);
        }
    }

    Eigen::Index rank() const { return w_.cols(); }

    double value(const CMat &u) const { return eval(u, nullptr); }
    double value_and_gradient(const CMat &u, CMat &grad) const { return eval(u, &grad); }

  private:
    double eval(const CMat &u, CMat *grad) const {
        const auto m = u.rows();
        const auto da = static_cast<Eigen::Index>(da_), db = static_cast<Eigen::Index>(db_);
        if (grad) {
            grad->setZero(m, u.cols());
        }
        // Column i of psi is the unnormalized ensemble vector psi_i.
        const CMat psi = w_ * u.transpose();
        double total = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            CMat mat(da, db);
            for (Eigen::Index a = 0; a < da; ++a) {
                for (Eigen::Index b = 0; b < db; ++b) {
                    mat(a, b) = psi(a * db + b, i);
                }
            }
            const CMat red = mat * mat.adjoint();
            Eigen::SelfAdjointEigenSolver<CMat> es(red);
            const Eigen::VectorXd mu = es.eigenvalues().cwiseMax(0.0);
            const double t = mu.sum();
            if (t <= 1e-300) {
                continue;
            }
            double hi = t * std::log2(t);
            for (double v : mu) {
                if (v > 0.0) {
                    hi -= v * std::log2(v);
                }
            }
            total += hi;
            if (grad) {
                Eigen::VectorXd gd(mu.size());
                for (Eigen::Index j = 0; j < mu.size(); ++j) {
                    gd(j) = (std::log(t) - std::log(std::max(mu(j), 1e-300))) / std::numbers::ln2;
                }
                const CMat g = es.eigenvectors() * gd.cast<cplx>().asDiagonal() *
                               es.eigenvectors().adjoint();
                const CMat gm = 2.0 * g * mat;
                CVec flat(da * db);
                for (Eigen::Index a = 0; a < da; ++a) {
                    for (Eigen::Index b = 0; b < db; ++b) {
                        flat(a * db + b) = gm(a, b);
                    }
                }
                grad->row(i) = (w_.adjoint() * flat).transpose();
            }
        }
        return total;
    }

    std::size_t da_, db_;
    CMat w_;
};

struct RunResult {
    double value = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
};

/// Riemannian Polak-Ribiere conjugate gradients on {U : U^dag U = I}.
inline RunResult minimize_on_stiefel(const EofObjective &f, CMat u, const EofOptions &opt) {
    auto project = [](const CMat &x, const CMat &z) {
        const CMat s = x.adjoint() * z;
        return CMat(z - x * (0.5 * (s + s.adjoint())));
    };
    CMat egrad;
    double fx = f.value_and_gradient(u, egrad);
    CMat xi = project(u, egrad);
    CMat dir = -xi;
    double step = 1.0;
    RunResult out;
    std::size_t quiet = 0;
    for (std::size_t it = 0; it < opt.max_iter; ++it) {
        out.iterations = it + 1;
        const double gnorm2 = real_inner(xi, xi);
        if (gnorm2 < 1e-24) {
            out.converged = true;
            break;
        }
        double slope = real_inner(xi, dir);
        if (slope >= 0.0) {
            dir = -xi;
            slope = -gnorm2;
        }
        step = std::min(step * 4.0, 1e3);
        CMat trial;
        double ft = fx;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            trial = qf(u + step * dir);
            ft = f.value(trial);
            if (ft <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            out.converged = true;  // no further decrease is resolvable
            break;
        }
        CMat egrad_new;
        ft = f.value_and_gradient(trial, egrad_new);
        const CMat xi_new = project(trial, egrad_new);
        const CMat xi_old_t = project(trial, xi);
        const double beta =
            std::max(0.0, real_inner(xi_new, xi_new - xi_old_t) / std::max(gnorm2, 1e-300));
        dir = -xi_new + beta * project(trial, dir);
        const double change = fx - ft;
        u = std::move(trial);
        xi = xi_new;
        fx = ft;
        quiet = change < opt.tol ? quiet + 1 : 0;
        if (quiet >= 5) {
            out.converged = true;
            break;
        }
    }
    out.value = fx;
    return out;
}

}  // namespace detail

/// Numerical E_F upper bound; deterministic for a given seed. Restart 0
/// starts from the eigen-ensemble, the others from random isometries.
inline MeasureResult eof_numeric(const QState &rho, const EofOptions &opt = {},
                                 const Caps &caps = default_caps()) {
    detail::require_bipartite(rho, "eof_numeric");
    detail::require_optimizer_dim(rho, caps, "eof_numeric");
    detail::EofObjective f(rho);
    const auto r = f.rank();
    const auto m = static_cast<Eigen::Index>(opt.ensemble_size ? opt.ensemble_size
                                                               : static_cast<std::size_t>(r * r));
    if (m < r) {
        throw std::invalid_argument("eof_numeric: ensemble size below the rank of rho");
    }
    OptimizerDiagnostics diag;
    diag.seed = opt.seed;
    diag.restarts = std::max<std::size_t>(1, opt.restarts);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < diag.restarts; ++k) {
        CMat u0;
        if (k == 0) {
            u0 = CMat::Identity(m, r);
        } else {
            auto rng = detail::restart_rng(opt.seed, k);
            u0 = detail::qf(detail::gaussian_matrix(rng, m, r));
        }
        auto run = detail::minimize_on_stiefel(f, std::move(u0), opt);
        diag.iterations += run.iterations;
        if (run.value < best) {
            best = run.value;
            diag.best_restart = k;
            diag.converged = run.converged;
        }
    }
    MeasureResult out{"E_F", std::max(0.0, best), MeasureKind::upper_bound,
                      "ensemble search over isometries (Riemannian CG, QR retraction)", diag,
                      std::nullopt};
    return out;
}

/// 1/2 sum_zbar p(zbar) I(A:B) over the blocks of a state classical on its
/// third subsystem; an upper bound on E_sq of the AB marginal.
inline MeasureResult esq_classical_extension_bound(const QState &sigma, std::size_t reg = 2) {
    if (sigma.subsystems() != 3) {
        throw std::invalid_argument("esq_classical_extension_bound: need an ABZ state");
    }
    double v = 0.0;
    for (const auto &blk : classical_blocks(sigma, reg)) {
        if (blk.prob > kSupportEpsilon) {
            v += blk.prob * mutual_info_q(blk.state);
        }
    }
    return {"E_sq", 0.5 * v, MeasureKind::upper_bound, "classical extension, 1/2 sum p I(A:B)",
            std::nullopt, std::nullopt};
}

struct RelEntOptions {
    std::size_t k_terms = 0;  ///< 0 selects 2 dA dB
    std::size_t restarts = 8;
    std::size_t max_iter = 3000;
    std::uint64_t seed = 0;
    double tol = 1e-11;
    double mixing = 1e-6;
};

namespace detail {

/// S(rho || sigma(theta)) and its gradient for the product-vector
/// parametrization; theta packs (Re a_i, Im a_i, Re b_i, Im b_i) per term.
class RelEntObjective {
  public:
    RelEntObjective(const QState &rho, std::size_t k, double eps)
        : rho_(rho.rho()), da_(rho.dims()[0]), db_(rho.dims()[1]), k_(k), eps_(eps),
          s_rho_(von_neumann_entropy(rho)) {}

    std::size_t size() const { return k_ * 2 * (da_ + db_); }

    double operator()(const Eigen::VectorXd &th, Eigen::VectorXd *grad) const {
        const auto da = static_cast<Eigen::Index>(da_), db = static_cast<Eigen::Index>(db_);
        const Eigen::Index n = da * db;
        std::vector<CVec> as(k_), bs(k_);
        CMat s = CMat::Zero(n, n);
        for (std::size_t i = 0; i < k_; ++i) {
            unpack(th, i, as[i], bs[i]);
            const CVec ab = kron_vec(as[i], bs[i]);
            s += ab * ab.adjoint();
        }
        const double t = s.trace().real();
        if (!(t > 1e-300)) {
            if (grad) {
                grad->setZero(th.size());
            }
            return std::numeric_limits<double>::infinity();
        }
        CMat sigma = (1.0 - eps_) * s / t + eps_ * CMat::Identity(n, n) / static_cast<double>(n);
        sigma = 0.5 * (sigma + sigma.adjoint());
        Eigen::SelfAdjointEigenSolver<CMat> es(sigma);
        const Eigen::VectorXd mu = es.eigenvalues().cwiseMax(1e-300);
        const CMat &v = es.eigenvectors();
        const CMat rhat = v.adjoint() * rho_ * v;
        double cross = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            cross += rhat(j, j).real() * std::log(mu(j));
        }
        const double value = -s_rho_ - cross / std::numbers::ln2;
        if (!grad) {
            return value;
        }
        CMat fr(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const double d = mu(i) - mu(j);
                const double w = std::abs(d) > 1e-12 * std::max(mu(i), mu(j))
                                     ? (std::log(mu(i)) - std::log(mu(j))) / d
                                     : 1.0 / mu(i);
                fr(i, j) = w * rhat(i, j);
            }
        }
        const CMat g_sigma = -(v * fr * v.adjoint()) / std::numbers::ln2;
        const cplx gs_s = (g_sigma.cwiseProduct(s.transpose())).sum();
        CMat g_s = (1.0 - eps_) * (g_sigma / t - (gs_s.real() / (t * t)) * CMat::Identity(n, n));
        g_s = 0.5 * (g_s + g_s.adjoint());
        grad->resize(th.size());
        for (std::size_t i = 0; i < k_; ++i) {
            CMat ib(n, da), ai(n, db);  // (I (x) b), (a (x) I)
            ib.setZero();
            ai.setZero();
            for (Eigen::Index a = 0; a < da; ++a) {
                for (Eigen::Index b = 0; b < db; ++b) {
                    ib(a * db + b, a) = bs[i](b);
                    ai(a * db + b, b) = as[i](a);
                }
            }
            const CVec ga = 2.0 * ib.adjoint() * g_s * ib * as[i];
            const CVec gb = 2.0 * ai.adjoint() * g_s * ai * bs[i];
            pack(*grad, i, ga, gb);
        }
        return value;
    }

    void unpack(const Eigen::VectorXd &th, std::size_t i, CVec &a, CVec &b) const {
        const auto da = static_cast<Eigen::Index>(da_), db = static_cast<Eigen::Index>(db_);
        const Eigen::Index o = static_cast<Eigen::Index>(i) * 2 * (da + db);
        a.resize(da);
        b.resize(db);
        for (Eigen::Index j = 0; j < da; ++j) {
            a(j) = {th(o + j), th(o + da + j)};
        }
        for (Eigen::Index j = 0; j < db; ++j) {
            b(j) = {th(o + 2 * da + j), th(o + 2 * da + db + j)};
        }
    }

  private:
    void pack(Eigen::VectorXd &g, std::size_t i, const CVec &ga, const CVec &gb) const {
        const auto da = static_cast<Eigen::Index>(da_), db = static_cast<Eigen::Index>(db_);
        const Eigen::Index o = static_cast<Eigen::Index>(i) * 2 * (da + db);
        for (Eigen::Index j = 0; j < da; ++j) {
            g(o + j) = ga(j).real();
            g(o + da + j) = ga(j).imag();
        }
        for (Eigen::Index j = 0; j < db; ++j) {
            g(o + 2 * da + j) = gb(j).real();
            g(o + 2 * da + db + j) = gb(j).imag();
        }
    }

    static CVec kron_vec(const CVec &a, const CVec &b) {
        CVec out(a.size() * b.size());
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            out.segment(i * b.size(), b.size()) = a(i) * b;
        }
        return out;
    }

    CMat rho_;
    std::size_t da_, db_, k_;
    double eps_;
    double s_rho_;
};

/// Limited-memory BFGS with Armijo backtracking.
template <class F>
RunResult lbfgs(const F &f, Eigen::VectorXd x, std::size_t max_iter, double tol,
                std::size_t memory = 10) {
    Eigen::VectorXd g;
    double fx = f(x, &g);
    std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> hist;
    RunResult out;
    std::size_t quiet = 0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        if (g.norm() < 1e-12) {
            out.converged = true;
            break;
        }
        // Two-loop recursion.
        Eigen::VectorXd q = g;
        std::vector<double> alpha(hist.size());
        for (std::size_t j = hist.size(); j-- > 0;) {
            const auto &[s, y] = hist[j];
            alpha[j] = s.dot(q) / y.dot(s);
            q -= alpha[j] * y;
        }
        if (!hist.empty()) {
            const auto &[s, y] = hist.back();
            q *= s.dot(y) / y.dot(y);
        } else {
            q /= std::max(1.0, g.norm());
        }
        for (std::size_t j = 0; j < hist.size(); ++j) {
            const auto &[s, y] = hist[j];
            const double b = y.dot(q) / y.dot(s);
            q += (alpha[j] - b) * s;
        }
        Eigen::VectorXd dir = -q;
        double slope = g.dot(dir);
        if (slope >= 0.0) {
            dir = -g;
            slope = -g.squaredNorm();
            hist.clear();
        }
        double step = 1.0;
        Eigen::VectorXd xn, gn;
        double fn = fx;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            xn = x + step * dir;
            fn = f(xn, &gn);
            if (fn <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            out.converged = true;
            break;
        }
        Eigen::VectorXd s = xn - x, y = gn - g;
        if (s.dot(y) > 1e-14 * s.norm() * y.norm()) {
            hist.emplace_back(std::move(s), std::move(y));
            if (hist.size() > memory) {
                hist.pop_front();
            }
        }
        const double change = fx - fn;
        x = std::move(xn);
        g = std::move(gn);
        fx = fn;
        quiet = change < tol ? quiet + 1 : 0;
        if (quiet >= 5) {
            out.converged = true;
            break;
        }
    }
    out.value = fx;
    return out;
}

}  // namespace detail

/// Relative entropy of entanglement upper bound from the best separable
/// candidate found; deterministic for a given seed.
inline MeasureResult rel_ent_upper(const QState &rho, const RelEntOptions &opt = {},
                                   const Caps &caps = default_caps()) {
    detail::require_bipartite(rho, "rel_ent_upper");
    detail::require_optimizer_dim(rho, caps, "rel_ent_upper");
    const std::size_t k = opt.k_terms ? opt.k_terms : 2 * rho.dims()[0] * rho.dims()[1];
    detail::RelEntObjective f(rho, k, opt.mixing);
    OptimizerDiagnostics diag;
    diag.seed = opt.seed;
    diag.restarts = std::max<std::size_t>(1, opt.restarts);
    double best = std::numeric_limits<double>::infinity();
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t r = 0; r < diag.restarts; ++r) {
        auto rng = detail::restart_rng(opt.seed, r);
        Eigen::VectorXd x(static_cast<Eigen::Index>(f.size()));
        for (auto &v : x) {
            v = g(rng);
        }
        auto run = detail::lbfgs(f, std::move(x), opt.max_iter, opt.tol);
        diag.iterations += run.iterations;
        if (run.value < best) {
            best = run.value;
            diag.best_restart = r;
            diag.converged = run.converged;
        }
    }
    return {"E_r", std::max(0.0, best), MeasureKind::upper_bound,
            "separable candidate search (L-BFGS over product vectors)", diag, std::nullopt};
}

/// log2 || rho^{T_B} ||_1.
inline MeasureResult negativity_log(const QState &rho) {
    detail::require_bipartite(rho, "negativity_log");
    const double n = trace_norm_hermitian(partial_transpose(rho, 1));
    return {"neg", std::max(0.0, std::log2(n)), MeasureKind::exact, "logarithmic negativity",
            std::nullopt, std::nullopt};
}

/// max(0, S(A)-S(AB), S(B)-S(AB)): the hashing lower bound on E_D, and hence
/// on the key rate of a tripartite pure state with this AB marginal.
inline MeasureResult hashing_lower_bound(const QState &rho) {
    detail::require_bipartite(rho, "hashing_lower_bound");
    const double sab = von_neumann_entropy(rho);
    const double sa = von_neumann_entropy(partial_trace(rho, {0}));
    const double sb = von_neumann_entropy(partial_trace(rho, {1}));
    return {"E_D", std::max({0.0, sa - sab, sb - sab}), MeasureKind::lower_bound,
            "hashing bound (coherent information)", std::nullopt, std::nullopt};
}

}  // namespace secrecy_forge
