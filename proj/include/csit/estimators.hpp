// SPDX-License-Identifier: Apache-2.0
//
// csit: compressive-sensing CSIT estimation for multi-cell FDD massive MIMO
// Copyright (C) 2026 The csit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CSIT_ESTIMATORS_HPP
#define CSIT_ESTIMATORS_HPP

#include "csit/types.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csit
{
    struct EstimatorConfig
    {
        double gamma_th = 0.0; // pruning power threshold, linear
        int max_iter = 0;      // 0 selects the number of measurements G

        void validate() const
        {
            if (!(gamma_th >= 0.0))
                throw std::invalid_argument("EstimatorConfig: gamma_th must be non-negative");
            if (max_iter < 0)
                throw std::invalid_argument("EstimatorConfig: max_iter must be non-negative");
        }
    };

    template <typename Real>
    struct EstimateResult
    {
        std::vector<CMatrix<Real>> H_hat;                    // per subcarrier, (M |pi|) x K
        std::vector<SupportSet> supports;                    // per user, union over subcarriers
        std::vector<std::vector<SupportSet>> subcarrier_supports; // [p][k]
        std::vector<Real> trace;                             // sum_p ||Z_p||_F of accepted iterates, entry 0 is ||R||
        int iterations = 0;
        bool degenerate = false;  // some restricted LS system was rank deficient
        bool cap_reached = false; // stopped on max_iter or |support| > G
    };

    namespace detail
    {
        // Rank decisions for the pseudo-inverse: pivots below this fraction of
        // the largest pivot are treated as zero.
        inline constexpr double kRankTolerance = 1e-10;

        template <typename Real>
        void check_problem(std::span<const CMatrix<Real>> R, std::span<const CMatrix<Real>> Theta, const char *who)
        {
            if (R.empty() || R.size() != Theta.size())
                throw std::invalid_argument(std::string(who) + ": need one sensing matrix per feedback matrix");
            const Index G = R.front().rows();
            const Index K = R.front().cols();
            const Index N = Theta.front().cols();
            if (G < 1 || K < 1 || N < 1)
                throw std::invalid_argument(std::string(who) + ": empty problem");
            for (std::size_t p = 0; p < R.size(); ++p)
            {
                if (R[p].rows() != G || R[p].cols() != K)
                    throw std::invalid_argument(std::string(who) + ": feedback matrices differ in shape");
                if (Theta[p].rows() != G || Theta[p].cols() != N)
                    throw std::invalid_argument(std::string(who) + ": sensing matrices must all be G x N");
            }
        }

        template <typename Real>
        struct RestrictedFit
        {
            std::vector<CMatrix<Real>> coeffs; // per p, N x K
            std::vector<CMatrix<Real>> fitted; // per p, G x K, Theta_p * coeffs_p
            bool degenerate = false;
        };

        // Minimum-norm least squares of R_p[:, k] on the columns supports[k] of
        // Theta_p, for every (k, p). Users with identical supports share one
        // factorization per subcarrier.
        template <typename Real>
        RestrictedFit<Real> restricted_least_squares(std::span<const CMatrix<Real>> R,
                                                     std::span<const CMatrix<Real>> Theta,
                                                     const std::vector<SupportSet> &supports)
        {
            const Index G = R.front().rows();
            const Index K = R.front().cols();
            const Index N = Theta.front().cols();

            std::map<SupportSet, std::vector<Index>> classes;
            for (Index k = 0; k < K; ++k)
                classes[supports[static_cast<std::size_t>(k)]].push_back(k);

            RestrictedFit<Real> fit;
            fit.coeffs.assign(R.size(), CMatrix<Real>::Zero(N, K));
            fit.fitted.assign(R.size(), CMatrix<Real>::Zero(G, K));

            for (const auto &[omega, users] : classes)
            {
                if (omega.empty())
                    continue;
                const auto n = static_cast<Index>(omega.size());
                const auto nu = static_cast<Index>(users.size());
                for (std::size_t p = 0; p < R.size(); ++p)
                {
                    CMatrix<Real> A(G, n);
                    for (Index j = 0; j < n; ++j)
                        A.col(j) = Theta[p].col(omega[static_cast<std::size_t>(j)]);
                    CMatrix<Real> B(G, nu);
                    for (Index u = 0; u < nu; ++u)
                        B.col(u) = R[p].col(users[static_cast<std::size_t>(u)]);

                    Eigen::CompleteOrthogonalDecomposition<CMatrix<Real>> cod;
                    cod.setThreshold(Real(kRankTolerance));
                    cod.compute(A);
                    if (cod.rank() < n)
                        fit.degenerate = true;
                    const CMatrix<Real> X = cod.solve(B);
                    const CMatrix<Real> AX = A * X;
                    for (Index u = 0; u < nu; ++u)
                    {
                        const Index k = users[static_cast<std::size_t>(u)];
                        for (Index j = 0; j < n; ++j)
                            fit.coeffs[p](omega[static_cast<std::size_t>(j)], k) = X(j, u);
                        fit.fitted[p].col(k) = AX.col(u);
                    }
                }
            }
            return fit;
        }

        // Least-squares state of one (user, subcarrier) system: a thin QR of
        // the selected columns, grown by one column per accepted iteration.
        template <typename Real>
        struct GrowingLs
        {
            CMatrix<Real> Q;       // G x G, first n columns orthonormal
            CMatrix<Real> Rf;      // G x G, upper triangular
            CVector<Real> qb;      // Q^* b
            std::vector<Index> order; // column of Theta behind each Q column
            Index n = 0;
            bool dense = false;    // met a dependent column, solve from scratch from now on
        };

        // One system extended by the candidate column, not yet committed.
        template <typename Real>
        struct Proposal
        {
            CVector<Real> q;
            CVector<Real> v;
            Real r = 0;
            std::complex<Real> beta;
            std::complex<Real> g; // coefficient on the candidate column
            CVector<Real> z;      // residual of the extended fit
            bool dense = false;
        };

        // Minimum-norm fit of b on the given sorted columns; returns the
        // coefficient on column `of` and the residual.
        template <typename Real>
        std::pair<std::complex<Real>, CVector<Real>> dense_fit(const CMatrix<Real> &Theta, const SupportSet &cols,
                                                                  const CVector<Real> &b, Index of)
        {
            CMatrix<Real> A(Theta.rows(), static_cast<Index>(cols.size()));
            Index pos = 0;
            for (std::size_t j = 0; j < cols.size(); ++j)
            {
                A.col(static_cast<Index>(j)) = Theta.col(cols[j]);
                if (cols[j] == of)
                    pos = static_cast<Index>(j);
            }
            Eigen::CompleteOrthogonalDecomposition<CMatrix<Real>> cod;
            cod.setThreshold(Real(kRankTolerance));
            cod.compute(A);
            const CVector<Real> x = cod.solve(b);
            return {x(pos), b - A * x};
        }

        template <typename Real>
        Proposal<Real> propose(const GrowingLs<Real> &sys, const CMatrix<Real> &Theta, const SupportSet &cols,
                               Index rho, const CVector<Real> &b, const CVector<Real> &z)
        {
            Proposal<Real> out;
            if (!sys.dense)
            {
                const auto a = Theta.col(rho);
                const auto Qn = sys.Q.leftCols(sys.n);
                // classical Gram-Schmidt, applied twice for orthogonality to working precision
                out.v = Qn.adjoint() * a;
                out.q = a - Qn * out.v;
                const CVector<Real> v2 = Qn.adjoint() * out.q;
                out.q -= Qn * v2;
                out.v += v2;
                out.r = out.q.norm();
                if (out.r > Real(kRankTolerance) * a.norm())
                {
                    out.q /= out.r;
                    out.beta = out.q.dot(b); // q^* b
                    out.g = out.beta / out.r;
                    out.z = z - out.q * out.beta;
                    return out;
                }
            }
            // dependent candidate: fall back to the rank-revealing solve
            SupportSet extended = support_union(cols, SupportSet{rho});
            auto [g, residual] = dense_fit<Real>(Theta, extended, b, rho);
            out.g = g;
            out.z = std::move(residual);
            out.dense = true;
            return out;
        }

        // Coefficient on a column already in the fit.
        template <typename Real>
        std::complex<Real> current_coefficient(const GrowingLs<Real> &sys, const CMatrix<Real> &Theta,
                                               const SupportSet &cols, Index rho, const CVector<Real> &b)
        {
            if (sys.dense)
                return dense_fit<Real>(Theta, cols, b, rho).first;
            const CVector<Real> x =
                sys.Rf.topLeftCorner(sys.n, sys.n).template triangularView<Eigen::Upper>().solve(sys.qb.head(sys.n));
            const auto it = std::find(sys.order.begin(), sys.order.end(), rho);
            return x(static_cast<Index>(it - sys.order.begin()));
        }

        template <typename Real>
        void commit(GrowingLs<Real> &sys, Proposal<Real> &prop, Index rho)
        {
            if (prop.dense || sys.dense)
            {
                sys.dense = true;
                return;
            }
            const Index n = sys.n;
            sys.Q.col(n) = prop.q;
            sys.Rf.col(n).head(n) = prop.v;
            sys.Rf(n, n) = prop.r;
            sys.qb(n) = prop.beta;
            sys.order.push_back(rho);
            sys.n = n + 1;
        }

        // Joint greedy recovery over all supplied subcarriers: one support per
        // user shared by every subcarrier, candidate index picked from the
        // correlation energy summed over users and subcarriers.
        template <typename Real>
        EstimateResult<Real> joint_greedy(std::span<const CMatrix<Real>> R, std::span<const CMatrix<Real>> Theta,
                                          const EstimatorConfig &cfg)
        {
            const auto P = static_cast<Index>(R.size());
            const Index G = R.front().rows();
            const Index K = R.front().cols();
            const Index N = Theta.front().cols();
            const Index cap = cfg.max_iter > 0 ? static_cast<Index>(cfg.max_iter) : G;
            const Real gamma = Real(cfg.gamma_th);
            auto at = [P](Index k, Index p) { return static_cast<std::size_t>(k * P + p); };

            EstimateResult<Real> out;
            std::vector<SupportSet> omega(static_cast<std::size_t>(K));
            std::vector<CMatrix<Real>> Z(R.begin(), R.end());
            std::vector<GrowingLs<Real>> sys(static_cast<std::size_t>(K * P));
            for (auto &s : sys)
            {
                s.Q.resize(G, G);
                s.Rf = CMatrix<Real>::Zero(G, G);
                s.qb.resize(G);
            }

            Real previous = 0;
            for (const auto &r : R)
                previous += r.norm();
            out.trace.push_back(previous);

            std::vector<Proposal<Real>> prop(static_cast<std::size_t>(K * P));
            std::vector<bool> weak(static_cast<std::size_t>(K));
            std::vector<bool> present(static_cast<std::size_t>(K));
            Index i = 0;
            while (true)
            {
                if (i >= cap)
                {
                    out.cap_reached = true;
                    break;
                }
                ++i;

                // candidate index: argmax over columns of sum_p sum_k |[Theta_p^* Z_p]_(col,k)|^2
                RVector<Real> energy = RVector<Real>::Zero(N);
                for (Index p = 0; p < P; ++p)
                    energy.noalias() += (Theta[p].adjoint() * Z[p]).cwiseAbs2().rowwise().sum();
                Index rho = 0;
                for (Index m = 1; m < N; ++m)
                    if (energy(m) > energy(rho)) // strict: ties go to the smallest index
                        rho = m;

                bool over_cap = false;
                for (Index k = 0; k < K; ++k)
                {
                    const auto &s = omega[static_cast<std::size_t>(k)];
                    present[static_cast<std::size_t>(k)] = std::binary_search(s.begin(), s.end(), rho);
                    const auto size = static_cast<Index>(s.size()) + (present[static_cast<std::size_t>(k)] ? 0 : 1);
                    over_cap = over_cap || size > G;
                }
                if (over_cap)
                {
                    out.cap_reached = true;
                    break;
                }

                // tentative fits with rho added for every user, and the
                // per-user mean power of the new index across subcarriers
                bool all_weak = true;
                for (Index k = 0; k < K; ++k)
                {
                    const auto ks = static_cast<std::size_t>(k);
                    Real power = 0;
                    for (Index p = 0; p < P; ++p)
                    {
                        const auto ps = static_cast<std::size_t>(p);
                        const CVector<Real> b = R[ps].col(k);
                        Proposal<Real> &pr = prop[at(k, p)];
                        if (present[ks])
                        {
                            pr.g = current_coefficient<Real>(sys[at(k, p)], Theta[ps], omega[ks], rho, b);
                            pr.z = Z[ps].col(k);
                        }
                        else
                            pr = propose<Real>(sys[at(k, p)], Theta[ps], omega[ks], rho, b, Z[ps].col(k));
                        power += std::norm(pr.g);
                    }
                    power /= Real(P);
                    weak[ks] = power < gamma;
                    all_weak = all_weak && weak[ks];
                }
                if (all_weak)
                    break; // sparsity over-estimated for every user

                // users whose new entry is noise keep the previous support and fit
                Real residual = 0;
                for (Index p = 0; p < P; ++p)
                {
                    Real sq = 0;
                    for (Index k = 0; k < K; ++k)
                        sq += weak[static_cast<std::size_t>(k)] ? Z[static_cast<std::size_t>(p)].col(k).squaredNorm()
                                                                : prop[at(k, p)].z.squaredNorm();
                    residual += std::sqrt(sq);
                }
                if (residual >= previous)
                    break; // keep the previous iterate

                for (Index k = 0; k < K; ++k)
                {
                    const auto ks = static_cast<std::size_t>(k);
                    if (weak[ks] || present[ks])
                        continue;
                    for (Index p = 0; p < P; ++p)
                    {
                        commit<Real>(sys[at(k, p)], prop[at(k, p)], rho);
                        out.degenerate = out.degenerate || sys[at(k, p)].dense;
                        Z[static_cast<std::size_t>(p)].col(k) = prop[at(k, p)].z;
                    }
                    omega[ks] = support_union(omega[ks], SupportSet{rho});
                }
                out.trace.push_back(residual);
                previous = residual;
            }

            // final coefficients from the pseudo-inverse on the returned supports
            RestrictedFit<Real> fit = restricted_least_squares<Real>(R, Theta, omega);
            out.degenerate = out.degenerate || fit.degenerate;
            out.iterations = static_cast<int>(i);
            out.H_hat = std::move(fit.coeffs);
            out.supports = omega;
            out.subcarrier_supports.assign(static_cast<std::size_t>(P), omega);
            return out;
        }
    }

    /// Joint multi-user multi-carrier OMP.
    ///
    /// Recovers the stacked angular channels of K users from R_p = Theta_p H_p
    /// + W_p over all P subcarriers at once. Each user keeps one support for
    /// every subcarrier; the candidate index is the one with the largest
    /// correlation energy summed over users and subcarriers and is offered to
    /// all users, then withdrawn for each user whose subcarrier-averaged power
    /// on it falls below gamma_th. The loop quits when every user rejects the
    /// candidate or the summed residual norm stops decreasing, and returns the
    /// last iterate whose residual decreased.
    template <typename Real>
    EstimateResult<Real> jmumc_omp(std::span<const CMatrix<Real>> R, std::span<const CMatrix<Real>> Theta,
                                   const EstimatorConfig &cfg)
    {
        cfg.validate();
        detail::check_problem<Real>(R, Theta, "jmumc_omp");
        return detail::joint_greedy<Real>(R, Theta, cfg);
    }

    /// Multi-user OMP run separately on every subcarrier (no carrier-common support).
    template <typename Real>
    EstimateResult<Real> jmu_omp(std::span<const CMatrix<Real>> R, std::span<const CMatrix<Real>> Theta,
                                 const EstimatorConfig &cfg)
    {
        cfg.validate();
        detail::check_problem<Real>(R, Theta, "jmu_omp");

        const Index K = R.front().cols();
        EstimateResult<Real> out;
        out.supports.assign(static_cast<std::size_t>(K), {});
        for (std::size_t p = 0; p < R.size(); ++p)
        {
            EstimateResult<Real> one = detail::joint_greedy<Real>(R.subspan(p, 1), Theta.subspan(p, 1), cfg);
            out.H_hat.push_back(std::move(one.H_hat.front()));
            for (Index k = 0; k < K; ++k)
                out.supports[static_cast<std::size_t>(k)] =
                    support_union(out.supports[static_cast<std::size_t>(k)], one.supports[static_cast<std::size_t>(k)]);
            out.subcarrier_supports.push_back(std::move(one.supports));

            // subcarrier traces summed entrywise, shorter ones held at their last value
            const std::size_t len = std::max(out.trace.size(), one.trace.size());
            const Real own_last = one.trace.back();
            const Real acc_last = out.trace.empty() ? Real(0) : out.trace.back();
            out.trace.resize(len, acc_last);
            for (std::size_t j = 0; j < len; ++j)
                out.trace[j] += j < one.trace.size() ? one.trace[j] : own_last;

            out.iterations = std::max(out.iterations, one.iterations);
            out.degenerate = out.degenerate || one.degenerate;
            out.cap_reached = out.cap_reached || one.cap_reached;
        }
        return out;
    }

    /// Single-cell baseline: the same per-subcarrier multi-user loop with a
    /// sensing matrix holding only the target-cell block, so inter-cell
    /// pilots act as unmodeled interference.
    template <typename Real>
    EstimateResult<Real> single_cell_joint_omp(std::span<const CMatrix<Real>> R,
                                               std::span<const CMatrix<Real>> Theta_target,
                                               const EstimatorConfig &cfg)
    {
        return jmu_omp<Real>(R, Theta_target, cfg);
    }

    /// Least squares restricted to genie-provided supports (stacked coordinates).
    template <typename Real>
    EstimateResult<Real> oracle_ls(std::span<const CMatrix<Real>> R, std::span<const CMatrix<Real>> Theta,
                                   const std::vector<SupportSet> &true_supports)
    {
        detail::check_problem<Real>(R, Theta, "oracle_ls");
        const Index G = R.front().rows();
        const Index K = R.front().cols();
        const Index N = Theta.front().cols();
        if (static_cast<Index>(true_supports.size()) != K)
            throw std::invalid_argument("oracle_ls: need one support per user");
        for (const auto &s : true_supports)
        {
            if (!is_valid_support(s, N))
                throw std::invalid_argument("oracle_ls: support out of range or unsorted");
            if (static_cast<Index>(s.size()) > G)
                throw std::invalid_argument("oracle_ls: under-determined, support larger than G = " + std::to_string(G));
        }

        auto fit = detail::restricted_least_squares<Real>(R, Theta, true_supports);
        EstimateResult<Real> out;
        out.H_hat = std::move(fit.coeffs);
        out.supports = true_supports;
        out.subcarrier_supports.assign(R.size(), true_supports);
        out.degenerate = fit.degenerate;
        out.iterations = 1;
        return out;
    }

    // Scoring ---------------------------------------------------------------

    inline constexpr double kNmseFloorDb = -300.0;

    /// 10 log10(ratio), clamped below at kNmseFloorDb; NaN passes through.
    double ratio_to_db(double ratio);

    /// sum ||H_hat - H||^2 / sum ||H||^2 over all subcarriers. NaN if the truth is all zero.
    template <typename Real>
    double nmse_ratio(std::span<const CMatrix<Real>> H_hat, std::span<const CMatrix<Real>> H_true)
    {
        if (H_hat.size() != H_true.size())
            throw std::invalid_argument("nmse: subcarrier counts differ");
        double err = 0.0;
        double ref = 0.0;
        for (std::size_t p = 0; p < H_hat.size(); ++p)
        {
            if (H_hat[p].rows() != H_true[p].rows() || H_hat[p].cols() != H_true[p].cols())
                throw std::invalid_argument("nmse: matrix shapes differ");
            err += static_cast<double>((H_hat[p] - H_true[p]).squaredNorm());
            ref += static_cast<double>(H_true[p].squaredNorm());
        }
        if (ref == 0.0)
            return std::numeric_limits<double>::quiet_NaN();
        return err / ref;
    }

    /// NMSE in dB; exact estimates clamp to kNmseFloorDb, all-zero truth gives NaN.
    template <typename Real>
    double nmse_db(std::span<const CMatrix<Real>> H_hat, std::span<const CMatrix<Real>> H_true)
    {
        return ratio_to_db(nmse_ratio<Real>(H_hat, H_true));
    }
}

#endif
