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

#ifndef CSIT_PRECODING_HPP
#define CSIT_PRECODING_HPP

#include "csit/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

namespace csit
{
    struct ServingAssignment
    {
        std::vector<std::vector<int>> cells; // per user, strongest first
    };

    /// The min(n_serve, L) cells with the largest gains for every user (rows
    /// of a users x cells matrix); ties go to the lower cell index.
    ServingAssignment select_serving_sets(const Eigen::MatrixXd &gains, int n_serve);

    template <typename Real>
    struct ZfPrecoder
    {
        CMatrix<Real> W;          // antennas x users
        bool regularized = false; // diagonal loading was needed
    };

    /// Zero-forcing W = H^* (H H^*)^{-1}, rows of H are users. Columns are
    /// scaled jointly so that sum_k ||W[:, k]||^2 = total_power.
    template <typename Real>
    ZfPrecoder<Real> zf_precoder(const CMatrix<Real> &H, Real total_power)
    {
        if (H.rows() < 1 || H.cols() < 1)
            throw std::invalid_argument("zf_precoder: empty channel matrix");
        if (!(total_power > Real(0)))
            throw std::invalid_argument("zf_precoder: total power must be positive");

        ZfPrecoder<Real> out;
        CMatrix<Real> gram = H * H.adjoint();
        Eigen::LLT<CMatrix<Real>> llt(gram);
        // FIXME: LLT::rcond is a 1-norm estimate; an SVD-based check would be exact
        if (llt.info() != Eigen::Success || llt.rcond() < Real(1e-12))
        {
            const Real trace = gram.trace().real();
            const Real eps = trace > Real(0) ? Real(1e-8) * trace : Real(1e-8);
            gram.diagonal().array() += eps;
            llt.compute(gram);
            out.regularized = true;
        }
        out.W = H.adjoint() * llt.solve(CMatrix<Real>::Identity(H.rows(), H.rows()));

        const Real power = out.W.squaredNorm();
        if (power > Real(0))
            out.W *= std::sqrt(total_power / power);
        return out;
    }

    struct PrecodingReport
    {
        std::vector<double> rate;   // bit/s/Hz per user, averaged over subcarriers
        Eigen::MatrixXd sinr;       // users x subcarriers, linear
        double average = 0.0;       // mean rate over users
        std::vector<bool> degenerate; // user's estimated channel gave no usable beam
        bool regularized = false;
    };

    /// Per-subcarrier rate of a jointly precoded downlink.
    ///
    /// H_true and H_est hold one users x (L M) matrix per subcarrier; row k is
    /// user k's angular channel to all L cells stacked in cell order. The beam
    /// of user k lives on the antennas of its serving cells only and is the
    /// zero-forcing column computed from H_est restricted to those antennas,
    /// scaled to total_power / N. Interference is evaluated with H_true, so
    /// leakage through non-serving cells and imperfect nulling is included.
    template <typename Real>
    PrecodingReport evaluate_throughput(std::span<const CMatrix<Real>> H_true, std::span<const CMatrix<Real>> H_est,
                                        const ServingAssignment &assignment, Index antennas_per_cell, Real noise_var,
                                        Real total_power, const std::vector<int> &user_group)
    {
        if (H_true.empty() || H_true.size() != H_est.size())
            throw std::invalid_argument("evaluate_throughput: need matching true and estimated channels per subcarrier");
        const Index N = H_true.front().rows();
        const Index D = H_true.front().cols();
        if (antennas_per_cell < 1 || D % antennas_per_cell != 0)
            throw std::invalid_argument("evaluate_throughput: channel width is not a multiple of the antennas per cell");
        const Index L = D / antennas_per_cell;
        for (std::size_t p = 0; p < H_true.size(); ++p)
            if (H_true[p].rows() != N || H_true[p].cols() != D || H_est[p].rows() != N || H_est[p].cols() != D)
                throw std::invalid_argument("evaluate_throughput: channel matrices differ in shape");
        if (static_cast<Index>(assignment.cells.size()) != N || static_cast<Index>(user_group.size()) != N)
            throw std::invalid_argument("evaluate_throughput: assignment and group map must cover every user");
        if (std::set<int>(user_group.begin(), user_group.end()).size() != user_group.size())
            throw std::invalid_argument("evaluate_throughput: scheduled users must come from distinct groups");
        if (!(noise_var > Real(0)))
            throw std::invalid_argument("evaluate_throughput: noise variance must be positive");

        // users sharing a serving set share one zero-forcing solve
        std::map<std::vector<int>, std::vector<Index>> clusters;
        for (Index k = 0; k < N; ++k)
        {
            const auto &cells = assignment.cells[static_cast<std::size_t>(k)];
            if (cells.empty())
                throw std::invalid_argument("evaluate_throughput: user without serving cells");
            for (int l : cells)
                if (l < 0 || l >= L)
                    throw std::invalid_argument("evaluate_throughput: serving cell out of range");
            std::vector<int> key(cells);
            std::sort(key.begin(), key.end());
            clusters[key].push_back(k);
        }

        const auto P = static_cast<Index>(H_true.size());
        PrecodingReport report;
        report.sinr.resize(N, P);
        report.degenerate.assign(static_cast<std::size_t>(N), false);
        const Real per_user = total_power / Real(N);

        for (Index p = 0; p < P; ++p)
        {
            const auto ps = static_cast<std::size_t>(p);
            CMatrix<Real> W = CMatrix<Real>::Zero(D, N);
            for (const auto &[cells, users] : clusters)
            {
                std::vector<Index> antennas;
                for (int l : cells)
                    for (Index m = 0; m < antennas_per_cell; ++m)
                        antennas.push_back(static_cast<Index>(l) * antennas_per_cell + m);
                const auto A = static_cast<Index>(antennas.size());

                CMatrix<Real> H_sub(N, A);
                for (Index a = 0; a < A; ++a)
                    H_sub.col(a) = H_est[ps].col(antennas[static_cast<std::size_t>(a)]);
                const ZfPrecoder<Real> zf = zf_precoder<Real>(H_sub, total_power);
                report.regularized = report.regularized || zf.regularized;

                for (Index k : users)
                {
                    CVector<Real> w = zf.W.col(k);
                    const Real norm = w.norm();
                    if (!(norm > Real(0)) || !std::isfinite(norm))
                    {
                        // no usable estimate: fixed beam on the first antenna of the strongest serving cell
                        report.degenerate[static_cast<std::size_t>(k)] = true;
                        w = CVector<Real>::Zero(A);
                        const int best = assignment.cells[static_cast<std::size_t>(k)].front();
                        const auto pos = std::find(cells.begin(), cells.end(), best) - cells.begin();
                        w(static_cast<Index>(pos) * antennas_per_cell) = Real(1);
                    }
                    else
                        w /= norm;
                    w *= std::sqrt(per_user);
                    for (Index a = 0; a < A; ++a)
                        W(antennas[static_cast<std::size_t>(a)], k) = w(a);
                }
            }

            const CMatrix<Real> T = H_true[ps] * W;
            for (Index k = 0; k < N; ++k)
            {
                const Real signal = std::norm(T(k, k));
                const Real interference = T.row(k).squaredNorm() - signal;
                report.sinr(k, p) = static_cast<double>(signal / (std::max(interference, Real(0)) + noise_var));
            }
        }

        report.rate.assign(static_cast<std::size_t>(N), 0.0);
        for (Index k = 0; k < N; ++k)
        {
            double r = 0.0;
            for (Index p = 0; p < P; ++p)
                r += std::log2(1.0 + report.sinr(k, p));
            report.rate[static_cast<std::size_t>(k)] = r / static_cast<double>(P);
            report.average += report.rate[static_cast<std::size_t>(k)];
        }
        report.average /= static_cast<double>(N);
        return report;
    }
}

#endif
