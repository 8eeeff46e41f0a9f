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

#ifndef CSIT_CHANNEL_MODEL_HPP
#define CSIT_CHANNEL_MODEL_HPP

#include "csit/rng.hpp"
#include "csit/types.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csit
{
    // Multi-cell geometry ------------------------------------------------

    struct CellLayout
    {
        std::vector<Eigen::Vector2d> bs_positions; // km, index 0 is the target cell
        double radius_km = 1.0;

        int cells() const { return static_cast<int>(bs_positions.size()); }
    };

    // Center cell at the origin; for L = 7 a ring of six neighbours at
    // sqrt(3) * radius, angles 0, 60, ..., 300 degrees. Throws for other L.
    CellLayout hex_layout(int L, double radius_km);

    struct PathLossModel
    {
        double alpha = 3.8;
        double d_min_km = 0.035;

        void validate() const;
    };

    // Linear power gain 1 / max(d, d_min)^alpha.
    double path_loss(double d_km, const PathLossModel &model);

    struct EdgeDropOptions
    {
        double sector_deg = 60.0;
        // Sector start angle; drawn uniformly in [0, 360) when empty.
        std::optional<double> sector_start_deg;
    };

    struct UserDrop
    {
        std::vector<Eigen::Vector2d> positions; // km
        Eigen::MatrixXd distance_km;            // K x L
        double sector_start_deg = 0.0;
    };

    // K users on the circle of radius layout.radius_km around the target BS,
    // angles i.i.d. uniform inside one sector so the group is physically close.
    UserDrop drop_edge_group(const CellLayout &layout, int K, Rng &rng, const EdgeDropOptions &options = {});

    Eigen::MatrixXd large_scale_gains(const UserDrop &drop, const PathLossModel &model);

    // Structured supports ------------------------------------------------

    // One support per user for a single cell. A common core of c_overlap bins
    // is shared by every user; each subgroup extends it with s - c_overlap
    // extra bins, and users of one subgroup share their support exactly.
    // Extras are disjoint across subgroups whenever M leaves room for it.
    std::vector<SupportSet> sample_group_supports(Index M, Index s, Index c_overlap,
                                                  const std::vector<int> &subgroup_sizes, Rng &rng);

    // Split K users into n nearly equal consecutive subgroups.
    std::vector<int> even_subgroups(int K, int n);

    // Angular transform ----------------------------------------------------

    // Unitary M-point DFT, entry (a, b) = exp(-j 2 pi a b / M) / sqrt(M).
    template <typename Real>
    CMatrix<Real> unitary_dft(Index M)
    {
        if (M < 1)
            throw std::invalid_argument("unitary_dft: dimension must be positive, got " + std::to_string(M));

        CMatrix<Real> F(M, M);
        const Real scale = Real(1) / std::sqrt(Real(M));
        for (Index a = 0; a < M; ++a)
            for (Index b = 0; b < M; ++b)
            {
                // reduce a*b mod M first so the phase stays exact for large M
                const Index k = (a * b) % M;
                const Real phase = Real(-2) * std::numbers::pi_v<Real> * Real(k) / Real(M);
                F(a, b) = std::polar(scale, phase);
            }
        return F;
    }

    // Angular-domain channels ----------------------------------------------

    template <typename Real>
    struct AngularChannelSet
    {
        Index users = 0;
        Index cells = 0;
        Index subcarriers = 0;
        Index antennas = 0;

        std::vector<CMatrix<Real>> coeffs; // (k * cells + l) -> antennas x subcarriers
        std::vector<SupportSet> supports;  // (k * cells + l)
        Eigen::MatrixXd gains;             // users x cells, linear power

        CMatrix<Real> &link(Index k, Index l) { return coeffs[static_cast<std::size_t>(k * cells + l)]; }
        const CMatrix<Real> &link(Index k, Index l) const { return coeffs[static_cast<std::size_t>(k * cells + l)]; }

        const SupportSet &support(Index k, Index l) const { return supports[static_cast<std::size_t>(k * cells + l)]; }

        // Column k of the (M x K) matrix of users' channels to cell l on subcarrier p.
        CMatrix<Real> cell_matrix(Index l, Index p) const
        {
            CMatrix<Real> H(antennas, users);
            for (Index k = 0; k < users; ++k)
                H.col(k) = link(k, l).col(p);
            return H;
        }
    };

    // Draws i.i.d. CN(0, gains(k,l) / |support|) on every support bin, for every
    // subcarrier independently; zero elsewhere. supports is indexed k * L + l.
    template <typename Real>
    AngularChannelSet<Real> synthesize_channels(const std::vector<SupportSet> &supports, const Eigen::MatrixXd &gains,
                                                Index M, Index P, Rng &rng)
    {
        const Index K = gains.rows();
        const Index L = gains.cols();
        if (static_cast<Index>(supports.size()) != K * L)
            throw std::invalid_argument("synthesize_channels: supports must hold one set per (user, cell)");
        if (P < 1 || M < 1)
            throw std::invalid_argument("synthesize_channels: M and P must be positive");

        AngularChannelSet<Real> set;
        set.users = K;
        set.cells = L;
        set.subcarriers = P;
        set.antennas = M;
        set.supports = supports;
        set.gains = gains;
        set.coeffs.reserve(supports.size());

        for (Index k = 0; k < K; ++k)
            for (Index l = 0; l < L; ++l)
            {
                const SupportSet &omega = supports[static_cast<std::size_t>(k * L + l)];
                const double gain = gains(k, l);
                if (gain < 0.0)
                    throw std::invalid_argument("synthesize_channels: negative gain");
                if (!is_valid_support(omega, M))
                    throw std::invalid_argument("synthesize_channels: support indices must be sorted, unique and < M");
                if (omega.empty() && gain > 0.0)
                    throw std::invalid_argument("synthesize_channels: empty support with positive gain");

                CMatrix<Real> h = CMatrix<Real>::Zero(M, P);
                if (gain > 0.0)
                {
                    const Real variance = Real(gain / static_cast<double>(omega.size()));
                    for (Index p = 0; p < P; ++p)
                        for (Index m : omega)
                            h(m, p) = complex_gaussian<Real>(rng, variance);
                }
                set.coeffs.push_back(std::move(h));
            }
        return set;
    }
}

#endif
