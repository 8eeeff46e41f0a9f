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

#include "csit/channel_model.hpp"

#include <algorithm>
#include <numeric>

namespace csit
{
    CellLayout hex_layout(int L, double radius_km)
    {
        if (L != 1 && L != 7)
            throw std::invalid_argument("hex_layout: only L = 1 or L = 7 cells are supported, got " + std::to_string(L));
        if (!(radius_km > 0.0))
            throw std::invalid_argument("hex_layout: radius must be positive");

        CellLayout layout;
        layout.radius_km = radius_km;
        layout.bs_positions.emplace_back(0.0, 0.0);
        if (L == 7)
        {
            const double ring = std::sqrt(3.0) * radius_km;
            for (int i = 0; i < 6; ++i)
            {
                const double angle = std::numbers::pi * static_cast<double>(i) / 3.0;
                layout.bs_positions.emplace_back(ring * std::cos(angle), ring * std::sin(angle));
            }
        }
        return layout;
    }

    void PathLossModel::validate() const
    {
        if (!(alpha > 0.0))
            throw std::invalid_argument("PathLossModel: alpha must be positive");
        if (!(d_min_km > 0.0))
            throw std::invalid_argument("PathLossModel: d_min must be positive");
    }

    double path_loss(double d_km, const PathLossModel &model)
    {
        if (d_km < 0.0)
            throw std::invalid_argument("path_loss: negative distance");
        return std::pow(std::max(d_km, model.d_min_km), -model.alpha);
    }

    UserDrop drop_edge_group(const CellLayout &layout, int K, Rng &rng, const EdgeDropOptions &options)
    {
        if (K < 1)
            throw std::invalid_argument("drop_edge_group: K must be at least 1");
        if (!(options.sector_deg > 0.0) || options.sector_deg > 360.0)
            throw std::invalid_argument("drop_edge_group: sector width must lie in (0, 360] degrees");

        std::uniform_real_distribution<double> unit(0.0, 1.0);
        UserDrop drop;
        drop.sector_start_deg = options.sector_start_deg ? *options.sector_start_deg : 360.0 * unit(rng);

        const Eigen::Vector2d center = layout.bs_positions.front();
        const int L = layout.cells();
        drop.distance_km.resize(K, L);
        for (int k = 0; k < K; ++k)
        {
            const double deg = drop.sector_start_deg + options.sector_deg * unit(rng);
            const double rad = deg * std::numbers::pi / 180.0;
            const Eigen::Vector2d pos = center + layout.radius_km * Eigen::Vector2d(std::cos(rad), std::sin(rad));
            drop.positions.push_back(pos);
            for (int l = 0; l < L; ++l)
                drop.distance_km(k, l) = (pos - layout.bs_positions[static_cast<std::size_t>(l)]).norm();
        }
        return drop;
    }

    Eigen::MatrixXd large_scale_gains(const UserDrop &drop, const PathLossModel &model)
    {
        Eigen::MatrixXd gains(drop.distance_km.rows(), drop.distance_km.cols());
        for (Index k = 0; k < gains.rows(); ++k)
            for (Index l = 0; l < gains.cols(); ++l)
                gains(k, l) = path_loss(drop.distance_km(k, l), model);
        return gains;
    }

    namespace
    {
        // k distinct draws from pool, pool is consumed from the back
        std::vector<Index> take_random(std::vector<Index> &pool, Index k, Rng &rng)
        {
            std::vector<Index> out;
            out.reserve(static_cast<std::size_t>(k));
            for (Index i = 0; i < k; ++i)
            {
                std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
                const std::size_t j = pick(rng);
                out.push_back(pool[j]);
                pool[j] = pool.back();
                pool.pop_back();
            }
            return out;
        }
    }

    std::vector<SupportSet> sample_group_supports(Index M, Index s, Index c_overlap,
                                                  const std::vector<int> &subgroup_sizes, Rng &rng)
    {
        if (M < 1 || s < 1)
            throw std::invalid_argument("sample_group_supports: M and s must be positive");
        if (c_overlap < 0 || c_overlap > s)
            throw std::invalid_argument("sample_group_supports: c_overlap must lie in [0, s]");
        if (s > M)
            throw std::invalid_argument("sample_group_supports: support size s exceeds M");
        if (subgroup_sizes.empty() ||
            std::any_of(subgroup_sizes.begin(), subgroup_sizes.end(), [](int n) { return n < 1; }))
            throw std::invalid_argument("sample_group_supports: every subgroup needs at least one user");

        std::vector<Index> pool(static_cast<std::size_t>(M));
        std::iota(pool.begin(), pool.end(), Index(0));

        SupportSet core = take_random(pool, c_overlap, rng);
        std::sort(core.begin(), core.end());

        const Index extra = s - c_overlap;
        const auto n_sub = static_cast<Index>(subgroup_sizes.size());
        const bool disjoint = static_cast<Index>(pool.size()) >= n_sub * extra;

        std::vector<SupportSet> per_user;
        for (int size : subgroup_sizes)
        {
            std::vector<Index> scratch = disjoint ? std::vector<Index>{} : pool;
            std::vector<Index> &source = disjoint ? pool : scratch;
            SupportSet omega = take_random(source, extra, rng);
            omega.insert(omega.end(), core.begin(), core.end());
            std::sort(omega.begin(), omega.end());
            for (int u = 0; u < size; ++u)
                per_user.push_back(omega);
        }
        return per_user;
    }

    std::vector<int> even_subgroups(int K, int n)
    {
        if (K < 1 || n < 1)
            throw std::invalid_argument("even_subgroups: K and n must be positive");
        n = std::min(n, K);
        std::vector<int> sizes(static_cast<std::size_t>(n), K / n);
        for (int i = 0; i < K % n; ++i)
            ++sizes[static_cast<std::size_t>(i)];
        return sizes;
    }
}
