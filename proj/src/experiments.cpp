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


#include "csit/experiments.hpp"

#include "csit/estimators.hpp"
#include "csit/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <span>

namespace csit
{
    namespace
    {
        // substream purposes
        constexpr std::uint64_t kMseGroup = 1;
        constexpr std::uint64_t kMsePilots = 2;
        constexpr std::uint64_t kMseNoise = 3;
        constexpr std::uint64_t kRateGroups = 11;
        constexpr std::uint64_t kRatePilots = 12;
        constexpr std::uint64_t kRateNoise = 13;

        auto u64(auto v) { return static_cast<std::uint64_t>(v); }

        // Stacked (M |pi|) x K blocks placed into (L M) x K, zeros elsewhere.
        std::vector<CMatrixd> embed(const std::vector<CMatrixd> &stacked, const ActiveCellSet &pi, Index L, Index M)
        {
            std::vector<CMatrixd> out;
            out.reserve(stacked.size());
            for (const auto &H : stacked)
            {
                CMatrixd full = CMatrixd::Zero(L * M, H.cols());
                for (std::size_t b = 0; b < pi.size(); ++b)
                    full.middleRows(pi[b] * M, M) = H.middleRows(static_cast<Index>(b) * M, M);
                out.push_back(std::move(full));
            }
            return out;
        }

        EstimatorConfig estimator_config(const ScenarioConfig &cfg, double gamma)
        {
            EstimatorConfig ec;
            ec.gamma_th = gamma;
            ec.max_iter = cfg.max_iter;
            return ec;
        }
    }

    GroupInstance draw_group(const ScenarioConfig &cfg, const CellLayout &layout, Rng &rng)
    {
        GroupInstance g;
        EdgeDropOptions options;
        options.sector_deg = cfg.sector_deg;
        g.drop = drop_edge_group(layout, cfg.K, rng, options);
        g.gains = large_scale_gains(g.drop, PathLossModel{cfg.alpha, cfg.d_min_km});

        const auto sizes = even_subgroups(cfg.K, cfg.subgroups);
        std::vector<SupportSet> supports(static_cast<std::size_t>(cfg.K * cfg.L));
        for (int l = 0; l < cfg.L; ++l)
        {
            const auto per_user = sample_group_supports(cfg.M, cfg.s, cfg.c_overlap, sizes, rng);
            for (int k = 0; k < cfg.K; ++k)
                supports[static_cast<std::size_t>(k * cfg.L + l)] = per_user[static_cast<std::size_t>(k)];
        }
        g.channels = synthesize_channels<double>(supports, g.gains, cfg.M, cfg.P, rng);
        return g;
    }

    double noise_variance(const ScenarioConfig &cfg, double rho_edge_dB)
    {
        const double edge_gain = path_loss(cfg.radius_km, PathLossModel{cfg.alpha, cfg.d_min_km});
        return edge_gain / std::pow(10.0, rho_edge_dB / 10.0);
    }

    ActiveCellSet group_pi(const ScenarioConfig &cfg, const Eigen::MatrixXd &snr, double rho_th)
    {
        ActiveCellSet pi;
        if (cfg.pi_rule == "union")
        {
            for (Index k = 0; k < snr.rows(); ++k)
            {
                const Eigen::VectorXd row = snr.row(k).transpose();
                const auto own = active_cell_set(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())), rho_th);
                ActiveCellSet merged;
                std::set_union(pi.begin(), pi.end(), own.begin(), own.end(), std::back_inserter(merged));
                pi = std::move(merged);
            }
        }
        else
            pi = group_active_cell_set(snr, rho_th);
        if (pi.empty() || pi.front() != 0)
            pi.insert(pi.begin(), 0);
        return pi;
    }

    GroupEstimates estimate_group(const ScenarioConfig &cfg, const GroupInstance &group,
                                  const ProjectedPilots<double> &pilots, std::size_t rho_index, double noise_var,
                                  const std::vector<std::string> &estimators, Rng &noise_rng)
    {
        const auto &ch = group.channels;
        const Index L = ch.cells;
        const Index M = ch.antennas;

        GroupEstimates out;
        out.pi = group_pi(cfg, group.gains / noise_var, cfg.rho_th_linear(rho_index));

        const FeedbackTensor<double> fb = simulate_feedback(ch, pilots, noise_var, noise_rng);
        const std::span<const CMatrixd> R(fb.R);
        double gamma = cfg.gamma_th_schedule.at(rho_index);
        if (cfg.gamma_normalization == "feedback_power")
            gamma *= fb.mean_power();
        out.gamma_effective = gamma;
        const EstimatorConfig ec = estimator_config(cfg, gamma);

        std::vector<CMatrixd> theta;
        auto multi_cell = [&]() -> std::span<const CMatrixd>
        {
            if (theta.empty())
                theta = pilots.sensing_all(out.pi);
            return theta;
        };

        for (const auto &name : estimators)
        {
            if (name == "jmumc_omp")
                out.full[name] = embed(jmumc_omp<double>(R, multi_cell(), ec).H_hat, out.pi, L, M);
            else if (name == "jmu_omp")
                out.full[name] = embed(jmu_omp<double>(R, multi_cell(), ec).H_hat, out.pi, L, M);
            else if (name == "single_cell_joint_omp")
            {
                const ActiveCellSet target{0};
                const auto theta0 = pilots.sensing_all(target);
                out.full[name] = embed(single_cell_joint_omp<double>(R, theta0, ec).H_hat, target, L, M);
            }
            else if (name == "oracle_ls")
            {
                const auto supports = stacked_supports(ch, out.pi);
                const Index G = pilots.slots;
                const bool determined = std::all_of(supports.begin(), supports.end(),
                                                    [G](const SupportSet &s) { return static_cast<Index>(s.size()) <= G; });
                // below the support size the bound is the minimum-norm fit on the true support
                std::vector<CMatrixd> H = determined
                                              ? oracle_ls<double>(R, multi_cell(), supports).H_hat
                                              : detail::restricted_least_squares<double>(R, multi_cell(), supports).coeffs;
                out.full[name] = embed(H, out.pi, L, M);
            }
            else if (name == "perfect_csit")
            {
                ActiveCellSet all(static_cast<std::size_t>(L));
                std::iota(all.begin(), all.end(), 0);
                out.full[name] = stacked_channels(ch, all);
            }
            else
                throw std::invalid_argument("estimate_group: unknown estimator " + name);
        }
        return out;
    }

    std::vector<std::string> selected_estimators(const ScenarioConfig &cfg, const std::vector<std::string> &all)
    {
        if (cfg.estimators.empty())
            return all;
        std::vector<std::string> out;
        for (const auto &e : all)
            if (std::find(cfg.estimators.begin(), cfg.estimators.end(), e) != cfg.estimators.end())
                out.push_back(e);
        if (out.empty())
            throw ConfigError("estimators", "none of the requested estimators applies to this experiment");
        return out;
    }

    std::vector<ResultRow> run_mse_experiment(const ScenarioConfig &cfg)
    {
        cfg.validate();
        const auto names = selected_estimators(cfg, kMseEstimators);
        const CellLayout layout = hex_layout(cfg.L, cfg.radius_km);
        const CMatrixd F = unitary_dft<double>(cfg.M);
        const std::size_t nG = cfg.G_list.size();
        const std::size_t nR = cfg.rho_edge_list_dB.size();
        const std::size_t nE = names.size();

        std::vector<double> ratio_sum(nG * nR * nE, 0.0);
        for (int t = 0; t < cfg.trials; ++t)
        {
            Rng group_rng = make_substream(cfg.seed, {kMseGroup, u64(t)});
            const GroupInstance group = draw_group(cfg, layout, group_rng);

            std::vector<CMatrixd> truth;
            for (Index p = 0; p < cfg.P; ++p)
                truth.push_back(group.channels.cell_matrix(0, p));

            for (std::size_t gi = 0; gi < nG; ++gi)
            {
                const int G = cfg.G_list[gi];
                Rng pilot_rng = make_substream(cfg.seed, {kMsePilots, u64(t), u64(G)});
                const auto book = design_pilot_book<double>(cfg.L, cfg.M, cfg.P, G, pilot_rng);
                const ProjectedPilots<double> pilots(book, F);

                for (std::size_t ri = 0; ri < nR; ++ri)
                {
                    Rng noise_rng = make_substream(cfg.seed, {kMseNoise, u64(t), u64(G), u64(ri)});
                    const double sigma2 = noise_variance(cfg, cfg.rho_edge_list_dB[ri]);
                    const GroupEstimates est = estimate_group(cfg, group, pilots, ri, sigma2, names, noise_rng);

                    for (std::size_t e = 0; e < nE; ++e)
                    {
                        std::vector<CMatrixd> target;
                        for (const auto &H : est.full.at(names[e]))
                            target.push_back(H.topRows(cfg.M));
                        ratio_sum[(gi * nR + ri) * nE + e] += nmse_ratio<double>(target, truth);
                    }
                }
            }
        }

        std::vector<ResultRow> rows;
        for (std::size_t gi = 0; gi < nG; ++gi)
            for (std::size_t ri = 0; ri < nR; ++ri)
                for (std::size_t e = 0; e < nE; ++e)
                {
                    const double mean = ratio_sum[(gi * nR + ri) * nE + e] / cfg.trials;
                    rows.push_back({"mse", names[e], cfg.G_list[gi], cfg.rho_edge_list_dB[ri], "nmse_dB",
                                    ratio_to_db(mean), cfg.trials, cfg.seed});
                }
        return rows;
    }

    std::vector<ResultRow> run_throughput_experiment(const ScenarioConfig &cfg)
    {
        cfg.validate();
        const auto names = selected_estimators(cfg, kThroughputEstimators);
        const CellLayout layout = hex_layout(cfg.L, cfg.radius_km);
        const CMatrixd F = unitary_dft<double>(cfg.M);
        const std::size_t nR = cfg.rho_edge_list_dB.size();
        const std::size_t nE = names.size();
        const Index LM = static_cast<Index>(cfg.L) * cfg.M;
        const int G = cfg.G_throughput;

        std::vector<int> user_group(static_cast<std::size_t>(cfg.N));
        std::iota(user_group.begin(), user_group.end(), 0);

        std::vector<double> rate_sum(nR * nE, 0.0);
        for (int d = 0; d < cfg.trials; ++d)
        {
            // N groups, the first user of each is scheduled
            Rng group_rng = make_substream(cfg.seed, {kRateGroups, u64(d)});
            std::vector<GroupInstance> groups;
            groups.reserve(static_cast<std::size_t>(cfg.N));
            Eigen::MatrixXd scheduled_gains(cfg.N, cfg.L);
            std::vector<CMatrixd> H_true(static_cast<std::size_t>(cfg.P), CMatrixd(cfg.N, LM));
            for (int n = 0; n < cfg.N; ++n)
            {
                groups.push_back(draw_group(cfg, layout, group_rng));
                scheduled_gains.row(n) = groups.back().gains.row(0);
                for (Index p = 0; p < cfg.P; ++p)
                    for (int l = 0; l < cfg.L; ++l)
                        H_true[static_cast<std::size_t>(p)].block(n, l * cfg.M, 1, cfg.M) =
                            groups.back().channels.link(0, l).col(p).transpose();
            }
            const ServingAssignment serving = select_serving_sets(scheduled_gains, cfg.n_serve);

            Rng pilot_rng = make_substream(cfg.seed, {kRatePilots, u64(d)});
            const auto book = design_pilot_book<double>(cfg.L, cfg.M, cfg.P, G, pilot_rng);
            const ProjectedPilots<double> pilots(book, F);

            for (std::size_t ri = 0; ri < nR; ++ri)
            {
                Rng noise_rng = make_substream(cfg.seed, {kRateNoise, u64(d), u64(ri)});
                const double sigma2 = noise_variance(cfg, cfg.rho_edge_list_dB[ri]);

                std::vector<std::vector<CMatrixd>> H_est(nE, std::vector<CMatrixd>(static_cast<std::size_t>(cfg.P),
                                                                                   CMatrixd(cfg.N, LM)));
                for (int n = 0; n < cfg.N; ++n)
                {
                    const GroupEstimates est =
                        estimate_group(cfg, groups[static_cast<std::size_t>(n)], pilots, ri, sigma2, names, noise_rng);
                    for (std::size_t e = 0; e < nE; ++e)
                    {
                        const auto &full = est.full.at(names[e]);
                        for (Index p = 0; p < cfg.P; ++p)
                            H_est[e][static_cast<std::size_t>(p)].row(n) =
                                full[static_cast<std::size_t>(p)].col(0).transpose();
                    }
                }

                for (std::size_t e = 0; e < nE; ++e)
                {
                    const PrecodingReport report = evaluate_throughput<double>(
                        H_true, H_est[e], serving, cfg.M, sigma2, static_cast<double>(cfg.N), user_group);
                    rate_sum[ri * nE + e] += report.average;
                }
            }
        }

        std::vector<ResultRow> rows;
        for (std::size_t ri = 0; ri < nR; ++ri)
            for (std::size_t e = 0; e < nE; ++e)
                rows.push_back({"throughput", names[e], G, cfg.rho_edge_list_dB[ri], "throughput_bit_per_user",
                                rate_sum[ri * nE + e] / cfg.trials, cfg.trials, cfg.seed});
        return rows;
    }

    std::string format_value(double value)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", value);
        return buf;
    }

    void write_csv(std::ostream &os, const std::vector<ResultRow> &rows)
    {
        os << kCsvHeader << '\n';
        for (const auto &r : rows)
            os << r.experiment << ',' << r.estimator << ',' << r.G << ',' << format_value(r.rho_edge_dB) << ','
               << r.metric << ',' << format_value(r.value) << ',' << r.trials << ',' << r.seed << '\n';
    }
}
