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


#ifndef CSIT_EXPERIMENTS_HPP
#define CSIT_EXPERIMENTS_HPP

#include "csit/channel_model.hpp"
#include "csit/pilot_measurement.hpp"
#include "csit/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace csit
{
    struct ResultRow
    {
        std::string experiment; // mse | throughput
        std::string estimator;
        int G = 0;
        double rho_edge_dB = 0.0;
        std::string metric;     // nmse_dB | throughput_bit_per_user
        double value = 0.0;
        int trials = 0;
        std::uint64_t seed = 0;
    };

    inline const std::vector<std::string> kMseEstimators{"jmumc_omp", "jmu_omp", "single_cell_joint_omp", "oracle_ls"};
    inline const std::vector<std::string> kThroughputEstimators{"perfect_csit", "oracle_ls", "jmumc_omp", "jmu_omp",
                                                                "single_cell_joint_omp"};

    /// One group of K cell-edge users with its channels to every cell.
    struct GroupInstance
    {
        UserDrop drop;
        Eigen::MatrixXd gains; // K x L
        AngularChannelSet<double> channels;
    };

    /// Edge drop in a random sector, per-cell group supports (common core of
    /// c_overlap bins, subgroups extend it) and Rayleigh coefficients.
    GroupInstance draw_group(const ScenarioConfig &cfg, const CellLayout &layout, Rng &rng);

    /// Feedback noise variance putting the cell-edge SNR at rho_edge_dB for
    /// unit transmit power per antenna and slot.
    double noise_variance(const ScenarioConfig &cfg, double rho_edge_dB);

    /// The group's shared active cell set. The target cell 0 is always kept
    /// since its channel is the estimation target.
    ActiveCellSet group_pi(const ScenarioConfig &cfg, const Eigen::MatrixXd &snr, double rho_th);

    /// Channel estimates of one group for the requested estimators. Every
    /// entry is one (L M) x K matrix per subcarrier, cell blocks in cell
    /// order; blocks an estimator does not model are zero.
    struct GroupEstimates
    {
        ActiveCellSet pi;
        double gamma_effective = 0.0;
        std::map<std::string, std::vector<CMatrixd>> full;
    };

    GroupEstimates estimate_group(const ScenarioConfig &cfg, const GroupInstance &group,
                                  const ProjectedPilots<double> &pilots, std::size_t rho_index, double noise_var,
                                  const std::vector<std::string> &estimators, Rng &noise_rng);

    /// Estimators requested by cfg, in the experiment's canonical order.
    std::vector<std::string> selected_estimators(const ScenarioConfig &cfg, const std::vector<std::string> &all);

    /// NMSE of the target-cell channels for every (G, rho_edge, estimator),
    /// averaged linearly over trials and reported in dB.
    std::vector<ResultRow> run_mse_experiment(const ScenarioConfig &cfg);

    /// Mean per-user rate with joint ZF over the n_serve best cells for every
    /// (rho_edge, estimator) at G = G_throughput, averaged over trials.
    std::vector<ResultRow> run_throughput_experiment(const ScenarioConfig &cfg);

    inline const char *kCsvHeader = "experiment,estimator,G,rho_edge_dB,metric,value,trials,seed";

    /// 6 significant digits, shortest form.
    std::string format_value(double value);

    /// Header plus one line per row, LF line endings.
    void write_csv(std::ostream &os, const std::vector<ResultRow> &rows);
}

#endif
