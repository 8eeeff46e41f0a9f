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


#ifndef CSIT_SCENARIO_HPP
#define CSIT_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace csit
{
    /// Raised for any invalid configuration; key() names the offending field.
    class ConfigError : public std::invalid_argument
    {
    public:
        ConfigError(std::string key, const std::string &message)
            : std::invalid_argument("config key '" + key + "': " + message), key_(std::move(key))
        {
        }

        const std::string &key() const { return key_; }

    private:
        std::string key_;
    };

    struct ScenarioConfig
    {
        // network and channel
        int L = 7;
        int M = 128;
        int K = 10;               // users per group
        int N = 24;               // scheduled users (one per group) in the throughput study
        int P = 50;
        double radius_km = 1.0;
        double alpha = 3.8;       // path-loss exponent
        double d_min_km = 0.035;
        double sector_deg = 60.0;
        int s = 6;
        int c_overlap = 4;
        int subgroups = 2;

        // sweeps and schedules (schedules are indexed like rho_edge_list_dB)
        std::vector<int> G_list{20, 30, 40, 50, 55, 60, 70, 80};
        int G_throughput = 55;
        std::vector<double> rho_edge_list_dB{10, 15, 20, 25, 30};
        std::vector<double> rho_th_schedule{3, 5, 10, 10, 10};
        std::vector<double> gamma_th_schedule{0.006, 0.004, 0.002, 0.0004, 0.0003};
        std::string rho_th_unit = "linear";               // linear | dB
        std::string gamma_normalization = "feedback_power"; // feedback_power | none
        std::string pi_rule = "mean";                     // mean | union
        int max_iter = 0;                                 // 0: G
        std::vector<std::string> estimators;              // empty: all of the experiment's estimators

        // precoding
        int n_serve = 3;

        // Monte-Carlo
        int trials = 100;
        std::uint64_t seed = 1;

        // OFDM numerology; with derive_P the subcarrier count is round(f_s * tau_max)
        double f_c = 2e9;
        double f_s = 10e6;
        double tau_max = 5e-6;
        bool derive_P = false;

        /// Throws ConfigError naming the first offending key.
        void validate() const;

        /// rho_th for sweep point i as a linear SNR.
        double rho_th_linear(std::size_t i) const;
    };

    /// Set one field from its textual value. Unknown keys and malformed
    /// values throw ConfigError. Lists are comma separated.
    void apply_setting(ScenarioConfig &cfg, const std::string &key, const std::string &value);

    /// Apply "key=value"; used for command-line overrides.
    void apply_override(ScenarioConfig &cfg, const std::string &assignment);

    /// Flat "key = value" text, one per line; '#' starts a comment. Applies
    /// on top of the defaults and derives P when derive_P is set, without
    /// validating (overrides may follow).
    ScenarioConfig parse_config(std::istream &is);
    ScenarioConfig load_config(const std::string &path);

    /// Derive P if requested, then validate.
    void finalize_config(ScenarioConfig &cfg);

    /// round(f_s * tau_max)
    int derived_subcarriers(double f_s, double tau_max);
}

#endif
