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


#include "csit/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace csit
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        }

        template <typename T>
        T parse_number(const std::string &key, const std::string &text)
        {
            const std::string t = trim(text);
            T value{};
            const auto *end = t.data() + t.size();
            const auto [ptr, ec] = std::from_chars(t.data(), end, value);
            if (t.empty() || ec != std::errc() || ptr != end)
                throw ConfigError(key, "cannot parse '" + t + "' as a number");
            return value;
        }

        template <typename T>
        std::vector<T> parse_list(const std::string &key, const std::string &text)
        {
            std::vector<T> out;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ','))
                out.push_back(parse_number<T>(key, item));
            if (out.empty())
                throw ConfigError(key, "empty list");
            return out;
        }

        bool parse_bool(const std::string &key, const std::string &text)
        {
            const std::string t = trim(text);
            if (t == "true" || t == "1")
                return true;
            if (t == "false" || t == "0")
                return false;
            throw ConfigError(key, "expected true or false, got '" + t + "'");
        }

        std::string parse_choice(const std::string &key, const std::string &text, std::initializer_list<const char *> allowed)
        {
            const std::string t = trim(text);
            for (const char *a : allowed)
                if (t == a)
                    return t;
            throw ConfigError(key, "unsupported value '" + t + "'");
        }

        using Setter = std::function<void(ScenarioConfig &, const std::string &, const std::string &)>;

        template <typename T>
        Setter number(T ScenarioConfig::*field)
        {
            return [field](ScenarioConfig &c, const std::string &k, const std::string &v) { c.*field = parse_number<T>(k, v); };
        }

        template <typename T>
        Setter list(std::vector<T> ScenarioConfig::*field)
        {
            return [field](ScenarioConfig &c, const std::string &k, const std::string &v) { c.*field = parse_list<T>(k, v); };
        }

        const std::map<std::string, Setter> &setters()
        {
            static const std::map<std::string, Setter> table{
                {"L", number(&ScenarioConfig::L)},
                {"M", number(&ScenarioConfig::M)},
                {"K", number(&ScenarioConfig::K)},
                {"N", number(&ScenarioConfig::N)},
                {"P", number(&ScenarioConfig::P)},
                {"radius_km", number(&ScenarioConfig::radius_km)},
                {"alpha", number(&ScenarioConfig::alpha)},
                {"d_min_km", number(&ScenarioConfig::d_min_km)},
                {"sector_deg", number(&ScenarioConfig::sector_deg)},
                {"s", number(&ScenarioConfig::s)},
                {"c_overlap", number(&ScenarioConfig::c_overlap)},
                {"subgroups", number(&ScenarioConfig::subgroups)},
                {"G_list", list(&ScenarioConfig::G_list)},
                {"G_throughput", number(&ScenarioConfig::G_throughput)},
                {"rho_edge_list_dB", list(&ScenarioConfig::rho_edge_list_dB)},
                {"rho_th_schedule", list(&ScenarioConfig::rho_th_schedule)},
                {"gamma_th_schedule", list(&ScenarioConfig::gamma_th_schedule)},
                {"rho_th_unit",
                 [](ScenarioConfig &c, const std::string &k, const std::string &v)
                 { c.rho_th_unit = parse_choice(k, v, {"linear", "dB"}); }},
                {"gamma_normalization",
                 [](ScenarioConfig &c, const std::string &k, const std::string &v)
                 { c.gamma_normalization = parse_choice(k, v, {"feedback_power", "none"}); }},
                {"pi_rule",
                 [](ScenarioConfig &c, const std::string &k, const std::string &v)
                 { c.pi_rule = parse_choice(k, v, {"mean", "union"}); }},
                {"max_iter", number(&ScenarioConfig::max_iter)},
                {"estimators",
                 [](ScenarioConfig &c, const std::string &, const std::string &v)
                 {
                     c.estimators.clear();
                     std::stringstream ss(v);
                     std::string item;
                     while (std::getline(ss, item, ','))
                         if (!trim(item).empty())
                             c.estimators.push_back(trim(item));
                 }},
                {"n_serve", number(&ScenarioConfig::n_serve)},
                {"trials", number(&ScenarioConfig::trials)},
                {"seed", number(&ScenarioConfig::seed)},
                {"f_c", number(&ScenarioConfig::f_c)},
                {"f_s", number(&ScenarioConfig::f_s)},
                {"tau_max", number(&ScenarioConfig::tau_max)},
                {"derive_P",
                 [](ScenarioConfig &c, const std::string &k, const std::string &v) { c.derive_P = parse_bool(k, v); }},
            };
            return table;
        }

        void require(bool ok, const char *key, const std::string &message)
        {
            if (!ok)
                throw ConfigError(key, message);
        }
    }

    void apply_setting(ScenarioConfig &cfg, const std::string &key, const std::string &value)
    {
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ConfigError(key, "unknown key");
        it->second(cfg, key, value);
    }

    void apply_override(ScenarioConfig &cfg, const std::string &assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw ConfigError(trim(assignment), "override must have the form key=value");
        apply_setting(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
    }

    ScenarioConfig parse_config(std::istream &is)
    {
        ScenarioConfig cfg;
        std::string line;
        int number = 0;
        while (std::getline(is, line))
        {
            ++number;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(line, "line " + std::to_string(number) + " is not of the form key = value");
            apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
        }
        return cfg;
    }

    ScenarioConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open config file " + path);
        return parse_config(in);
    }

    int derived_subcarriers(double f_s, double tau_max) { return static_cast<int>(std::lround(f_s * tau_max)); }

    void finalize_config(ScenarioConfig &cfg)
    {
        if (cfg.derive_P)
        {
            require(cfg.f_s > 0.0 && cfg.tau_max > 0.0, "f_s", "f_s and tau_max must be positive to derive P");
            cfg.P = derived_subcarriers(cfg.f_s, cfg.tau_max);
        }
        cfg.validate();
    }

    void ScenarioConfig::validate() const
    {
        require(L == 1 || L == 7, "L", "only 1 or 7 cells are supported");
        require(M >= 1, "M", "must be positive");
        require(K >= 1, "K", "must be positive");
        require(N >= 1, "N", "must be positive");
        require(P >= 1, "P", "must be positive");
        require(radius_km > 0.0, "radius_km", "must be positive");
        require(alpha > 0.0, "alpha", "must be positive");
        require(d_min_km > 0.0, "d_min_km", "must be positive");
        require(sector_deg > 0.0 && sector_deg <= 360.0, "sector_deg", "must lie in (0, 360]");
        require(s >= 1 && s <= M, "s", "must lie in [1, M]");
        require(c_overlap >= 0 && c_overlap <= s, "c_overlap", "must lie in [0, s]");
        require(subgroups >= 1 && subgroups <= K, "subgroups", "must lie in [1, K]");
        require(!G_list.empty(), "G_list", "must not be empty");
        for (int g : G_list)
            require(g >= 1, "G_list", "entries must be positive");
        require(G_throughput >= 1, "G_throughput", "must be positive");
        require(!rho_edge_list_dB.empty(), "rho_edge_list_dB", "must not be empty");
        require(rho_th_schedule.size() == rho_edge_list_dB.size(), "rho_th_schedule",
                "must have one entry per rho_edge_list_dB point");
        require(gamma_th_schedule.size() == rho_edge_list_dB.size(), "gamma_th_schedule",
                "must have one entry per rho_edge_list_dB point");
        for (double g : gamma_th_schedule)
            require(g >= 0.0, "gamma_th_schedule", "entries must be non-negative");
        require(max_iter >= 0, "max_iter", "must be non-negative");
        static const std::vector<std::string> known{"jmumc_omp", "jmu_omp", "single_cell_joint_omp", "oracle_ls",
                                                    "perfect_csit"};
        for (const auto &e : estimators)
            require(std::find(known.begin(), known.end(), e) != known.end(), "estimators", "unknown estimator '" + e + "'");
        require(n_serve >= 1, "n_serve", "must be at least 1");
        require(trials >= 1, "trials", "must be at least 1");
    }

    double ScenarioConfig::rho_th_linear(std::size_t i) const
    {
        const double v = rho_th_schedule.at(i);
        return rho_th_unit == "dB" ? std::pow(10.0, v / 10.0) : v;
    }
}
