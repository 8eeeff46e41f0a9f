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

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace csit;

namespace
{
    ScenarioConfig small_config()
    {
        std::istringstream text(R"(# reduced scenario
M = 32
K = 4
N = 4
P = 2
s = 3
c_overlap = 2
G_list = 20, 40
rho_edge_list_dB = 20
rho_th_schedule = 10
gamma_th_schedule = 0.005
trials = 2
seed = 17
)");
        ScenarioConfig cfg = parse_config(text);
        finalize_config(cfg);
        return cfg;
    }

    std::string to_csv(const std::vector<ResultRow> &rows)
    {
        std::ostringstream os;
        write_csv(os, rows);
        return os.str();
    }

    std::string slurp(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    std::string error_key(const std::string &text)
    {
        std::istringstream is(text);
        try
        {
            ScenarioConfig cfg = parse_config(is);
            finalize_config(cfg);
        }
        catch (const ConfigError &e)
        {
            return e.key();
        }
        return {};
    }
}

TEST_CASE("defaults mirror the reference setup", "[config]")
{
    ScenarioConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.L == 7);
    CHECK(cfg.M == 128);
    CHECK(cfg.P == 50);
    CHECK(cfg.K == 10);
    CHECK(cfg.N == 24);
    CHECK(cfg.s == 6);
    CHECK(cfg.c_overlap == 4);
    CHECK(cfg.n_serve == 3);
    CHECK(cfg.trials == 100);
    CHECK(cfg.rho_edge_list_dB == std::vector<double>{10, 15, 20, 25, 30});
    CHECK(cfg.rho_th_schedule == std::vector<double>{3, 5, 10, 10, 10});
    CHECK(cfg.gamma_th_schedule == std::vector<double>{0.006, 0.004, 0.002, 0.0004, 0.0003});
    CHECK(derived_subcarriers(10e6, 5e-6) == 50);

    std::istringstream derive("P = 7\nderive_P = true\nf_s = 10e6\ntau_max = 5e-6\n");
    ScenarioConfig d = parse_config(derive);
    finalize_config(d);
    CHECK(d.P == 50);

    cfg.rho_th_unit = "dB";
    CHECK(std::abs(cfg.rho_th_linear(2) - 10.0) < 1e-12);
    CHECK(std::abs(cfg.rho_th_linear(0) - std::pow(10.0, 0.3)) < 1e-12);
}

TEST_CASE("configuration errors name the offending key", "[config]")
{
    CHECK(error_key("bogus = 1\n") == "bogus");
    CHECK(error_key("M = twelve\n") == "M");
    CHECK(error_key("trials = 0\n") == "trials");
    CHECK(error_key("gamma_th_schedule = 0.1, 0.2\n") == "gamma_th_schedule");
    CHECK(error_key("rho_th_schedule = 1,2,3\n") == "rho_th_schedule");
    CHECK(error_key("L = 3\n") == "L");
    CHECK(error_key("c_overlap = 9\n") == "c_overlap");
    CHECK(error_key("pi_rule = median\n") == "pi_rule");
    CHECK(error_key("estimators = jmumc_omp, lasso\n") == "estimators");
    CHECK(error_key("G_list = 10, , 20\n") == "G_list");
    CHECK(error_key("just some words\n") == "just some words");
    CHECK(error_key("# comment only\n\nM = 64 # trailing\n").empty());

    ScenarioConfig cfg;
    apply_override(cfg, "seed=99");
    apply_override(cfg, " G_list = 30,60 ");
    CHECK(cfg.seed == 99);
    CHECK(cfg.G_list == std::vector<int>{30, 60});
    CHECK_THROWS_AS(apply_override(cfg, "seed"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "unknown=1"), ConfigError);
}

TEST_CASE("mse experiment emits one row per point and estimator", "[mse]")
{
    const ScenarioConfig cfg = small_config();
    const auto rows = run_mse_experiment(cfg);
    REQUIRE(rows.size() == 8);
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        CHECK(rows[i].experiment == "mse");
        CHECK(rows[i].metric == "nmse_dB");
        CHECK(rows[i].estimator == kMseEstimators[i % 4]);
        CHECK(rows[i].G == (i < 4 ? 20 : 40));
        CHECK(rows[i].rho_edge_dB == 20.0);
        CHECK(rows[i].trials == 2);
        CHECK(rows[i].seed == 17);
        CHECK(std::isfinite(rows[i].value));
    }

    // reproducible, and sensitive to the seed
    CHECK(to_csv(rows) == to_csv(run_mse_experiment(cfg)));
    ScenarioConfig other = cfg;
    other.seed = 18;
    CHECK(to_csv(rows) != to_csv(run_mse_experiment(other)));

    ScenarioConfig only = cfg;
    only.estimators = {"oracle_ls", "jmumc_omp"};
    const auto two = run_mse_experiment(only);
    REQUIRE(two.size() == 4);
    CHECK(two[0].estimator == "jmumc_omp");
    CHECK(two[0].value == rows[0].value);
    CHECK(two[1].value == rows[3].value);
}

TEST_CASE("throughput experiment rows", "[throughput]")
{
    ScenarioConfig cfg = small_config();
    cfg.G_throughput = 30;
    cfg.rho_edge_list_dB = {10, 15, 20, 25, 30};
    cfg.rho_th_schedule = {3, 5, 10, 10, 10};
    cfg.gamma_th_schedule = {0.006, 0.004, 0.002, 0.0004, 0.0003};
    cfg.trials = 1;
    const auto rows = run_throughput_experiment(cfg);
    REQUIRE(rows.size() == 25);
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        CHECK(rows[i].experiment == "throughput");
        CHECK(rows[i].metric == "throughput_bit_per_user");
        CHECK(rows[i].estimator == kThroughputEstimators[i % 5]);
        CHECK(rows[i].G == 30);
        CHECK(rows[i].value >= 0.0);
    }
    // perfect CSIT bounds the single-cell baseline at every point
    for (std::size_t i = 0; i < rows.size(); i += 5)
        CHECK(rows[i].value >= rows[i + 4].value);
    CHECK(to_csv(rows) == to_csv(run_throughput_experiment(cfg)));
}

TEST_CASE("csv layout", "[csv]")
{
    const std::vector<ResultRow> rows{{"mse", "jmumc_omp", 55, 20, "nmse_dB", -15.123456789, 100, 1},
                                      {"throughput", "oracle_ls", 55, 12.5, "throughput_bit_per_user", 1234567.0, 3, 9}};
    const std::string csv = to_csv(rows);
    CHECK(csv == "experiment,estimator,G,rho_edge_dB,metric,value,trials,seed\n"
                 "mse,jmumc_omp,55,20,nmse_dB,-15.1235,100,1\n"
                 "throughput,oracle_ls,55,12.5,throughput_bit_per_user,1.23457e+06,3,9\n");
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("command line runs are byte identical", "[cli]")
{
    const char *bin = std::getenv("SIMULATE_BIN");
    if (bin == nullptr)
        SKIP("SIMULATE_BIN not set");

    const auto dir = std::filesystem::temp_directory_path() / "csit_cli_test";
    std::filesystem::create_directories(dir);
    const std::string cfg_path = (dir / "small.cfg").string();
    {
        std::ofstream out(cfg_path);
        out << "M = 32\nK = 4\nP = 2\ns = 3\nc_overlap = 2\nG_list = 20\nrho_edge_list_dB = 20\n"
               "rho_th_schedule = 10\ngamma_th_schedule = 0.005\n";
    }
    const std::string a = (dir / "a.csv").string();
    const std::string b = (dir / "b.csv").string();
    const std::string base = std::string(bin) + " mse --config " + cfg_path + " --trials 2 --seed 5";
    REQUIRE(std::system((base + " --out " + a).c_str()) == 0);
    REQUIRE(std::system((base + " --out " + b).c_str()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind("experiment,estimator,G,rho_edge_dB,metric,value,trials,seed\n", 0) == 0);
    CHECK(slurp(a).find(",2,5\n") != std::string::npos);

    // overrides apply after the file
    const std::string c = (dir / "c.csv").string();
    REQUIRE(std::system((base + " --override G_list=24 --out " + c).c_str()) == 0);
    CHECK(slurp(c).find(",24,") != std::string::npos);

    // unknown keys are fatal
    const std::string bad = base + " --override nonsense=1 --out " + (dir / "d.csv").string() + " 2>/dev/null";
    CHECK(std::system(bad.c_str()) != 0);

    const std::string pb = (dir / "book.bin").string();
    REQUIRE(std::system((std::string(bin) + " pilots --config " + cfg_path + " --G 20 --binary --out " + pb).c_str()) == 0);
    std::ifstream in(pb, std::ios::binary);
    const PilotBook<double> book = read_pilot_book_binary(in);
    CHECK(book.slots == 20);
    CHECK(book.antennas == 32);
    std::filesystem::remove_all(dir);
}
