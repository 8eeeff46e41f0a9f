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


// simulate: command-line front end for the estimation and throughput studies.
//
//   simulate mse --config run.cfg --out nmse.csv [--seed S] [--trials T] [--override key=value]...
//   simulate throughput --config run.cfg --out rate.csv ...
//   simulate pilots --config run.cfg --G 55 --out book.csv [--binary]

#include "csit/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace
{
    struct CommonOptions
    {
        std::string config;
        std::string out;
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::vector<std::string> overrides;
    };

    void add_common(CLI::App *cmd, CommonOptions &o)
    {
        cmd->add_option("--config", o.config, "flat key = value scenario file")->check(CLI::ExistingFile);
        cmd->add_option("--out", o.out, "output file")->required();
        cmd->add_option("--seed", o.seed, "master seed");
        cmd->add_option("--trials", o.trials, "Monte-Carlo trials (drops)");
        cmd->add_option("--override", o.overrides, "key=value, applied after the config file")->take_all();
    }

    csit::ScenarioConfig build_config(const CommonOptions &o)
    {
        csit::ScenarioConfig cfg = o.config.empty() ? csit::ScenarioConfig{} : csit::load_config(o.config);
        for (const auto &kv : o.overrides)
            csit::apply_override(cfg, kv);
        if (o.seed)
            cfg.seed = *o.seed;
        if (o.trials)
            cfg.trials = *o.trials;
        csit::finalize_config(cfg);
        return cfg;
    }

    void write_rows(const std::string &path, const std::vector<csit::ResultRow> &rows)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open " + path + " for writing");
        csit::write_csv(out, rows);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"CSIT estimation and joint precoding simulator"};
    app.require_subcommand(1);

    CommonOptions mse_opts, rate_opts, pilot_opts;
    auto *mse = app.add_subcommand("mse", "NMSE versus pilot overhead G");
    add_common(mse, mse_opts);
    auto *rate = app.add_subcommand("throughput", "per-user rate with joint ZF at G = G_throughput");
    add_common(rate, rate_opts);

    auto *pilots = app.add_subcommand("pilots", "write the pilot book of one realization");
    add_common(pilots, pilot_opts);
    int pilot_G = 55;
    bool binary = false;
    pilots->add_option("--G", pilot_G, "pilot slots")->check(CLI::PositiveNumber);
    pilots->add_flag("--binary", binary, "binary instead of CSV");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (mse->parsed())
            write_rows(mse_opts.out, csit::run_mse_experiment(build_config(mse_opts)));
        else if (rate->parsed())
            write_rows(rate_opts.out, csit::run_throughput_experiment(build_config(rate_opts)));
        else
        {
            const csit::ScenarioConfig cfg = build_config(pilot_opts);
            csit::Rng rng = csit::make_substream(cfg.seed, {2, 0, static_cast<std::uint64_t>(pilot_G)});
            const auto book = csit::design_pilot_book<double>(cfg.L, cfg.M, cfg.P, pilot_G, rng);
            std::ofstream out(pilot_opts.out, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot open " + pilot_opts.out + " for writing");
            if (binary)
                csit::write_pilot_book_binary(out, book);
            else
                csit::write_pilot_book_csv(out, book);
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "simulate: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
