// SPDX-License-Identifier: Apache-2.0
//
// cpsc-fama: link-level simulator for codebook-based fluid antenna uplink access
// Copyright (C) 2026 The cpsc-fama Authors
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

// cpsc: run experiments, sweeps, validation suites and plots from the shell.
//
// Exit codes: 0 success, 1 numerical or validation failure, 2 usage,
// configuration or schema error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpsc/codebook.hpp"
#include "cpsc/config.hpp"
#include "cpsc/error.hpp"
#include "cpsc/plot.hpp"
#include "cpsc/sim.hpp"
#include "cpsc/validation.hpp"

namespace fs = std::filesystem;
using namespace cpsc;

namespace
{

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct ExperimentArgs
{
    std::string config;
    std::string out = ".";
    std::vector<std::string> sets;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
};

void add_experiment_flags(CLI::App *cmd, ExperimentArgs &args)
{
    cmd->add_option("--config", args.config, "Experiment config (JSON)")->required();
    cmd->add_option("--out", args.out, "Output directory for the CSV");
    cmd->add_option("--set", args.sets, "Override a config field, KEY=VALUE (repeatable)");
    cmd->add_option("--trials", args.trials, "Override the trial count");
    cmd->add_option("--seed", args.seed, "Override the master seed");
}

ExperimentConfig load_with_overrides(const ExperimentArgs &args)
{
    ExperimentConfig c = load_config(args.config);
    for (const std::string &s : args.sets)
        apply_override(c, s);
    if (args.trials)
        apply_override(c, "trials=" + std::to_string(*args.trials));
    if (args.seed)
        apply_override(c, "seed=" + std::to_string(*args.seed));
    return c;
}

std::string row_text(const PointResult &p)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %10g %12.5f %10.5f %12.5f %10.5f %10.4f %8zu", p.param.c_str(), p.value,
                  p.mean_rate_per_user, p.ci95, p.mean_sum_rate, p.sum_ci95, p.collision_rate, p.trials);
    return buf;
}

int run_experiment(const ExperimentArgs &args, bool sweep)
{
    ExperimentConfig c = load_with_overrides(args);
    if (sweep && !c.sweep)
        throw ConfigError(args.config + ": no sweep section");
    if (!sweep)
        c.sweep.reset();
    for (const std::string &w : c.warnings())
        std::cerr << "warning: " << w << '\n';

    fs::create_directories(args.out);
    const fs::path csv = fs::path(args.out) / (fs::path(args.config).stem().string() + ".csv");

    std::printf("%-8s %10s %12s %10s %12s %10s %10s %8s\n", "param", "value", "rate/user", "ci95", "sum rate",
                "sum ci95", "collision", "trials");
    RunOptions options;
    options.on_point = [](const PointResult &p) {
        std::printf("%s\n", row_text(p).c_str());
        std::fflush(stdout);
    };
    const SweepResult result = run_sweep(c, options);
    write_sweep_csv(csv.string(), result);
    std::printf("wrote %s\n", csv.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Codebook-based fluid antenna uplink access simulator"};
    app.require_subcommand(1);

    ExperimentArgs run_args, sweep_args;
    auto *run = app.add_subcommand("run", "Run one configuration (sweep section ignored)");
    add_experiment_flags(run, run_args);
    auto *sweep = app.add_subcommand("sweep", "Run every point of the config's sweep");
    add_experiment_flags(sweep, sweep_args);

    std::vector<std::string> suites;
    std::string validate_csv, validate_config;
    auto *validate = app.add_subcommand("validate", "Run the oracle validation suites");
    validate->add_option("--suite", suites, "Suite to run (repeatable; default all)");
    validate->add_option("--csv", validate_csv, "Also check a sweep CSV's collision column against the analytic curve");
    validate->add_option("--config", validate_config, "Config that produced --csv");

    std::vector<std::string> plot_csv;
    std::string plot_out, plot_metric = "rate", plot_title, plot_config;
    bool plot_analytic = false;
    auto *plot = app.add_subcommand("plot", "Render sweep CSVs as an SVG line chart");
    plot->add_option("--csv", plot_csv, "Sweep CSV (repeatable, one series each)")->required();
    plot->add_option("--out", plot_out, "SVG file, or directory for <first csv stem>.svg")->required();
    plot->add_option("--metric", plot_metric, "rate, sum-rate or collision");
    plot->add_option("--title", plot_title, "Chart title");
    plot->add_flag("--analytic", plot_analytic, "Overlay 1 - P_unique (collision charts)");
    plot->add_option("--config", plot_config, "Config supplying M and U for the overlay");

    std::size_t export_m = 0;
    std::string export_out;
    auto *exp = app.add_subcommand("export-codebook", "Write the M-point DFT codebook as CSV");
    exp->add_option("--m", export_m, "Number of BS antennas")->required();
    exp->add_option("--out", export_out, "Output CSV path")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try
    {
        if (*run)
            return run_experiment(run_args, false);
        if (*sweep)
            return run_experiment(sweep_args, true);
        if (*validate)
        {
            const auto results = run_validation(suites);
            bool ok = true;
            for (const SuiteResult &r : results)
            {
                std::printf("%-12s %s  %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.detail.c_str());
                ok = ok && r.passed;
            }
            if (!validate_csv.empty())
            {
                if (validate_config.empty())
                    throw ConfigError("--csv needs --config");
                const SuiteResult r =
                    check_collision_csv(read_sweep_csv(validate_csv), load_config(validate_config));
                std::printf("%-12s %s  %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.detail.c_str());
                ok = ok && r.passed;
            }
            return ok ? 0 : kExitFailure;
        }
        if (*plot)
        {
            PlotRequest req;
            req.metric = parse_plot_metric(plot_metric);
            req.title = plot_title;
            req.analytic_overlay = plot_analytic;
            if (!plot_config.empty())
            {
                const ExperimentConfig c = load_config(plot_config);
                req.users = c.u;
                req.codewords = c.m;
            }
            fs::path out(plot_out);
            if (out.extension() != ".svg")
            {
                fs::create_directories(out);
                out /= fs::path(plot_csv.front()).stem().string() + ".svg";
            }
            plot_sweep_files(plot_csv, out.string(), req);
            std::printf("wrote %s\n", out.string().c_str());
            return 0;
        }
        if (*exp)
        {
            std::ofstream out(export_out);
            if (!out)
                throw InvalidArgument("cannot write '" + export_out + "'");
            write_codebook_csv(out, make_dft_codebook(export_m));
            return 0;
        }
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const SchemaError &e)
    {
        std::cerr << "schema error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const InvalidArgument &e)
    {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return 0;
}
