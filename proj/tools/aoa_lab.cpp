// SPDX-License-Identifier: Apache-2.0
//
// aoa-lab: angle-of-arrival bounds and antenna selection for massive MIMO arrays
// Copyright (C) 2026 The aoa-lab Authors
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

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "aoa/cli/config.hpp"
#include "aoa/cli/run.hpp"

namespace
{
    std::string experiment_list()
    {
        std::string s;
        for (auto e : aoa::cli::experiments)
            s += std::string(s.empty() ? "" : ", ") + std::string(e);
        return s;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"aoa-lab: angle-of-arrival bounds, antenna selection and localization efficiency experiments"};
    app.set_version_flag("--version", aoa::version_string);

    aoa::cli::FlagValues flags;
    std::string positional;
    std::string config_file, out_file, m_value;
    std::uint64_t seed = 0;
    int threads = 0;

    app.add_option("name", positional, "Experiment to run: " + experiment_list());
    app.add_option("-e,--experiment", flags.experiment, "Experiment to run (alternative to the positional form)");
    app.add_option("-c,--config", config_file, "Config file with key = value lines");
    app.add_option("-o,--out", out_file, "CSV output path (default: stdout)");
    auto *seed_opt = app.add_option("--seed", seed, "Master seed (default: AOA_LAB_SEED, else 1)");
    auto *threads_opt = app.add_option("--threads", threads, "Worker threads (default: all cores)")->check(CLI::PositiveNumber);
    app.add_flag("--plot", flags.plot, "Also write an SVG plot next to the CSV");
    app.add_option("--set", flags.overrides, "Parameter override key=value, repeatable")->take_all()->allow_extra_args(false);
    app.add_option("--M", m_value, "Shorthand for --set M=<value>");
    app.footer("Keys: " + [] {
        std::string s;
        for (const auto &k : aoa::cli::known_keys())
            s += (s.empty() ? "" : " ") + k;
        return s;
    }());

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (!positional.empty() && !flags.experiment.empty() && positional != flags.experiment)
    {
        std::cerr << "error: experiment given twice ('" << positional << "' and '" << flags.experiment << "')\n";
        return 2;
    }
    if (flags.experiment.empty())
        flags.experiment = positional;
    if (!aoa::cli::is_experiment(flags.experiment))
    {
        if (flags.experiment.empty())
            std::cerr << "error: no experiment given\n";
        else
            std::cerr << "error: unknown experiment '" << flags.experiment << "'\n";
        std::cerr << app.help();
        return 2;
    }

    if (!config_file.empty())
        flags.config_file = config_file;
    if (!out_file.empty())
        flags.out = out_file;
    if (*seed_opt)
        flags.seed = seed;
    if (*threads_opt)
        flags.threads = threads;
    if (!m_value.empty())
        flags.overrides.push_back("M=" + m_value);
    if (const char *env = std::getenv("AOA_LAB_SEED"))
        flags.env_seed = env;

    aoa::cli::RunConfig config;
    try
    {
        config = aoa::cli::resolve_config(flags);
    }
    catch (const aoa::cli::ConfigError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const aoa::cli::ValidationError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return aoa::cli::run_experiment(config, std::cout, std::cerr);
}
