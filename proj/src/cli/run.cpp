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

#include "aoa/cli/run.hpp"
#include "aoa/errors.hpp"
#include "aoa/montecarlo.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

namespace aoa::cli
{
    namespace
    {
        ExperimentPlan base_plan(const RunConfig &c, ExperimentPlan defaults)
        {
            defaults.master_seed = c.seed;
            defaults.threads = c.threads;
            defaults.num_trials = c.integer("trials", defaults.num_trials);
            return defaults;
        }

        std::vector<ChannelLaw> laws(const RunConfig &c, std::vector<ChannelLaw> fallback)
        {
            if (!c.params.count("law"))
                return fallback;
            std::vector<ChannelLaw> out;
            std::istringstream in(c.text("law", ""));
            std::string item;
            while (std::getline(in, item, ','))
            {
                const auto b = item.find_first_not_of(' '), e = item.find_last_not_of(' ');
                out.push_back(parse_channel_law(item.substr(b, e - b + 1)));
            }
            return out;
        }

        std::string fmt(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", v);
            return buf;
        }
    }

    RunOutput build_experiment(const RunConfig &c)
    {
        RunOutput r;
        const std::string &e = c.experiment;
        if (e == "crlb-convergence")
        {
            ConvergencePlan plan;
            plan.base = base_plan(c, plan.base);
            plan.physics = physics_params(c);
            plan.snr = c.real("snr", plan.snr);
            plan.exclusion = c.real("exclusion", plan.exclusion);
            plan.users = c.int_list("K", plan.users);
            plan.antennas = c.int_list("M", plan.antennas);
            plan.laws = laws(c, plan.laws);
            plan.subset_sizes = c.int_list("F", plan.subset_sizes);
            plan.subset_array = c.integer("subset_M", plan.subset_array);
            r.table = run_crlb_convergence(plan);
            r.summary = "crlb-convergence: " + std::to_string(r.table.rows.size()) + " points";
        }
        else if (e == "ml-variance")
        {
            MlVariancePlan plan;
            plan.base = base_plan(c, plan.base);
            plan.physics = physics_params(c);
            plan.snr = c.real("snr", plan.snr);
            plan.num_antennas = c.integer("M", plan.num_antennas);
            plan.subset_size = c.integer("F", plan.subset_size);
            plan.theta = c.real("theta", plan.theta);
            plan.grid_size = c.integer("Q", plan.grid_size);
            plan.search = c.text("search", "local") == "global" ? MlSearch::global : MlSearch::local;
            const auto l = laws(c, {plan.law});
            if (l.size() != 1)
                throw std::invalid_argument("ml-variance takes a single channel law");
            plan.law = l.front();
            MlVarianceSummary s;
            r.table = run_ml_variance(plan, &s);
            r.summary = "ml-variance: var_furthest=" + fmt(s.var_furthest) + " var_first=" + fmt(s.var_first) +
                        " ratio_mc=" + fmt(s.ratio_mc) + " ratio_det=" + fmt(s.ratio_det);
        }
        else if (e == "le-sweep")
        {
            LeSweepPlan plan;
            plan.base = base_plan(c, plan.base);
            plan.physics = physics_params(c);
            plan.energy = energy_params(c);
            plan.num_antennas = c.integer("M", plan.num_antennas);
            plan.users = c.int_list("K", plan.users);
            plan.exclusion = c.real("exclusion", plan.exclusion);
            r.table = run_le_sweep(plan);
            r.summary = "le-sweep: " + std::to_string(r.table.rows.size()) + " user counts";
        }
        else if (e == "music-le")
        {
            MusicLePlan plan;
            plan.base = base_plan(c, plan.base);
            plan.physics = physics_params(c);
            plan.energy = energy_params(c);
            plan.snapshots = c.integer("N", plan.snapshots);
            plan.grid_size = c.integer("Q", plan.grid_size);
            plan.exclusion = c.real("exclusion", plan.exclusion);
            if (c.params.count("points"))
            {
                plan.points.clear();
                std::istringstream in(c.text("points", ""));
                std::string item;
                while (std::getline(in, item, ','))
                {
                    const auto colon = item.find(':');
                    plan.points.emplace_back(std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1)));
                }
            }
            r.table = run_music_le(plan);
            std::string s = "music-le:";
            for (const auto &[k, v] : r.table.metadata)
                if (k.rfind("point.", 0) == 0)
                    s += " " + k.substr(6) + "=" + v;
            r.summary = s;
        }
        else if (e == "lemma-diagnostics")
        {
            LemmaPlan plan;
            plan.base = base_plan(c, plan.base);
            plan.antennas = c.int_list("M", plan.antennas);
            plan.gammas = c.real_list("gamma", plan.gammas);
            plan.num_users = c.integer("K", plan.num_users);
            plan.multipath_var = c.real("sigma_h2", plan.multipath_var);
            plan.exclusion = c.real("exclusion", plan.exclusion);
            plan.d_over_lambda = c.real("d_over_lambda", plan.d_over_lambda);
            if (!(plan.multipath_var > 0.0))
                throw std::invalid_argument("lemma-diagnostics needs sigma_h2 > 0");
            r.table = run_lemma_diagnostics(plan);
            r.summary = "lemma-diagnostics: " + std::to_string(r.table.rows.size()) + " rows";
        }
        else if (e == "subset-oracle")
        {
            SubsetOraclePlan plan;
            plan.base = base_plan(c, plan.base);
            plan.antennas = c.int_list("M", plan.antennas);
            bool ok = false;
            r.table = run_subset_oracle(plan, &ok);
            r.ok = ok;
            r.summary = ok ? "PASS: furthest set is optimal for every (M, F)" : "FAIL: exhaustive search disagrees";
        }
        else
        {
            throw ValidationError("unknown experiment '" + e + "'");
        }
        return r;
    }

    int run_experiment(const RunConfig &config, std::ostream &out, std::ostream &err)
    {
        if (!is_experiment(config.experiment))
        {
            err << "error: unknown experiment '" << config.experiment << "'\n";
            return 2;
        }
        RunOutput r;
        try
        {
            r = build_experiment(config);
        }
        catch (const ValidationError &e)
        {
            err << "error: " << e.what() << "\n";
            return 2;
        }
        catch (const std::invalid_argument &e)
        {
            err << "error: " << e.what() << "\n";
            return 2;
        }
        catch (const std::exception &e)
        {
            err << "error: " << e.what() << "\n";
            return 1;
        }

        try
        {
            if (config.out)
            {
                write_csv(r.table, *config.out);
                out << r.summary << "\n";
            }
            else
            {
                write_csv(r.table, out);
                err << r.summary << "\n";
            }
            if (config.plot)
            {
                std::filesystem::path svg = config.out ? *config.out : std::filesystem::path(config.experiment);
                svg.replace_extension(".svg");
                const PlotSpec spec = default_plot(config.experiment, r.table);
                if (spec.series.empty())
                    err << "note: no plot for " << config.experiment << "\n";
                else
                    write_svg(spec, svg);
            }
        }
        catch (const std::exception &e)
        {
            err << "error: " << e.what() << "\n";
            return 1;
        }
        return r.ok ? 0 : 1;
    }
}
