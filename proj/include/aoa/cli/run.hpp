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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aoa/cli/config.hpp"
#include "aoa/csv.hpp"

namespace aoa::cli
{
    struct RunOutput
    {
        CsvTable table;
        std::string summary; // one line for the terminal
        bool ok = true;      // false when a self-check inside the experiment failed
    };

    /// Builds the plan from the config and runs it. Throws on bad parameters.
    RunOutput build_experiment(const RunConfig &config);

    /// Runs, writes the CSV (stdout when no --out) and the optional plot.
    /// Returns 0 on success, 1 on runtime or I/O failure, 2 on bad usage.
    int run_experiment(const RunConfig &config, std::ostream &out, std::ostream &err);

    struct PlotSeries
    {
        std::string name;
        std::vector<double> x;
        std::vector<double> y;
    };

    struct PlotSpec
    {
        std::string title;
        std::string x_label;
        std::string y_label;
        bool log_y = false;
        std::vector<PlotSeries> series;
    };

    /// Line plot with one polyline per series. Non-finite points are skipped.
    std::string render_svg(const PlotSpec &spec);
    void write_svg(const PlotSpec &spec, const std::filesystem::path &path);

    /// Default plot for an experiment's table; empty series when nothing sensible applies.
    PlotSpec default_plot(const std::string &experiment, const CsvTable &table);
}
