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

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "aoa/array_model.hpp"
#include "aoa/csv.hpp"
#include "aoa/energy.hpp"
#include "aoa/estimators.hpp"
#include "aoa/fisher.hpp"

namespace aoa
{
    inline constexpr const char *version_string = "aoa-lab 1.0.0";

    /// Settings shared by every experiment. Output never depends on `threads`.
    struct ExperimentPlan
    {
        std::string name;
        std::uint64_t master_seed = 1;
        int num_trials = 100;
        int threads = 1;
    };

    /// Runs body(i) for i in [0, count) on up to `threads` workers. Callers write results into
    /// slot i, so the outcome is independent of scheduling.
    void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)> &body);

    /// theta_k = exclusion + k (pi - 2 exclusion) / (K + 1), k = 1..K.
    std::vector<double> equispaced_angles(int num_users, double exclusion);

    /// Physical constants shared by the experiments.
    struct Physics
    {
        double d_over_lambda = 0.5;
        double noise_psd = 1e-20;
        double multipath_var = 0.5;
        double dominant_gain = 0.0;
    };

    /// Scenario with K users equispaced in (exclusion, pi - exclusion), unit path gain and
    /// |s_k|^2 = snr * sigma_n^2, so rho_k = snr.
    Scenario make_scenario(int num_antennas, int num_users, double exclusion, double snr, const Physics &physics);

    // crlb-convergence -------------------------------------------------------------------------
    struct ConvergencePlan
    {
        ExperimentPlan base{"crlb-convergence", 1, 100, 1};
        Physics physics;
        double snr = 10.0;
        double exclusion = 0.31415926535897931; // pi/10
        std::vector<int> users{5, 20};
        std::vector<int> antennas{32, 64, 128, 256};
        std::vector<ChannelLaw> laws{ChannelLaw::complex_gaussian, ChannelLaw::uniform, ChannelLaw::rademacher};
        int subset_array = 100;                 // M for the first / furthest sweep, 0 disables it
        std::vector<int> subset_sizes{10, 20, 40, 60, 80, 100};
    };

    struct ConvergencePoint
    {
        double mc_mean_trace = 0.0;
        double det_trace = 0.0;
        double median_rel_gap = 0.0;
        std::vector<double> rel_gaps; // per trial
    };

    /// Monte-Carlo statistics of tr(exact CRLB) against the closed form for one configuration.
    ConvergencePoint crlb_convergence_point(const Scenario &scenario, ChannelLaw law, const SubsetSpec &spec,
                                            int trials, std::uint64_t point_seed, int threads);

    CsvTable run_crlb_convergence(const ConvergencePlan &plan);

    // ml-variance ------------------------------------------------------------------------------
    struct MlVariancePlan
    {
        ExperimentPlan base{"ml-variance", 1, 10000, 1};
        Physics physics;
        double snr = 10.0;
        int num_antennas = 16;
        int subset_size = 6;
        double theta = 0.52359877559829882; // pi/6
        int grid_size = 1800;
        MlSearch search = MlSearch::local;
        ChannelLaw law = ChannelLaw::complex_gaussian;
    };

    struct MlVarianceSummary
    {
        double var_furthest = 0.0;
        double var_first = 0.0;
        double ratio_mc = 0.0;
        double ratio_det = 0.0;
    };

    CsvTable run_ml_variance(const MlVariancePlan &plan, MlVarianceSummary *summary = nullptr);

    // le-sweep ---------------------------------------------------------------------------------
    struct LeSweepPlan
    {
        ExperimentPlan base{"le-sweep", 1, 1, 1};
        Physics physics;
        EnergyParams energy;
        int num_antennas = 80;
        std::vector<int> users{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        double exclusion = 0.31415926535897931;
    };

    CsvTable run_le_sweep(const LeSweepPlan &plan);

    // music-le ---------------------------------------------------------------------------------
    struct MusicLePlan
    {
        ExperimentPlan base{"music-le", 1, 200, 1};
        Physics physics;
        EnergyParams energy;
        std::vector<std::pair<int, int>> points{{4, 22}, {10, 22}}; // (K, M)
        int snapshots = 100;
        int grid_size = 900;
        double exclusion = 0.44879895051282759; // pi/7
    };

    CsvTable run_music_le(const MusicLePlan &plan);

    // lemma-diagnostics ------------------------------------------------------------------------
    struct LemmaPlan
    {
        ExperimentPlan base{"lemma-diagnostics", 1, 200, 1};
        std::vector<int> antennas{64, 128, 256, 512, 1024, 2048, 4096};
        std::vector<double> gammas{0.0, 0.5, 1.0, 2.0};
        int num_users = 5;
        double multipath_var = 0.5;
        double exclusion = 0.31415926535897931;
        double d_over_lambda = 0.5;
    };

    /// V(M, gamma) = (1/M^3) sum_{m=1}^{M} m^2 cos(m gamma)
    double trig_moment_sum(int num_antennas, double gamma);

    CsvTable run_lemma_diagnostics(const LemmaPlan &plan);

    // subset-oracle ----------------------------------------------------------------------------
    struct SubsetOraclePlan
    {
        ExperimentPlan base{"subset-oracle", 1, 1, 1};
        std::vector<int> antennas{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
    };

    /// One row per (M, F); sets *all_match to whether every search returned the furthest set.
    CsvTable run_subset_oracle(const SubsetOraclePlan &plan, bool *all_match = nullptr);

    double median(std::vector<double> values);
}
