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

#include "aoa/montecarlo.hpp"
#include "aoa/errors.hpp"
#include "aoa/fisher.hpp"
#include "aoa/rng.hpp"
#include "aoa/selection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

namespace aoa
{
    void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)> &body)
    {
        const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&]()
        {
            while (true)
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = count;
                }
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }

    std::vector<double> equispaced_angles(int num_users, double exclusion)
    {
        if (num_users < 1)
            throw std::invalid_argument("equispaced_angles: K must be at least 1");
        if (!(exclusion >= 0.0) || !(2.0 * exclusion < std::numbers::pi))
            throw std::invalid_argument("equispaced_angles: exclusion must lie in [0, pi/2)");
        std::vector<double> out;
        const double step = (std::numbers::pi - 2.0 * exclusion) / (num_users + 1);
        for (int k = 1; k <= num_users; ++k)
            out.push_back(exclusion + k * step);
        return out;
    }

    Scenario make_scenario(int num_antennas, int num_users, double exclusion, double snr, const Physics &physics)
    {
        Scenario sc{ArrayGeometry::with_spacing_ratio(num_antennas, physics.d_over_lambda), {}, physics.noise_psd,
                    physics.multipath_var};
        const double amplitude = std::sqrt(snr * physics.noise_psd);
        for (double theta : equispaced_angles(num_users, exclusion))
            sc.users.push_back(UserTerminal{theta, 1.0, {amplitude, 0.0}, {physics.dominant_gain, 0.0}});
        sc.validate();
        return sc;
    }

    double median(std::vector<double> values)
    {
        if (values.empty())
            return std::nan("");
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    }

    namespace
    {
        void add_common_meta(CsvTable &t, const ExperimentPlan &plan)
        {
            t.add_meta("experiment", plan.name);
            t.add_meta("version", version_string);
            t.add_meta("master_seed", std::to_string(plan.master_seed));
            t.add_meta("trials", std::to_string(plan.num_trials));
        }

        void add_physics_meta(CsvTable &t, const Physics &p)
        {
            t.add_meta("param.d_over_lambda", p.d_over_lambda);
            t.add_meta("param.sigma_n2", p.noise_psd);
            t.add_meta("param.sigma_h2", p.multipath_var);
            t.add_meta("param.h_d", p.dominant_gain);
        }

        void add_energy_meta(CsvTable &t, const EnergyParams &e)
        {
            t.add_meta("param.W", e.bandwidth);
            t.add_meta("param.zeta", e.pilot_duration);
            t.add_meta("param.L_BS", e.compute_efficiency);
            t.add_meta("param.P_BS", e.rf_power_bs);
            t.add_meta("param.P_UT", e.rf_power_ut);
            t.add_meta("param.P_fix", e.fixed_power);
            t.add_meta("param.omega", e.amp_efficiency);
            t.add_meta("param.p", e.pilot_power);
        }

        AntennaSubset subset_for(const SubsetSpec &spec, int num_antennas)
        {
            switch (spec.kind)
            {
            case SubsetSpec::Kind::full:
                return AntennaSubset::full(num_antennas);
            case SubsetSpec::Kind::first:
                return AntennaSubset::first(spec.size);
            case SubsetSpec::Kind::furthest:
                return furthest_subset(num_antennas, spec.size);
            case SubsetSpec::Kind::general:
                return AntennaSubset::from_indices(spec.indices);
            }
            throw std::logic_error("subset_for: unknown kind");
        }

        std::string_view spec_name(SubsetSpec::Kind kind)
        {
            switch (kind)
            {
            case SubsetSpec::Kind::full:
                return "full";
            case SubsetSpec::Kind::first:
                return "first";
            case SubsetSpec::Kind::furthest:
                return "furthest";
            case SubsetSpec::Kind::general:
                return "general";
            }
            return "unknown";
        }

        std::string join(std::span<const int> v)
        {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? " " : "") + std::to_string(v[i]);
            return s;
        }

        // full 64-bit seeds do not fit an int64 cell
        std::string as_cell(std::uint64_t seed) { return std::to_string(seed); }
    }

    ConvergencePoint crlb_convergence_point(const Scenario &scenario, ChannelLaw law, const SubsetSpec &spec,
                                            int trials, std::uint64_t point_seed, int threads)
    {
        const int M = scenario.geometry.num_antennas();
        const AntennaSubset subset = subset_for(spec, M);
        const double det = deterministic_crlb(scenario, spec).trace;

        std::vector<double> traces(static_cast<std::size_t>(trials));
        parallel_for(traces.size(), threads, [&](std::size_t t)
                     {
                         const auto channel = draw_channel(scenario, law, derive_stream(point_seed, "trial", t));
                         traces[t] = exact_crlb(scenario, channel, subset).trace; });

        ConvergencePoint p;
        p.det_trace = det;
        p.mc_mean_trace = std::accumulate(traces.begin(), traces.end(), 0.0) / std::max(trials, 1);
        for (double tr : traces)
            p.rel_gaps.push_back(std::abs(tr - det) / det);
        p.median_rel_gap = median(p.rel_gaps);
        return p;
    }

    CsvTable run_crlb_convergence(const ConvergencePlan &plan)
    {
        CsvTable t;
        add_common_meta(t, plan.base);
        add_physics_meta(t, plan.physics);
        t.add_meta("param.snr", plan.snr);
        t.add_meta("param.exclusion", plan.exclusion);
        t.columns = {"law", "K", "M", "selection", "F", "seed", "trials", "mc_mean_trace", "det_trace", "median_rel_gap"};

        std::uint64_t point = 0;
        auto emit = [&](ChannelLaw law, int K, int M, const SubsetSpec &spec)
        {
            const std::uint64_t seed = derive_stream(plan.base.master_seed, plan.base.name, point++);
            const Scenario sc = make_scenario(M, K, plan.exclusion, plan.snr, plan.physics);
            const ConvergencePoint p = crlb_convergence_point(sc, law, spec, plan.base.num_trials, seed, plan.base.threads);
            const int F = spec.kind == SubsetSpec::Kind::full ? M : spec.size;
            t.add_row({std::string(to_string(law)), std::int64_t{K}, std::int64_t{M}, std::string(spec_name(spec.kind)),
                       std::int64_t{F}, as_cell(seed), std::int64_t{plan.base.num_trials}, p.mc_mean_trace, p.det_trace,
                       p.median_rel_gap});
        };

        for (ChannelLaw law : plan.laws)
        {
            for (int K : plan.users)
            {
                for (int M : plan.antennas)
                    if (K < M)
                        emit(law, K, M, SubsetSpec::full());
                if (plan.subset_array > K)
                    for (int F : plan.subset_sizes)
                        if (F > K && F <= plan.subset_array)
                        {
                            emit(law, K, plan.subset_array, SubsetSpec::first(F));
                            emit(law, K, plan.subset_array, SubsetSpec::furthest(F));
                        }
            }
        }
        return t;
    }

    namespace
    {
        double sample_variance(const std::vector<double> &v)
        {
            if (v.size() < 2)
                return 0.0;
            const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            double s = 0.0;
            for (double x : v)
                s += (x - mean) * (x - mean);
            return s / static_cast<double>(v.size() - 1);
        }
    }

    CsvTable run_ml_variance(const MlVariancePlan &plan, MlVarianceSummary *summary)
    {
        Scenario sc{ArrayGeometry::with_spacing_ratio(plan.num_antennas, plan.physics.d_over_lambda), {},
                    plan.physics.noise_psd, plan.physics.multipath_var};
        sc.users.push_back(UserTerminal{plan.theta, 1.0, {std::sqrt(plan.snr * plan.physics.noise_psd), 0.0},
                                        {plan.physics.dominant_gain, 0.0}});
        sc.validate();

        const AntennaSubset furthest = furthest_subset(plan.num_antennas, plan.subset_size);
        const AntennaSubset first = AntennaSubset::first(plan.subset_size);
        const std::vector<double> grid = search_grid(plan.grid_size, 0.0);
        MlOptions opts;
        opts.search = plan.search;
        opts.start = {plan.theta};

        const auto n = static_cast<std::size_t>(plan.base.num_trials);
        std::vector<std::uint64_t> seeds(n);
        std::vector<double> est_furthest(n), est_first(n);
        parallel_for(n, plan.base.threads, [&](std::size_t t)
                     {
                         const std::uint64_t seed = derive_stream(plan.base.master_seed, plan.base.name, t);
                         seeds[t] = seed;
                         const auto channel = draw_channel(sc, plan.law, derive_stream(seed, "channel", 0));
                         const std::uint64_t noise_seed = derive_stream(seed, "noise", 0);
                         const auto y_far = synthesize_snapshot(sc, channel, furthest, noise_seed);
                         const auto y_near = synthesize_snapshot(sc, channel, first, noise_seed);
                         est_furthest[t] = ml_estimate(y_far, sc, channel, furthest, grid, opts)[0];
                         est_first[t] = ml_estimate(y_near, sc, channel, first, grid, opts)[0]; });

        MlVarianceSummary s;
        s.var_furthest = sample_variance(est_furthest);
        s.var_first = sample_variance(est_first);
        s.ratio_mc = s.var_furthest / s.var_first;
        s.ratio_det = deterministic_crlb(sc, SubsetSpec::furthest(plan.subset_size)).trace /
                      deterministic_crlb(sc, SubsetSpec::first(plan.subset_size)).trace;
        if (summary)
            *summary = s;

        CsvTable t;
        add_common_meta(t, plan.base);
        add_physics_meta(t, plan.physics);
        t.add_meta("param.snr", plan.snr);
        t.add_meta("param.M", std::to_string(plan.num_antennas));
        t.add_meta("param.F", std::to_string(plan.subset_size));
        t.add_meta("param.theta", plan.theta);
        t.add_meta("param.Q", std::to_string(plan.grid_size));
        t.add_meta("param.search", plan.search == MlSearch::local ? "local" : "global");
        t.add_meta("param.law", std::string(to_string(plan.law)));
        t.add_meta("var_furthest", s.var_furthest);
        t.add_meta("var_first", s.var_first);
        t.add_meta("ratio_mc", s.ratio_mc);
        t.add_meta("ratio_det", s.ratio_det);
        t.columns = {"trial", "seed", "theta_hat_furthest", "theta_hat_first"};
        for (std::size_t i = 0; i < n; ++i)
            t.add_row({static_cast<std::int64_t>(i), as_cell(seeds[i]), est_furthest[i], est_first[i]});
        return t;
    }

    CsvTable run_le_sweep(const LeSweepPlan &plan)
    {
        plan.energy.validate();
        CsvTable t;
        add_common_meta(t, plan.base);
        add_physics_meta(t, plan.physics);
        add_energy_meta(t, plan.energy);
        t.add_meta("param.M", std::to_string(plan.num_antennas));
        t.add_meta("param.exclusion", plan.exclusion);
        t.columns = {"K", "seed", "f_all", "log_le_all", "tr_crlb_all", "f_first_opt", "log_le_first_opt",
                     "tr_crlb_first_opt", "f_furthest_opt", "log_le_furthest_opt", "tr_crlb_furthest_opt",
                     "improvement_furthest_over_first"};

        const int M = plan.num_antennas;
        const double snr = plan.energy.pilot_power / plan.physics.noise_psd;
        std::uint64_t point = 0;
        for (int K : plan.users)
        {
            const std::uint64_t seed = derive_stream(plan.base.master_seed, plan.base.name, point++);
            if (K + 1 > M)
                continue;
            const Scenario sc = make_scenario(M, K, plan.exclusion, snr, plan.physics);
            const LeReport all = le_ml(sc, M, Selection::all, plan.energy);
            auto best = [&](Selection sel)
            {
                const int f = optimize_num_antennas([&](int F) { return le_ml(sc, F, sel, plan.energy).log_le; }, K, M);
                return le_ml(sc, f, sel, plan.energy);
            };
            const LeReport first = best(Selection::first);
            const LeReport furthest = best(Selection::furthest);
            t.add_row({std::int64_t{K}, as_cell(seed), std::int64_t{M}, all.log_le, all.crlb_trace,
                       std::int64_t{first.num_antennas_used}, first.log_le, first.crlb_trace,
                       std::int64_t{furthest.num_antennas_used}, furthest.log_le, furthest.crlb_trace,
                       std::exp(furthest.log_le - first.log_le)});
        }
        return t;
    }

    CsvTable run_music_le(const MusicLePlan &plan)
    {
        plan.energy.validate();
        CsvTable t;
        add_common_meta(t, plan.base);
        add_energy_meta(t, plan.energy);
        t.add_meta("param.sigma_n2", plan.physics.noise_psd);
        t.add_meta("param.d_over_lambda", plan.physics.d_over_lambda);
        t.add_meta("param.N", std::to_string(plan.snapshots));
        t.add_meta("param.Q", std::to_string(plan.grid_size));
        t.add_meta("param.exclusion", plan.exclusion);
        t.columns = {"K", "M", "F", "seed", "trials", "mse_furthest", "mse_first", "frac_furthest_le_first", "e_t",
                     "log_le_furthest", "log_le_first", "det_tr_furthest", "det_tr_first"};

        // unit channel gains and no multipath in the MUSIC model
        Physics phys = plan.physics;
        phys.multipath_var = 0.0;
        phys.dominant_gain = 1.0;
        const double snr = plan.energy.pilot_power / phys.noise_psd;
        const auto trials = static_cast<std::size_t>(plan.base.num_trials);

        std::uint64_t point_index = 0;
        for (const auto &[K, M] : plan.points)
        {
            const std::uint64_t point_seed = derive_stream(plan.base.master_seed, plan.base.name, point_index++);
            const Scenario sc = make_scenario(M, K, plan.exclusion, snr, phys);
            std::vector<double> truth;
            for (const auto &u : sc.users)
                truth.push_back(u.angle);

            int argmax_first = -1, argmax_furthest = -1;
            double best_first = -std::numeric_limits<double>::infinity(), best_furthest = best_first;

            for (int F = K + 1; F <= M; ++F)
            {
                const std::uint64_t f_seed = derive_stream(point_seed, "F", static_cast<std::uint64_t>(F));
                const MusicConfig cfg_far{plan.snapshots, plan.grid_size, furthest_subset(M, F), plan.exclusion};
                const MusicConfig cfg_near{plan.snapshots, plan.grid_size, AntennaSubset::first(F), plan.exclusion};
                const MusicEstimator est_far(sc.geometry, cfg_far, K);
                const MusicEstimator est_near(sc.geometry, cfg_near, K);

                std::vector<double> se_far(trials), se_near(trials);
                parallel_for(trials, plan.base.threads, [&](std::size_t i)
                             {
                                 const std::uint64_t seed = derive_stream(f_seed, "trial", i);
                                 const auto y_far = music_snapshots(sc, cfg_far.subset, plan.snapshots, plan.energy.pilot_power, seed);
                                 const auto y_near = music_snapshots(sc, cfg_near.subset, plan.snapshots, plan.energy.pilot_power, seed);
                                 se_far[i] = mse(truth, std::vector<std::vector<double>>{est_far.estimate(y_far).angles});
                                 se_near[i] = mse(truth, std::vector<std::vector<double>>{est_near.estimate(y_near).angles}); });

                const double mse_far = std::accumulate(se_far.begin(), se_far.end(), 0.0) / static_cast<double>(trials);
                const double mse_near = std::accumulate(se_near.begin(), se_near.end(), 0.0) / static_cast<double>(trials);
                std::size_t wins = 0;
                for (std::size_t i = 0; i < trials; ++i)
                    wins += se_far[i] <= se_near[i];

                const MusicEnergy energy = energy_music(F, K, plan.snapshots, plan.grid_size, plan.energy);
                const double e_t = std::exp(energy.energy.log_e_t);
                const MusicLe le_far = le_music(K, e_t, mse_far);
                const MusicLe le_near = le_music(K, e_t, mse_near);
                const double log_far = std::log(le_far.value);
                const double log_near = std::log(le_near.value);
                if (log_near > best_first)
                {
                    best_first = log_near;
                    argmax_first = F;
                }
                if (log_far > best_furthest)
                {
                    best_furthest = log_far;
                    argmax_furthest = F;
                }

                t.add_row({std::int64_t{K}, std::int64_t{M}, std::int64_t{F}, as_cell(f_seed),
                           static_cast<std::int64_t>(trials), mse_far, mse_near,
                           static_cast<double>(wins) / static_cast<double>(trials), e_t, log_far, log_near,
                           deterministic_crlb(sc, SubsetSpec::furthest(F)).trace,
                           deterministic_crlb(sc, SubsetSpec::first(F)).trace});
            }
            const std::string tag = "point.K" + std::to_string(K) + "_M" + std::to_string(M);
            t.add_meta(tag + ".argmax_first", std::to_string(argmax_first));
            t.add_meta(tag + ".argmax_furthest", std::to_string(argmax_furthest));
        }
        return t;
    }

    double trig_moment_sum(int num_antennas, double gamma)
    {
        const double m3 = static_cast<double>(num_antennas) * num_antennas * num_antennas;
        double s = 0.0;
        for (int m = 1; m <= num_antennas; ++m)
            s += static_cast<double>(m) * m * std::cos(m * gamma);
        return s / m3;
    }

    CsvTable run_lemma_diagnostics(const LemmaPlan &plan)
    {
        CsvTable t;
        add_common_meta(t, plan.base);
        t.add_meta("param.K", std::to_string(plan.num_users));
        t.add_meta("param.sigma_h2", plan.multipath_var);
        t.add_meta("param.d_over_lambda", plan.d_over_lambda);
        t.columns = {"M", "quantity", "gamma", "seed", "trials", "median", "mean"};

        const double beta = 2.0 * std::numbers::pi * plan.d_over_lambda;
        const std::vector<double> angles = equispaced_angles(plan.num_users, plan.exclusion);
        const auto trials = static_cast<std::size_t>(plan.base.num_trials);
        const int K = plan.num_users;

        for (int M : plan.antennas)
        {
            const std::uint64_t m_seed = derive_stream(plan.base.master_seed, plan.base.name, static_cast<std::uint64_t>(M));
            Eigen::VectorXd sigma(M);
            for (int x = 0; x < M; ++x)
                sigma(x) = beta * beta * (static_cast<double>(x) * x) / (static_cast<double>(M) * M);
            const double tr_over_m = sigma.sum() / M;

            std::vector<double> quad(trials), cross(trials), resid(trials), v_sampled(trials);
            parallel_for(trials, plan.base.threads, [&](std::size_t i)
                         {
                             CounterRng rng(derive_stream(m_seed, "trial", i));
                             const double var = 1.0 / M;
                             double q = 0.0;
                             cdouble c = 0.0;
                             for (int x = 0; x < M; ++x)
                             {
                                 const cdouble a = rng.complex_gaussian(var);
                                 const cdouble b = rng.complex_gaussian(var);
                                 q += sigma(x) * std::norm(a);
                                 c += sigma(x) * std::conj(a) * b;
                             }
                             quad[i] = std::abs(q - tr_over_m);
                             cross[i] = std::abs(c);

                             // Gram residual of the normalized real / imaginary multipath parts
                             Eigen::MatrixXd ahat(M, K), bhat(M, K);
                             const double scale = 1.0 / std::sqrt(M * plan.multipath_var);
                             for (int k = 0; k < K; ++k)
                             {
                                 const double phase = beta * std::cos(angles[static_cast<std::size_t>(k)]);
                                 for (int x = 0; x < M; ++x)
                                 {
                                     const cdouble h = rng.complex_gaussian(2.0 * plan.multipath_var);
                                     const cdouble rotated = h * std::polar(1.0, -x * phase);
                                     ahat(x, k) = scale * rotated.real();
                                     bhat(x, k) = scale * rotated.imag();
                                 }
                             }
                             const Eigen::MatrixXd gram = ahat.transpose() * sigma.asDiagonal() * ahat +
                                                          bhat.transpose() * sigma.asDiagonal() * bhat;
                             resid[i] = (gram - 2.0 * tr_over_m * Eigen::MatrixXd::Identity(K, K)).norm();

                             const double gamma = (4.0 * rng.uniform() - 2.0) * beta;
                             v_sampled[i] = std::abs(trig_moment_sum(M, gamma)); });

            auto mean_of = [](const std::vector<double> &v)
            { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); };
            const auto seed_cell = as_cell(m_seed);
            const auto n_cell = static_cast<std::int64_t>(trials);
            t.add_row({std::int64_t{M}, std::string("quad_form_gap"), std::string(""), seed_cell, n_cell, median(quad), mean_of(quad)});
            t.add_row({std::int64_t{M}, std::string("cross_form"), std::string(""), seed_cell, n_cell, median(cross), mean_of(cross)});
            t.add_row({std::int64_t{M}, std::string("gram_residual"), std::string(""), seed_cell, n_cell, median(resid), mean_of(resid)});
            t.add_row({std::int64_t{M}, std::string("trig_sum_sampled"), std::string(""), seed_cell, n_cell, median(v_sampled),
                       mean_of(v_sampled)});
            for (double g : plan.gammas)
            {
                const double v = std::abs(trig_moment_sum(M, g));
                t.add_row({std::int64_t{M}, std::string("trig_sum"), g, seed_cell, std::int64_t{1}, v, v});
            }
        }
        return t;
    }

    CsvTable run_subset_oracle(const SubsetOraclePlan &plan, bool *all_match)
    {
        CsvTable t;
        add_common_meta(t, plan.base);
        t.columns = {"M", "F", "seed", "furthest", "brute_force", "match"};
        bool ok = true;
        std::uint64_t point = 0;
        for (int M : plan.antennas)
            for (int F = 1; F <= M; ++F)
            {
                const std::uint64_t seed = derive_stream(plan.base.master_seed, plan.base.name, point++);
                const AntennaSubset far = furthest_subset(M, F);
                const AntennaSubset best = brute_force_best_subset(M, F);
                const bool match = far == best;
                ok = ok && match;
                t.add_row({std::int64_t{M}, std::int64_t{F}, as_cell(seed), join(far.indices()), join(best.indices()),
                           std::int64_t{match ? 1 : 0}});
            }
        t.add_meta("all_match", ok ? "true" : "false");
        if (all_match)
            *all_match = ok;
        return t;
    }
}
