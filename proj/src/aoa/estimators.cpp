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

#include "aoa/estimators.hpp"
#include "aoa/errors.hpp"
#include "aoa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace aoa
{
    Eigen::MatrixXcd sample_covariance(std::span<const Eigen::VectorXcd> snapshots)
    {
        if (snapshots.empty())
            throw std::invalid_argument("sample_covariance: no snapshots");
        const Eigen::Index f = snapshots.front().size();
        Eigen::MatrixXcd cols(f, static_cast<Eigen::Index>(snapshots.size()));
        for (std::size_t n = 0; n < snapshots.size(); ++n)
        {
            if (snapshots[n].size() != f)
                throw std::invalid_argument("sample_covariance: snapshots have unequal length");
            cols.col(static_cast<Eigen::Index>(n)) = snapshots[n];
        }
        return sample_covariance(cols);
    }

    Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd &snapshot_columns)
    {
        if (snapshot_columns.cols() == 0)
            throw std::invalid_argument("sample_covariance: no snapshots");
        const double inv_n = 1.0 / static_cast<double>(snapshot_columns.cols());
        Eigen::MatrixXcd r = inv_n * (snapshot_columns * snapshot_columns.adjoint());
        Eigen::MatrixXcd herm = 0.5 * (r + r.adjoint());
        return herm;
    }

    std::vector<double> search_grid(int grid_size, double exclusion)
    {
        if (grid_size < 2)
            throw std::invalid_argument("search_grid: need at least 2 grid points");
        if (!(exclusion >= 0.0) || !(2.0 * exclusion < std::numbers::pi))
            throw std::invalid_argument("search_grid: exclusion must lie in [0, pi/2)");
        std::vector<double> grid(static_cast<std::size_t>(grid_size));
        const double step = (std::numbers::pi - 2.0 * exclusion) / (grid_size - 1);
        for (int i = 0; i < grid_size; ++i)
            grid[static_cast<std::size_t>(i)] = exclusion + i * step;
        return grid;
    }

    std::vector<int> pick_peaks(const Eigen::VectorXd &spectrum, int count)
    {
        const int q = static_cast<int>(spectrum.size());
        if (count < 0 || count > q)
            throw std::invalid_argument("pick_peaks: cannot pick " + std::to_string(count) + " of " + std::to_string(q));

        std::vector<int> maxima;
        for (int i = 0; i < q; ++i)
        {
            const bool above_left = (i == 0) || spectrum(i) > spectrum(i - 1);
            const bool above_right = (i == q - 1) || spectrum(i) > spectrum(i + 1);
            if (above_left && above_right && q > 1)
                maxima.push_back(i);
        }
        auto by_value = [&](int a, int b)
        {
            if (spectrum(a) != spectrum(b))
                return spectrum(a) > spectrum(b);
            return a < b;
        };
        std::stable_sort(maxima.begin(), maxima.end(), by_value);
        if (static_cast<int>(maxima.size()) > count)
            maxima.resize(static_cast<std::size_t>(count));

        if (static_cast<int>(maxima.size()) < count)
        {
            std::vector<int> rest;
            for (int i = 0; i < q; ++i)
                if (std::find(maxima.begin(), maxima.end(), i) == maxima.end())
                    rest.push_back(i);
            std::stable_sort(rest.begin(), rest.end(), by_value);
            for (int i : rest)
            {
                if (static_cast<int>(maxima.size()) == count)
                    break;
                maxima.push_back(i);
            }
        }
        std::sort(maxima.begin(), maxima.end());
        return maxima;
    }

    MusicEstimator::MusicEstimator(const ArrayGeometry &geometry, const MusicConfig &config, int num_users)
        : num_users_(num_users), grid_(search_grid(config.grid_size, config.exclusion))
    {
        if (config.snapshots < 1)
            throw std::invalid_argument("MusicEstimator: need at least one snapshot");
        if (num_users < 1)
            throw std::invalid_argument("MusicEstimator: need at least one user");
        if (config.subset.size() <= num_users)
            throw NoNoiseSubspace("MusicEstimator: F=" + std::to_string(config.subset.size()) +
                                  " leaves no noise subspace for K=" + std::to_string(num_users));
        config.subset.check_fits(geometry.num_antennas());

        steering_.resize(config.subset.size(), static_cast<Eigen::Index>(grid_.size()));
        for (std::size_t i = 0; i < grid_.size(); ++i)
            steering_.col(static_cast<Eigen::Index>(i)) = steering_vector(geometry, grid_[i], config.subset);
    }

    Eigen::VectorXd MusicEstimator::spectrum(const Eigen::MatrixXcd &noise_subspace) const
    {
        const Eigen::MatrixXcd proj = noise_subspace.adjoint() * steering_;
        Eigen::VectorXd p = proj.colwise().squaredNorm().transpose();
        for (Eigen::Index i = 0; i < p.size(); ++i)
            p(i) = p(i) > 0.0 ? 1.0 / p(i) : std::numeric_limits<double>::max();
        return p;
    }

    EstimateResult MusicEstimator::estimate(const Eigen::MatrixXcd &snapshot_columns) const
    {
        const Eigen::Index f = steering_.rows();
        if (snapshot_columns.rows() != f)
            throw std::invalid_argument("MusicEstimator: snapshot length does not match the subset");

        const HermitianEigen evd = hermitian_evd(sample_covariance(snapshot_columns));
        const Eigen::MatrixXcd noise = evd.vectors.rightCols(f - num_users_);

        EstimateResult out;
        out.spectrum = spectrum(noise);
        for (int i : pick_peaks(out.spectrum, num_users_))
            out.angles.push_back(grid_[static_cast<std::size_t>(i)]);
        return out;
    }

    namespace
    {
        double sorted_squared_error(std::span<const double> truth, std::span<const double> estimate)
        {
            if (truth.size() != estimate.size())
                throw std::invalid_argument("squared error: estimate count does not match the number of users");
            std::vector<double> a(truth.begin(), truth.end());
            std::vector<double> b(estimate.begin(), estimate.end());
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            double s = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k)
                s += (a[k] - b[k]) * (a[k] - b[k]);
            return s;
        }

        std::vector<double> true_angles(const Scenario &scenario)
        {
            std::vector<double> t;
            for (const auto &u : scenario.users)
                t.push_back(u.angle);
            return t;
        }
    }

    EstimateResult music_estimate(std::span<const Eigen::VectorXcd> snapshots, const MusicConfig &config,
                                  const Scenario &scenario)
    {
        if (snapshots.empty())
            throw std::invalid_argument("music_estimate: no snapshots");
        MusicEstimator est(scenario.geometry, config, scenario.num_users());
        Eigen::MatrixXcd cols(config.subset.size(), static_cast<Eigen::Index>(snapshots.size()));
        for (std::size_t n = 0; n < snapshots.size(); ++n)
        {
            if (snapshots[n].size() != config.subset.size())
                throw std::invalid_argument("music_estimate: snapshot length does not match the subset");
            cols.col(static_cast<Eigen::Index>(n)) = snapshots[n];
        }
        EstimateResult out = est.estimate(cols);
        out.squared_error = sorted_squared_error(true_angles(scenario), out.angles);
        return out;
    }

    Eigen::MatrixXcd music_snapshots(const Scenario &scenario, const AntennaSubset &subset, int snapshots,
                                     double source_power, std::uint64_t seed)
    {
        const int M = scenario.geometry.num_antennas();
        const int K = scenario.num_users();
        subset.check_fits(M);
        if (snapshots < 1)
            throw std::invalid_argument("music_snapshots: need at least one snapshot");

        Eigen::MatrixXcd a(subset.size(), K);
        for (int k = 0; k < K; ++k)
            a.col(k) = steering_vector(scenario.geometry, scenario.users[static_cast<std::size_t>(k)].angle, subset);

        CounterRng rng(seed);
        Eigen::MatrixXcd y(subset.size(), snapshots);
        Eigen::VectorXcd s(K);
        Eigen::VectorXcd noise(M);
        for (int n = 0; n < snapshots; ++n)
        {
            for (int k = 0; k < K; ++k)
                s(k) = rng.complex_gaussian(source_power);
            for (int m = 0; m < M; ++m)
                noise(m) = rng.complex_gaussian(scenario.noise_psd);
            y.col(n) = a * s;
            for (int i = 0; i < subset.size(); ++i)
                y(i, n) += noise(subset[i]);
        }
        return y;
    }

    namespace
    {
        // Per-user signature on the subset: column k of G without the steering phase, times s_k.
        struct MlModel
        {
            std::vector<double> x;           // phase indices
            Eigen::MatrixXcd weight;         // F x K: sqrt(l_k) h_{x,k} s_k / sqrt(F)
            double beta = 0.0;

            double cost(const Eigen::VectorXcd &residual, int k, double theta) const
            {
                const double phase = beta * std::cos(theta);
                double c = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i)
                {
                    const auto ii = static_cast<Eigen::Index>(i);
                    c += std::norm(residual(ii) - weight(ii, k) * std::polar(1.0, -x[i] * phase));
                }
                return c;
            }

            Eigen::VectorXcd column(int k, double theta) const
            {
                const double phase = beta * std::cos(theta);
                Eigen::VectorXcd v(static_cast<Eigen::Index>(x.size()));
                for (std::size_t i = 0; i < x.size(); ++i)
                    v(static_cast<Eigen::Index>(i)) = weight(static_cast<Eigen::Index>(i), k) * std::polar(1.0, -x[i] * phase);
                return v;
            }
        };

        std::size_t nearest_index(std::span<const double> grid, double theta)
        {
            std::size_t best = 0;
            for (std::size_t i = 1; i < grid.size(); ++i)
                if (std::abs(grid[i] - theta) < std::abs(grid[best] - theta))
                    best = i;
            return best;
        }

        std::size_t global_min(const MlModel &model, const Eigen::VectorXcd &residual, int k, std::span<const double> grid)
        {
            std::size_t best = 0;
            double best_cost = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                const double c = model.cost(residual, k, grid[i]);
                if (c < best_cost)
                {
                    best_cost = c;
                    best = i;
                }
            }
            return best;
        }

        std::size_t local_min(const MlModel &model, const Eigen::VectorXcd &residual, int k, std::span<const double> grid,
                              std::size_t start)
        {
            std::size_t i = start;
            double here = model.cost(residual, k, grid[i]);
            while (true)
            {
                std::size_t next = i;
                double next_cost = here;
                if (i > 0)
                {
                    const double c = model.cost(residual, k, grid[i - 1]);
                    if (c < next_cost)
                    {
                        next = i - 1;
                        next_cost = c;
                    }
                }
                if (i + 1 < grid.size())
                {
                    const double c = model.cost(residual, k, grid[i + 1]);
                    if (c < next_cost)
                    {
                        next = i + 1;
                        next_cost = c;
                    }
                }
                if (next == i)
                    return i;
                i = next;
                here = next_cost;
            }
        }

        double parabolic_refine(const MlModel &model, const Eigen::VectorXcd &residual, int k, std::span<const double> grid,
                                std::size_t i)
        {
            if (i == 0 || i + 1 >= grid.size())
                return grid[i];
            const double x0 = grid[i - 1], x1 = grid[i], x2 = grid[i + 1];
            const double c0 = model.cost(residual, k, x0);
            const double c1 = model.cost(residual, k, x1);
            const double c2 = model.cost(residual, k, x2);
            // vertex of the parabola through the three points
            const double num = (x1 - x0) * (x1 - x0) * (c1 - c2) - (x1 - x2) * (x1 - x2) * (c1 - c0);
            const double den = (x1 - x0) * (c1 - c2) - (x1 - x2) * (c1 - c0);
            if (!(std::abs(den) > 0.0))
                return x1;
            const double vertex = x1 - 0.5 * num / den;
            if (!std::isfinite(vertex))
                return x1;
            return std::clamp(vertex, x0, x2);
        }
    }

    std::vector<double> ml_estimate(const Eigen::VectorXcd &y, const Scenario &scenario,
                                    const ChannelRealization &channel, const AntennaSubset &subset,
                                    std::span<const double> grid, const MlOptions &options)
    {
        if (grid.empty())
            throw std::invalid_argument("ml_estimate: empty search grid");
        const int M = scenario.geometry.num_antennas();
        const int K = scenario.num_users();
        if (channel.h.rows() != M || channel.h.cols() != K)
            throw std::invalid_argument("ml_estimate: channel dimensions do not match the scenario");
        subset.check_fits(M);
        if (y.size() != subset.size())
            throw std::invalid_argument("ml_estimate: snapshot length does not match the subset");
        if (options.search == MlSearch::local && static_cast<int>(options.start.size()) != K)
            throw std::invalid_argument("ml_estimate: local search needs one starting angle per user");

        MlModel model;
        model.beta = scenario.geometry.phase_const();
        const int F = subset.size();
        const double norm = 1.0 / std::sqrt(static_cast<double>(F));
        model.weight.resize(F, K);
        for (int i = 0; i < F; ++i)
            model.x.push_back(static_cast<double>(subset[i]));
        for (int k = 0; k < K; ++k)
        {
            const auto &u = scenario.users[static_cast<std::size_t>(k)];
            for (int i = 0; i < F; ++i)
                model.weight(i, k) = std::sqrt(u.path_gain) * norm * channel.h(subset[i], k) * u.pilot;
        }

        std::vector<std::size_t> idx(static_cast<std::size_t>(K));
        std::vector<bool> fitted(static_cast<std::size_t>(K), false);
        auto residual_without = [&](int k)
        {
            Eigen::VectorXcd r = y;
            for (int j = 0; j < K; ++j)
                if (j != k && fitted[static_cast<std::size_t>(j)])
                    r -= model.column(j, grid[idx[static_cast<std::size_t>(j)]]);
            return r;
        };
        auto update = [&](int k, const Eigen::VectorXcd &r)
        {
            const auto uk = static_cast<std::size_t>(k);
            if (options.search == MlSearch::global)
                return global_min(model, r, k, grid);
            return local_min(model, r, k, grid, idx[uk]);
        };

        if (options.search == MlSearch::local)
            for (int k = 0; k < K; ++k)
            {
                idx[static_cast<std::size_t>(k)] = nearest_index(grid, options.start[static_cast<std::size_t>(k)]);
                fitted[static_cast<std::size_t>(k)] = true;
            }

        // initial pass: fit users one by one against what has been fitted so far
        for (int k = 0; k < K; ++k)
        {
            idx[static_cast<std::size_t>(k)] = update(k, residual_without(k));
            fitted[static_cast<std::size_t>(k)] = true;
        }

        for (int sweep = 0; sweep < options.max_sweeps && K > 1; ++sweep)
        {
            bool changed = false;
            for (int k = 0; k < K; ++k)
            {
                const std::size_t next = update(k, residual_without(k));
                if (next != idx[static_cast<std::size_t>(k)])
                {
                    idx[static_cast<std::size_t>(k)] = next;
                    changed = true;
                }
            }
            if (!changed)
                break;
        }

        std::vector<double> out(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k)
            out[static_cast<std::size_t>(k)] =
                parabolic_refine(model, residual_without(k), k, grid, idx[static_cast<std::size_t>(k)]);
        return out;
    }

    double mse(std::span<const double> true_angles, std::span<const std::vector<double>> estimates)
    {
        if (estimates.empty())
            return 0.0;
        double total = 0.0;
        for (const auto &e : estimates)
            total += sorted_squared_error(true_angles, e);
        return total / static_cast<double>(estimates.size());
    }
}
