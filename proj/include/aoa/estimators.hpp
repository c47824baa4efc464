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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aoa/array_model.hpp"
#include "aoa/linalg.hpp"

namespace aoa
{
    struct MusicConfig
    {
        int snapshots = 100;       // N
        int grid_size = 1800;      // Q
        AntennaSubset subset;
        double exclusion = 0.0;    // radians trimmed from each end of (0, pi)
    };

    struct EstimateResult
    {
        std::vector<double> angles;      // ascending
        Eigen::VectorXd spectrum;        // P(theta_i) on the search grid
        double squared_error = 0.0;      // sum_k (theta_k - theta_hat_k)^2 against the scenario angles
    };

    /// (1/N) sum_n y_n y_n^H, symmetrized so the result is exactly Hermitian.
    Eigen::MatrixXcd sample_covariance(std::span<const Eigen::VectorXcd> snapshots);

    /// Same, with snapshots stored as the columns of an F x N matrix.
    Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd &snapshot_columns);

    /// theta_i = exclusion + i (pi - 2 exclusion) / (Q - 1), i = 0..Q-1.
    std::vector<double> search_grid(int grid_size, double exclusion);

    /// Indices of the K largest local maxima (strictly above both neighbours, endpoints compared to
    /// their single neighbour). Ties prefer the smaller index. Falls back to the largest remaining
    /// values when fewer than K local maxima exist. Returned in ascending index order.
    std::vector<int> pick_peaks(const Eigen::VectorXd &spectrum, int count);

    /// MUSIC with a precomputed steering grid, for repeated runs on one geometry.
    class MusicEstimator
    {
    public:
        MusicEstimator(const ArrayGeometry &geometry, const MusicConfig &config, int num_users);

        const std::vector<double> &grid() const noexcept { return grid_; }

        /// P(theta) = 1 / (g^H E_n E_n^H g) for a given noise subspace.
        Eigen::VectorXd spectrum(const Eigen::MatrixXcd &noise_subspace) const;

        /// Runs covariance, EVD, spectrum and peak search on F x N snapshots.
        EstimateResult estimate(const Eigen::MatrixXcd &snapshot_columns) const;

    private:
        int num_users_;
        std::vector<double> grid_;
        Eigen::MatrixXcd steering_; // F x Q
    };

    /// Full MUSIC pipeline; squared_error is filled from the scenario's true angles.
    EstimateResult music_estimate(std::span<const Eigen::VectorXcd> snapshots, const MusicConfig &config,
                                  const Scenario &scenario);

    /// Snapshots y_n = A_F s_n + n_n with s_n ~ CN(0, source_power I) and noise ~ CN(0, sigma_n^2 I),
    /// unit channel gains. Sources and noise are drawn for the full array so that different subsets
    /// see the same per-antenna noise for one seed. Returns F x N.
    Eigen::MatrixXcd music_snapshots(const Scenario &scenario, const AntennaSubset &subset, int snapshots,
                                     double source_power, std::uint64_t seed);

    enum class MlSearch
    {
        global, // exhaustive grid minimum
        local   // descend from a starting angle to the nearest grid minimum
    };

    struct MlOptions
    {
        MlSearch search = MlSearch::global;
        std::vector<double> start;  // per-user starting angles, required for MlSearch::local
        int max_sweeps = 50;        // coordinate-descent sweeps for K > 1
    };

    /// Grid ML with known channel: minimizes ||y - G(theta) s||^2, then refines each angle with one
    /// parabolic step through the best three grid points. K > 1 runs coordinate descent over users.
    std::vector<double> ml_estimate(const Eigen::VectorXcd &y, const Scenario &scenario,
                                    const ChannelRealization &channel, const AntennaSubset &subset,
                                    std::span<const double> grid, const MlOptions &options = {});

    /// (1/N_MC) sum_trials sum_k (theta_k - theta_hat_k)^2, pairing by ascending sort.
    double mse(std::span<const double> true_angles, std::span<const std::vector<double>> estimates);
}
