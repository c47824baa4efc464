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

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace aoa
{
    using cdouble = std::complex<double>;

    /// Uniform linear array. The phase constant is beta = 2*pi*d/lambda.
    class ArrayGeometry
    {
    public:
        ArrayGeometry(int num_antennas, double spacing, double wavelength);

        /// Array with spacing d = ratio * wavelength.
        static ArrayGeometry with_spacing_ratio(int num_antennas, double d_over_lambda, double wavelength = 1.0);

        int num_antennas() const noexcept { return num_antennas_; }
        double spacing() const noexcept { return spacing_; }
        double wavelength() const noexcept { return wavelength_; }
        double phase_const() const noexcept { return beta_; }

    private:
        int num_antennas_;
        double spacing_;
        double wavelength_;
        double beta_;
    };

    struct UserTerminal
    {
        double angle = 0.0;                  // radians in (0, pi)
        double path_gain = 1.0;              // large-scale power gain l(r)
        cdouble pilot = {1.0, 0.0};          // transmitted pilot s
        cdouble dominant_gain = {0.0, 0.0};  // mean of the per-antenna channel coefficient
    };

    struct Scenario
    {
        ArrayGeometry geometry;
        std::vector<UserTerminal> users;
        double noise_psd = 1e-20;      // sigma_n^2
        double multipath_var = 0.5;    // sigma_h^2, per real dimension

        int num_users() const noexcept { return static_cast<int>(users.size()); }

        /// Throws std::invalid_argument if K < 1, K >= M, an angle is outside (0, pi),
        /// a path gain is not positive, two users share cos(theta), or a variance is negative.
        void validate() const;
    };

    /// Sorted set of phase indices x = m - 1 (0-based antenna positions).
    class AntennaSubset
    {
    public:
        /// Sorts the indices; throws InvalidSubset on empty input, negatives or duplicates.
        static AntennaSubset from_indices(std::vector<int> indices);

        /// {0, ..., M-1}
        static AntennaSubset full(int num_antennas);

        /// {0, ..., F-1}
        static AntennaSubset first(int size);

        std::span<const int> indices() const noexcept { return indices_; }
        int size() const noexcept { return static_cast<int>(indices_.size()); }
        int operator[](int i) const { return indices_[static_cast<std::size_t>(i)]; }
        int max_index() const noexcept { return indices_.back(); }

        /// Sum of x^2 over the subset, in exact integer arithmetic.
        std::int64_t sum_of_squares() const noexcept;

        /// Throws InvalidSubset if an index is >= num_antennas.
        void check_fits(int num_antennas) const;

        bool operator==(const AntennaSubset &) const = default;

    private:
        explicit AntennaSubset(std::vector<int> indices) : indices_(std::move(indices)) {}
        std::vector<int> indices_;
    };

    enum class ChannelLaw
    {
        complex_gaussian,
        uniform,
        rademacher
    };

    std::string_view to_string(ChannelLaw law) noexcept;
    ChannelLaw parse_channel_law(std::string_view name);

    struct ChannelRealization
    {
        Eigen::MatrixXcd h; // M x K
        ChannelLaw law = ChannelLaw::complex_gaussian;
        std::uint64_t seed = 0;
    };

    /// Unit-norm steering vector over the subset: entry i = exp(-j x_i beta cos(theta)) / sqrt(F).
    Eigen::VectorXcd steering_vector(const ArrayGeometry &geometry, double theta, const AntennaSubset &subset);

    /// Draws the M x K fast-fading matrix. Real and imaginary parts are i.i.d. with mean
    /// Re/Im(dominant_gain_k) and variance sigma_h^2 under the chosen law.
    ChannelRealization draw_channel(const Scenario &scenario, ChannelLaw law, std::uint64_t seed);

    /// G = (A_Rx .* H) B^{1/2}, restricted to the subset rows.
    /// g_{i,k} = sqrt(l_k) h_{x_i,k} exp(-j x_i beta cos(theta_k)) / sqrt(F)
    Eigen::MatrixXcd compose_g(const Scenario &scenario, const ChannelRealization &channel, const AntennaSubset &subset);

    /// Column vector of user pilots s.
    Eigen::VectorXcd pilot_vector(const Scenario &scenario);

    /// y = G s + n with n ~ CN(0, sigma_n^2 I). Noise is drawn for all M antennas and the subset
    /// rows are kept, so a given seed yields the same noise sample at a given antenna for any subset.
    Eigen::VectorXcd synthesize_snapshot(const Scenario &scenario, const ChannelRealization &channel,
                                         const AntennaSubset &subset, std::uint64_t seed);

    /// rho_k = |s_k|^2 l_k / sigma_n^2, k is 0-based.
    double snr_rho(const Scenario &scenario, int k);
}
