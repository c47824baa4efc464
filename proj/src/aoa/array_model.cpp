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

#include "aoa/array_model.hpp"
#include "aoa/errors.hpp"
#include "aoa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace aoa
{
    ArrayGeometry::ArrayGeometry(int num_antennas, double spacing, double wavelength)
        : num_antennas_(num_antennas), spacing_(spacing), wavelength_(wavelength),
          beta_(2.0 * std::numbers::pi * spacing / wavelength)
    {
        if (num_antennas < 2)
            throw std::invalid_argument("ArrayGeometry: need at least 2 antennas, got " + std::to_string(num_antennas));
        if (!(spacing > 0.0) || !(wavelength > 0.0))
            throw std::invalid_argument("ArrayGeometry: spacing and wavelength must be positive");
    }

    ArrayGeometry ArrayGeometry::with_spacing_ratio(int num_antennas, double d_over_lambda, double wavelength)
    {
        return ArrayGeometry(num_antennas, d_over_lambda * wavelength, wavelength);
    }

    void Scenario::validate() const
    {
        const int K = num_users();
        const int M = geometry.num_antennas();
        if (K < 1)
            throw std::invalid_argument("Scenario: at least one user is required");
        if (K >= M)
            throw std::invalid_argument("Scenario: K must be smaller than M (K=" + std::to_string(K) +
                                        ", M=" + std::to_string(M) + ")");
        if (!(multipath_var >= 0.0))
            throw std::invalid_argument("Scenario: multipath variance must be non-negative");
        if (!(noise_psd >= 0.0))
            throw std::invalid_argument("Scenario: noise PSD must be non-negative");
        for (int k = 0; k < K; ++k)
        {
            const auto &u = users[static_cast<std::size_t>(k)];
            if (!(u.angle > 0.0 && u.angle < std::numbers::pi))
                throw std::invalid_argument("Scenario: user " + std::to_string(k) + " angle outside (0, pi)");
            if (!(u.path_gain > 0.0))
                throw std::invalid_argument("Scenario: user " + std::to_string(k) + " path gain must be positive");
        }
        for (int a = 0; a < K; ++a)
            for (int b = a + 1; b < K; ++b)
                if (std::cos(users[static_cast<std::size_t>(a)].angle) == std::cos(users[static_cast<std::size_t>(b)].angle))
                    throw std::invalid_argument("Scenario: users " + std::to_string(a) + " and " + std::to_string(b) +
                                                " share the same cos(theta)");
    }

    AntennaSubset AntennaSubset::from_indices(std::vector<int> indices)
    {
        if (indices.empty())
            throw InvalidSubset("AntennaSubset: empty subset");
        std::sort(indices.begin(), indices.end());
        if (indices.front() < 0)
            throw InvalidSubset("AntennaSubset: negative phase index");
        if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
            throw InvalidSubset("AntennaSubset: duplicated phase index");
        return AntennaSubset(std::move(indices));
    }

    AntennaSubset AntennaSubset::full(int num_antennas)
    {
        return first(num_antennas);
    }

    AntennaSubset AntennaSubset::first(int size)
    {
        if (size < 1)
            throw InvalidSubset("AntennaSubset: size must be at least 1");
        std::vector<int> idx(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i)
            idx[static_cast<std::size_t>(i)] = i;
        return AntennaSubset(std::move(idx));
    }

    std::int64_t AntennaSubset::sum_of_squares() const noexcept
    {
        std::int64_t s = 0;
        for (int x : indices_)
            s += static_cast<std::int64_t>(x) * x;
        return s;
    }

    void AntennaSubset::check_fits(int num_antennas) const
    {
        if (max_index() >= num_antennas)
            throw InvalidSubset("AntennaSubset: phase index " + std::to_string(max_index()) +
                                " out of range for M=" + std::to_string(num_antennas));
    }

    std::string_view to_string(ChannelLaw law) noexcept
    {
        switch (law)
        {
        case ChannelLaw::complex_gaussian:
            return "gaussian";
        case ChannelLaw::uniform:
            return "uniform";
        case ChannelLaw::rademacher:
            return "rademacher";
        }
        return "unknown";
    }

    ChannelLaw parse_channel_law(std::string_view name)
    {
        if (name == "gaussian" || name == "complex-gaussian")
            return ChannelLaw::complex_gaussian;
        if (name == "uniform")
            return ChannelLaw::uniform;
        if (name == "rademacher")
            return ChannelLaw::rademacher;
        throw std::invalid_argument("unknown channel law '" + std::string(name) + "'");
    }

    Eigen::VectorXcd steering_vector(const ArrayGeometry &geometry, double theta, const AntennaSubset &subset)
    {
        subset.check_fits(geometry.num_antennas());
        const int F = subset.size();
        const double phase = geometry.phase_const() * std::cos(theta);
        const double norm = 1.0 / std::sqrt(static_cast<double>(F));
        Eigen::VectorXcd a(F);
        for (int i = 0; i < F; ++i)
            a(i) = std::polar(norm, -static_cast<double>(subset[i]) * phase);
        return a;
    }

    ChannelRealization draw_channel(const Scenario &scenario, ChannelLaw law, std::uint64_t seed)
    {
        if (!(scenario.multipath_var >= 0.0))
            throw std::invalid_argument("draw_channel: negative multipath variance");

        const int M = scenario.geometry.num_antennas();
        const int K = scenario.num_users();
        const double sd = std::sqrt(scenario.multipath_var);
        const double half_width = std::sqrt(3.0 * scenario.multipath_var);

        CounterRng rng(seed);
        auto draw = [&]() -> double
        {
            switch (law)
            {
            case ChannelLaw::complex_gaussian:
                return sd * rng.gaussian();
            case ChannelLaw::uniform:
                return half_width * (2.0 * rng.uniform() - 1.0);
            case ChannelLaw::rademacher:
                return sd * rng.sign();
            }
            return 0.0;
        };

        ChannelRealization out;
        out.law = law;
        out.seed = seed;
        out.h.resize(M, K);
        for (int k = 0; k < K; ++k)
        {
            const cdouble mean = scenario.users[static_cast<std::size_t>(k)].dominant_gain;
            for (int m = 0; m < M; ++m)
            {
                const double re = draw();
                const double im = draw();
                out.h(m, k) = mean + cdouble(re, im);
            }
        }
        return out;
    }

    Eigen::MatrixXcd compose_g(const Scenario &scenario, const ChannelRealization &channel, const AntennaSubset &subset)
    {
        const int M = scenario.geometry.num_antennas();
        const int K = scenario.num_users();
        if (channel.h.rows() != M || channel.h.cols() != K)
            throw std::invalid_argument("compose_g: channel is " + std::to_string(channel.h.rows()) + "x" +
                                        std::to_string(channel.h.cols()) + ", scenario needs " + std::to_string(M) +
                                        "x" + std::to_string(K));
        subset.check_fits(M);

        const int F = subset.size();
        const double beta = scenario.geometry.phase_const();
        const double norm = 1.0 / std::sqrt(static_cast<double>(F));
        Eigen::MatrixXcd g(F, K);
        for (int k = 0; k < K; ++k)
        {
            const auto &u = scenario.users[static_cast<std::size_t>(k)];
            const double amp = std::sqrt(u.path_gain) * norm;
            const double phase = beta * std::cos(u.angle);
            for (int i = 0; i < F; ++i)
            {
                const int x = subset[i];
                g(i, k) = amp * channel.h(x, k) * std::polar(1.0, -static_cast<double>(x) * phase);
            }
        }
        return g;
    }

    Eigen::VectorXcd pilot_vector(const Scenario &scenario)
    {
        Eigen::VectorXcd s(scenario.num_users());
        for (int k = 0; k < scenario.num_users(); ++k)
            s(k) = scenario.users[static_cast<std::size_t>(k)].pilot;
        return s;
    }

    Eigen::VectorXcd synthesize_snapshot(const Scenario &scenario, const ChannelRealization &channel,
                                         const AntennaSubset &subset, std::uint64_t seed)
    {
        Eigen::VectorXcd y = compose_g(scenario, channel, subset) * pilot_vector(scenario);

        const int M = scenario.geometry.num_antennas();
        CounterRng rng(seed);
        Eigen::VectorXcd noise(M);
        for (int m = 0; m < M; ++m)
            noise(m) = rng.complex_gaussian(scenario.noise_psd);
        for (int i = 0; i < subset.size(); ++i)
            y(i) += noise(subset[i]);
        return y;
    }

    double snr_rho(const Scenario &scenario, int k)
    {
        if (k < 0 || k >= scenario.num_users())
            throw std::out_of_range("snr_rho: user index " + std::to_string(k) + " out of range");
        if (!(scenario.noise_psd > 0.0))
            throw std::invalid_argument("snr_rho: noise PSD must be positive");
        const auto &u = scenario.users[static_cast<std::size_t>(k)];
        return std::norm(u.pilot) * u.path_gain / scenario.noise_psd;
    }
}
