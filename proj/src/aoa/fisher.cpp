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

#include "aoa/fisher.hpp"
#include "aoa/errors.hpp"
#include "aoa/linalg.hpp"

#include <cmath>
#include <string>

namespace aoa
{
    Eigen::MatrixXcd sensitivity_matrix(const Scenario &scenario, const ChannelRealization &channel,
                                        const AntennaSubset &subset)
    {
        const int M = scenario.geometry.num_antennas();
        const int K = scenario.num_users();
        if (channel.h.rows() != M || channel.h.cols() != K)
            throw std::invalid_argument("sensitivity_matrix: channel dimensions do not match the scenario");
        subset.check_fits(M);

        const int F = subset.size();
        const double beta = scenario.geometry.phase_const();
        const double norm = 1.0 / std::sqrt(static_cast<double>(F));
        Eigen::MatrixXcd x_mat(F, K);
        for (int k = 0; k < K; ++k)
        {
            const auto &u = scenario.users[static_cast<std::size_t>(k)];
            const cdouble scale = cdouble(0.0, beta * std::sin(u.angle) * std::sqrt(u.path_gain) * norm) * u.pilot;
            const double phase = beta * std::cos(u.angle);
            for (int i = 0; i < F; ++i)
            {
                const int x = subset[i];
                x_mat(i, k) = static_cast<double>(x) * scale * channel.h(x, k) *
                              std::polar(1.0, -static_cast<double>(x) * phase);
            }
        }
        return x_mat;
    }

    CrlbReport exact_crlb(const Scenario &scenario, const ChannelRealization &channel, const AntennaSubset &subset)
    {
        if (!(scenario.noise_psd > 0.0))
            throw std::invalid_argument("exact_crlb: noise PSD must be positive");

        const Eigen::MatrixXcd x_mat = sensitivity_matrix(scenario, channel, subset);
        Eigen::MatrixXd fim = (2.0 / scenario.noise_psd) * (x_mat.adjoint() * x_mat).real();
        fim = 0.5 * (fim + fim.transpose()).eval();

        auto inv = invert_pivoted(fim, 1e-12);
        if (!inv)
            throw SingularFim("exact_crlb: Fisher information matrix is singular");

        CrlbReport rep;
        rep.fim = std::move(fim);
        rep.crlb_diag = inv->diagonal();
        rep.trace = rep.crlb_diag.sum();
        rep.mode = CrlbMode::exact;
        return rep;
    }

    SMatrix s_matrix(const Scenario &scenario)
    {
        const int K = scenario.num_users();
        SMatrix s;
        s.diag.resize(K);
        for (int k = 0; k < K; ++k)
        {
            const auto &u = scenario.users[static_cast<std::size_t>(k)];
            const double sin_t = std::sin(u.angle);
            const double power = std::norm(u.dominant_gain) + 2.0 * scenario.multipath_var;
            const double denom = power * snr_rho(scenario, k) * sin_t * sin_t;
            const double value = 1.0 / denom;
            if (!(denom > 0.0) || !std::isfinite(value))
                throw DivergentBound("s_matrix: bound diverges for user " + std::to_string(k) +
                                     " (endfire angle, zero SNR or zero channel power)");
            s.diag(k) = value;
        }
        return s;
    }

    GeometryFactor geometry_factor(const SubsetSpec &spec, int num_antennas)
    {
        const std::int64_t M = num_antennas;
        const std::int64_t F = spec.size;
        switch (spec.kind)
        {
        case SubsetSpec::Kind::full:
            return {3, (M - 1) * (2 * M - 1)};
        case SubsetSpec::Kind::first:
            if (F < 2)
                throw std::invalid_argument("deterministic_crlb: first-set bound needs F >= 2");
            if (F > M)
                throw InvalidSubset("deterministic_crlb: F exceeds M");
            return {3, (F - 1) * (2 * F - 1)};
        case SubsetSpec::Kind::furthest:
            if (F < 1 || F > M)
                throw InvalidSubset("deterministic_crlb: furthest-set size must be in [1, M]");
            return {3, 6 * M * (M - F - 1) + (F + 1) * (2 * F + 1)};
        case SubsetSpec::Kind::general:
        {
            const auto subset = AntennaSubset::from_indices(spec.indices);
            subset.check_fits(num_antennas);
            const std::int64_t sum_sq = subset.sum_of_squares();
            if (sum_sq == 0)
                throw DivergentBound("deterministic_crlb: subset {0} carries no angle information");
            return {subset.size(), 2 * sum_sq};
        }
        }
        throw std::logic_error("geometry_factor: unknown subset kind");
    }

    CrlbReport deterministic_crlb(const Scenario &scenario, const SubsetSpec &spec)
    {
        const GeometryFactor gf = geometry_factor(spec, scenario.geometry.num_antennas());
        const double beta = scenario.geometry.phase_const();
        const double scale = gf.value() / (beta * beta);
        const SMatrix s = s_matrix(scenario);

        CrlbReport rep;
        rep.mode = CrlbMode::deterministic;
        rep.crlb_diag = scale * s.diag;
        rep.trace = rep.crlb_diag.sum();
        rep.fim = rep.crlb_diag.cwiseInverse().asDiagonal();
        return rep;
    }
}
