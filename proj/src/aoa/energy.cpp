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

#include "aoa/energy.hpp"
#include "aoa/errors.hpp"
#include "aoa/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace aoa
{
    void EnergyParams::validate() const
    {
        auto positive = [](double v, const char *name)
        {
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string("EnergyParams: ") + name + " must be positive");
        };
        positive(bandwidth, "bandwidth");
        positive(pilot_duration, "pilot_duration");
        positive(compute_efficiency, "compute_efficiency");
        positive(rf_power_bs, "rf_power_bs");
        positive(rf_power_ut, "rf_power_ut");
        positive(fixed_power, "fixed_power");
        positive(amp_efficiency, "amp_efficiency");
        positive(pilot_power, "pilot_power");
        if (amp_efficiency > 1.0)
            throw std::invalid_argument("EnergyParams: amp_efficiency must not exceed 1");
    }

    double log_sum_exp(std::span<const double> values)
    {
        if (values.empty())
            return -std::numeric_limits<double>::infinity();
        const double peak = *std::max_element(values.begin(), values.end());
        if (!std::isfinite(peak))
            return peak;
        double s = 0.0;
        for (double v : values)
            s += std::exp(v - peak);
        return peak + std::log(s);
    }

    namespace
    {
        EnergyBreakdown combine(double log_e_tr, double log_e_p, double log_e_h)
        {
            EnergyBreakdown e;
            e.log_e_tr = log_e_tr;
            e.log_e_p = log_e_p;
            e.log_e_h = log_e_h;
            const std::array<double, 3> parts{log_e_tr, log_e_p, log_e_h};
            e.log_e_t = log_sum_exp(parts);
            return e;
        }

        double hardware_energy(int num_antennas_used, int num_users, const EnergyParams &p)
        {
            return p.pilot_duration * (num_antennas_used * p.rf_power_bs + num_users * p.rf_power_ut + p.fixed_power);
        }
    }

    EnergyBreakdown energy_ml(int num_users, int num_antennas_used, const EnergyParams &params)
    {
        params.validate();
        if (num_users < 1 || num_antennas_used < 1)
            throw std::invalid_argument("energy_ml: K and F must be at least 1");

        const double wz = params.bandwidth * params.pilot_duration;
        const double log_e_p = num_antennas_used * std::log(static_cast<double>(num_users)) +
                               std::log(wz / params.compute_efficiency);
        const double e_tr = wz * num_users * params.pilot_power / params.amp_efficiency;
        const double e_h = hardware_energy(num_antennas_used, num_users, params);
        return combine(std::log(e_tr), log_e_p, std::log(e_h));
    }

    LeReport le_ml(const Scenario &scenario, int num_antennas_used, Selection selection, const EnergyParams &params)
    {
        scenario.validate();
        const int M = scenario.geometry.num_antennas();
        const int K = scenario.num_users();
        const int F = num_antennas_used;
        if (F > M)
            throw std::invalid_argument("le_ml: F exceeds M");
        if (F <= K)
            throw std::invalid_argument("le_ml: need K < F (K=" + std::to_string(K) + ", F=" + std::to_string(F) + ")");

        SubsetSpec spec;
        switch (selection)
        {
        case Selection::all:
            if (F != M)
                throw std::invalid_argument("le_ml: Selection::all uses every antenna, F must equal M");
            spec = SubsetSpec::full();
            break;
        case Selection::first:
            spec = SubsetSpec::first(F);
            break;
        case Selection::furthest:
            spec = SubsetSpec::furthest(F);
            break;
        }

        const CrlbReport crlb = deterministic_crlb(scenario, spec);

        LeReport rep;
        rep.energy = energy_ml(K, F, params);
        rep.num_antennas_used = F;
        rep.crlb_trace = crlb.trace;
        rep.accuracy = 1.0 / std::sqrt(crlb.trace);
        rep.log_le = std::log(static_cast<double>(K)) - rep.energy.log_e_t - 0.5 * std::log(crlb.trace);
        return rep;
    }

    MusicOpCount music_op_count(int num_antennas_used, int num_users, int snapshots, int grid_size)
    {
        if (num_users < 1 || snapshots < 1 || grid_size < 1)
            throw std::invalid_argument("music_op_count: K, N and Q must be at least 1");
        if (num_antennas_used <= num_users)
            throw NoNoiseSubspace("music_op_count: F must exceed K");

        __extension__ typedef __int128 wide;
        const wide F = num_antennas_used;
        const wide K = num_users;
        const wide N = snapshots;
        const wide Q = grid_size;

        const wide covariance = (2 * N + 1) * F * F;
        const wide evd = F * F * F;
        const wide spectrum = Q * (2 * F * F * (F - K) + F * F + F - 1);
        const wide closed = (2 * Q + 1) * F * F * F + (2 * N + Q * (1 - 2 * K) + 1) * F * F + Q * F - Q;

        if (closed != covariance + evd + spectrum)
            throw std::logic_error("music_op_count: closed form disagrees with the step sum");
        if (closed > std::numeric_limits<std::int64_t>::max())
            throw std::overflow_error("music_op_count: operation count exceeds 64 bits");

        return {static_cast<std::int64_t>(covariance), static_cast<std::int64_t>(evd),
                static_cast<std::int64_t>(spectrum), static_cast<std::int64_t>(closed)};
    }

    MusicEnergy energy_music(int num_antennas_used, int num_users, int snapshots, int grid_size,
                             const EnergyParams &params)
    {
        params.validate();
        MusicEnergy out;
        out.ops = music_op_count(num_antennas_used, num_users, snapshots, grid_size);

        const double F = num_antennas_used;
        const double K = num_users;
        const double N = snapshots;
        const double Q = grid_size;
        const double wz = params.bandwidth * params.pilot_duration;
        const double inv_l = 1.0 / params.compute_efficiency;

        const double e_p = static_cast<double>(out.ops.total) * wz * inv_l;
        const double e_tr = N * K * wz * params.pilot_power / params.amp_efficiency;
        const double e_h = hardware_energy(num_antennas_used, num_users, params);
        out.energy = combine(std::log(e_tr), std::log(e_p), std::log(e_h));

        out.coeff[3] = wz * (2.0 * Q + 1.0) * inv_l;
        out.coeff[2] = wz * (2.0 * N + 1.0 + Q * (1.0 - 2.0 * K)) * inv_l;
        out.coeff[1] = wz * Q * inv_l + params.pilot_duration * params.rf_power_bs;
        out.coeff[0] = wz * (N * K * params.pilot_power / params.amp_efficiency - Q * inv_l) +
                       params.pilot_duration * (K * params.rf_power_ut + params.fixed_power);
        out.total_from_coeff = ((out.coeff[3] * F + out.coeff[2]) * F + out.coeff[1]) * F + out.coeff[0];

        out.coeff_w_hardware[3] = out.coeff[3];
        out.coeff_w_hardware[2] = out.coeff[2];
        out.coeff_w_hardware[1] = wz * (params.rf_power_bs + Q * inv_l);
        out.coeff_w_hardware[0] = wz * (N * K * params.pilot_power - Q * inv_l + K * params.rf_power_ut + params.fixed_power);
        out.total_w_hardware =
            ((out.coeff_w_hardware[3] * F + out.coeff_w_hardware[2]) * F + out.coeff_w_hardware[1]) * F +
            out.coeff_w_hardware[0];

        if (!(out.total_from_coeff > 0.0))
            throw std::logic_error("energy_music: total energy is not positive");
        return out;
    }

    MusicLe le_music(int num_users, double total_energy, double mse)
    {
        if (num_users < 1)
            throw std::invalid_argument("le_music: K must be at least 1");
        if (!(total_energy > 0.0))
            throw std::invalid_argument("le_music: total energy must be positive");
        if (!(mse >= 0.0))
            throw std::invalid_argument("le_music: mse must be non-negative");
        if (mse == 0.0)
            return {std::numeric_limits<double>::infinity(), true};
        return {static_cast<double>(num_users) / (total_energy * std::sqrt(mse)), false};
    }

    int optimize_num_antennas(const std::function<double(int)> &log_le, int num_users, int num_antennas)
    {
        if (num_users + 1 > num_antennas)
            throw std::invalid_argument("optimize_num_antennas: empty domain {K+1, ..., M}");
        int best_f = num_users + 1;
        double best = log_le(best_f);
        for (int f = num_users + 2; f <= num_antennas; ++f)
        {
            const double v = log_le(f);
            if (v > best || (std::isnan(best) && !std::isnan(v)))
            {
                best = v;
                best_f = f;
            }
        }
        return best_f;
    }
}
