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

#include <array>
#include <cstdint>
#include <functional>
#include <span>

#include "aoa/array_model.hpp"

namespace aoa
{
    /// Energy model parameters. Defaults are the reference simulation values
    /// (W = 50 kHz, zeta = 0.5 ms, L_BS = 30 GFLOP/J, P_BS = 1 W, P_UT = 0.3 W, P_fix = 0.5 W,
    /// p = 1e-19 W/Hz); the amplifier efficiency defaults to 1.
    struct EnergyParams
    {
        double bandwidth = 50e3;          // W, Hz
        double pilot_duration = 0.5e-3;   // zeta, s
        double compute_efficiency = 30e9; // L_BS, FLOP/J
        double rf_power_bs = 1.0;         // P_BS, W
        double rf_power_ut = 0.3;         // P_UT, W
        double fixed_power = 0.5;         // P_fix, W
        double amp_efficiency = 1.0;      // omega in (0, 1]
        double pilot_power = 1e-19;       // p, W/Hz

        void validate() const;
    };

    /// Energies of one localization round, stored as natural logs of joules.
    struct EnergyBreakdown
    {
        double log_e_tr = 0.0;
        double log_e_p = 0.0;
        double log_e_h = 0.0;
        double log_e_t = 0.0;
    };

    struct LeReport
    {
        EnergyBreakdown energy;
        double log_le = 0.0;          // ln(K / (E_t sqrt(tr CRLB)))
        int num_antennas_used = 0;
        double accuracy = 0.0;        // 1 / sqrt(tr CRLB), 1/rad
        double crlb_trace = 0.0;      // rad^2
    };

    enum class Selection
    {
        all,
        first,
        furthest
    };

    /// Overflow-safe ln(sum exp(v_i)).
    double log_sum_exp(std::span<const double> values);

    /// ML energy with the worst-case K^F operation count; E_p is evaluated in the log domain.
    EnergyBreakdown energy_ml(int num_users, int num_antennas_used, const EnergyParams &params);

    /// LE = K / (E_t sqrt(tr CRLB)) with the closed-form bound of the matching antenna choice.
    /// Selection::all requires num_antennas_used == M.
    LeReport le_ml(const Scenario &scenario, int num_antennas_used, Selection selection, const EnergyParams &params);

    struct MusicOpCount
    {
        std::int64_t covariance = 0; // (2N+1) F^2
        std::int64_t evd = 0;        // F^3
        std::int64_t spectrum = 0;   // Q (2F^2(F-K) + F^2 + F - 1)
        std::int64_t total = 0;      // closed form, equal to the step sum
    };

    /// Exact arithmetic operation count of one MUSIC run. Throws NoNoiseSubspace if F <= K.
    MusicOpCount music_op_count(int num_antennas_used, int num_users, int snapshots, int grid_size);

    struct MusicEnergy
    {
        EnergyBreakdown energy;          // E_p from N_A, E_tr, E_h
        std::array<double, 4> coeff{};   // C0..C3 with the hardware term zeta * P_BS * F
        double total_from_coeff = 0.0;   // sum C_i F^i
        std::array<double, 4> coeff_w_hardware{}; // C0..C3 with W multiplying the hardware terms as printed
        double total_w_hardware = 0.0;
        MusicOpCount ops;
    };

    MusicEnergy energy_music(int num_antennas_used, int num_users, int snapshots, int grid_size,
                             const EnergyParams &params);

    struct MusicLe
    {
        double value = 0.0;           // +inf when perfect
        bool perfect_estimate = false;
    };

    /// LE_MUSIC = K / (E_t sqrt(mse)); mse == 0 is reported as a perfect estimate.
    MusicLe le_music(int num_users, double total_energy, double mse);

    /// argmax of log_le over F in {K+1, ..., M}; ties go to the smaller F.
    int optimize_num_antennas(const std::function<double(int)> &log_le, int num_users, int num_antennas);
}
