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

#include "catch_amalgamated.hpp"

#include "aoa/energy.hpp"
#include "aoa/errors.hpp"
#include "aoa/fisher.hpp"
#include "aoa/rng.hpp"

#include <cmath>
#include <numbers>

using namespace aoa;
using Catch::Approx;

namespace
{
    Scenario users(int M, int K, double excl = std::numbers::pi / 10)
    {
        Scenario sc{ArrayGeometry::with_spacing_ratio(M, 0.5), {}, 1e-20, 0.5};
        const double step = (std::numbers::pi - 2 * excl) / (K + 1);
        for (int k = 1; k <= K; ++k)
            sc.users.push_back(UserTerminal{excl + k * step, 1.0, {std::sqrt(1e-19), 0.0}, {0.0, 0.0}});
        return sc;
    }

    // per-step count written out independently
    long long steps(long long F, long long K, long long N, long long Q)
    {
        const long long cov = (2 * N + 1) * F * F;
        const long long evd = F * F * F;
        const long long spec = Q * (2 * F * F * (F - K) + F * F + F - 1);
        return cov + evd + spec;
    }
}

TEST_CASE("ML energy - spot values")
{
    EnergyParams p;
    auto e1 = energy_ml(1, 30, p);
    CHECK(std::exp(e1.log_e_p) == Approx(50e3 * 0.5e-3 / 30e9));

    auto e = energy_ml(10, 80, p);
    CHECK(std::exp(e.log_e_h) == Approx(0.04175));
    CHECK(std::exp(e.log_e_tr) == Approx(50e3 * 0.5e-3 * 10 * 1e-19));
    CHECK(std::exp(e.log_e_t) == Approx(std::exp(e.log_e_p) + std::exp(e.log_e_tr) + std::exp(e.log_e_h)));

    auto big = energy_ml(40, 300, p);
    CHECK(std::isfinite(big.log_e_p));
    CHECK(big.log_e_p == Approx(300 * std::log(40.0) + std::log(50e3 * 0.5e-3 / 30e9)));
    CHECK(big.log_e_t == Approx(big.log_e_p));
}

TEST_CASE("Energy parameters validation")
{
    EnergyParams p;
    CHECK_NOTHROW(p.validate());
    p.rf_power_bs = -1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.amp_efficiency = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("LE for ML - dominance and optimum")
{
    EnergyParams p;
    Scenario sc = users(80, 5);
    for (int F = 6; F < 80; ++F)
        CHECK(le_ml(sc, F, Selection::furthest, p).log_le > le_ml(sc, F, Selection::first, p).log_le);
    CHECK(le_ml(sc, 80, Selection::furthest, p).log_le == Approx(le_ml(sc, 80, Selection::all, p).log_le));

    const int best = optimize_num_antennas([&](int F) { return le_ml(sc, F, Selection::furthest, p).log_le; }, 5, 80);
    CHECK(best == 6);

    auto r = le_ml(sc, 20, Selection::first, p);
    CHECK(r.log_le == Approx(std::log(5.0) - r.energy.log_e_t - 0.5 * std::log(r.crlb_trace)));
    CHECK(r.crlb_trace == Approx(deterministic_crlb(sc, SubsetSpec::first(20)).trace));

    CHECK_THROWS_AS(le_ml(sc, 5, Selection::furthest, p), std::invalid_argument);
    CHECK_THROWS_AS(le_ml(sc, 40, Selection::all, p), std::invalid_argument);
}

TEST_CASE("optimize_num_antennas - boundary cases")
{
    CHECK(optimize_num_antennas([](int F) { return -double(F); }, 3, 20) == 4);
    CHECK(optimize_num_antennas([](int F) { return double(F); }, 3, 20) == 20);
    CHECK(optimize_num_antennas([](int) { return 1.0; }, 3, 20) == 4);
    CHECK_THROWS(optimize_num_antennas([](int F) { return double(F); }, 5, 5));
}

TEST_CASE("MUSIC operation count")
{
    auto c = music_op_count(8, 2, 100, 180);
    CHECK(c.total == 164396);
    CHECK(c.total == c.covariance + c.evd + c.spectrum);
    CHECK(music_op_count(2, 1, 1, 1).spectrum == 13);

    CounterRng rng(77);
    for (int i = 0; i < 2000; ++i)
    {
        const int K = 1 + int(rng.uniform() * 40);
        const int F = K + 1 + int(rng.uniform() * 200);
        const int N = 1 + int(rng.uniform() * 1000);
        const int Q = 1 + int(rng.uniform() * 3600);
        CHECK(music_op_count(F, K, N, Q).total == steps(F, K, N, Q));
    }
    CHECK_THROWS_AS(music_op_count(4, 4, 10, 10), NoNoiseSubspace);
    CHECK_THROWS_AS(music_op_count(4, 2, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(music_op_count(4, 2, 0, 10), std::invalid_argument);
}

TEST_CASE("MUSIC energy - polynomial form against first principles")
{
    CounterRng rng(3);
    for (int i = 0; i < 1000; ++i)
    {
        EnergyParams p;
        p.bandwidth = 1e3 + rng.uniform() * 1e5;
        p.pilot_duration = 1e-4 + rng.uniform() * 1e-3;
        p.compute_efficiency = 1e9 + rng.uniform() * 1e11;
        p.rf_power_bs = 0.1 + rng.uniform() * 2;
        p.rf_power_ut = 0.1 + rng.uniform();
        p.fixed_power = 0.1 + rng.uniform();
        p.amp_efficiency = 0.2 + 0.8 * rng.uniform();
        const int K = 1 + int(rng.uniform() * 20);
        const int F = K + 1 + int(rng.uniform() * 60);
        const int N = 1 + int(rng.uniform() * 300);
        const int Q = 2 + int(rng.uniform() * 1000);

        auto e = energy_music(F, K, N, Q, p);
        const double Wz = p.bandwidth * p.pilot_duration;
        const double ep = double(steps(F, K, N, Q)) * Wz / p.compute_efficiency;
        const double etr = Wz * K * p.pilot_power / p.amp_efficiency;
        const double eh = p.pilot_duration * (F * p.rf_power_bs + K * p.rf_power_ut + p.fixed_power);
        // E_tr uses the per-snapshot pilot energy times N
        const double etr_total = N * etr;
        CHECK(std::exp(e.energy.log_e_t) == Approx(ep + etr_total + eh).epsilon(1e-12));
        CHECK(e.total_from_coeff == Approx(ep + etr_total + eh).epsilon(1e-12));
    }
    auto tiny = energy_music(2, 1, 1, 2, EnergyParams{});
    CHECK(std::isfinite(tiny.total_from_coeff));
    auto spot = energy_music(22, 10, 100, 180, EnergyParams{});
    CHECK(spot.total_from_coeff > 0.0);
    CHECK(std::isfinite(spot.total_w_hardware));
}

TEST_CASE("LE for MUSIC")
{
    CHECK(le_music(10, 0.1, 1e-4).value == Approx(1e4));
    CHECK(le_music(10, 0.1, 2e-4).value == Approx(1e4 / std::sqrt(2.0)));
    CHECK(le_music(10, 0.2, 1e-4).value == Approx(5e3));
    auto perfect = le_music(3, 1.0, 0.0);
    CHECK(perfect.perfect_estimate);
    CHECK(std::isinf(perfect.value));
    CHECK_THROWS(le_music(3, 1.0, -1.0));
}
