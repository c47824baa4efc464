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

#include "aoa/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace aoa;
using Catch::Approx;

namespace
{
    const double pi = std::numbers::pi;

    std::string text(const CsvTable &t)
    {
        std::ostringstream o;
        write_csv(t, o);
        return o.str();
    }
}

TEST_CASE("equispaced_angles")
{
    CHECK(equispaced_angles(1, pi / 10)[0] == Approx(pi / 2));
    auto three = equispaced_angles(3, 0.0);
    CHECK(three[0] == Approx(pi / 4));
    CHECK(three[1] == Approx(pi / 2));
    CHECK(three[2] == Approx(3 * pi / 4));
    auto five = equispaced_angles(5, pi / 10);
    for (int k = 0; k < 5; ++k)
        CHECK(five[k] + five[4 - k] == Approx(pi));
    CHECK(five[1] - five[0] == Approx((pi - pi / 5) / 6));
    CHECK_THROWS(equispaced_angles(0, 0.1));
    CHECK_THROWS(equispaced_angles(2, pi / 2));
}

TEST_CASE("make_scenario sets rho")
{
    auto sc = make_scenario(32, 4, pi / 10, 10.0, Physics{});
    CHECK(sc.num_users() == 4);
    for (int k = 0; k < 4; ++k)
        CHECK(snr_rho(sc, k) == Approx(10.0));
}

TEST_CASE("parallel_for - every index once, errors propagate")
{
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits)
        CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(50, 3, [](std::size_t i) { if (i == 17) throw std::runtime_error("x"); }),
                    std::runtime_error);
}

TEST_CASE("Convergence point - degenerate channel gives the closed form")
{
    Physics phys;
    phys.multipath_var = 0.0;
    phys.dominant_gain = 1.0;
    auto sc = make_scenario(40, 1, pi / 10, 10.0, phys);
    for (auto spec : {SubsetSpec::full(), SubsetSpec::first(12), SubsetSpec::furthest(12)})
    {
        auto p = crlb_convergence_point(sc, ChannelLaw::complex_gaussian, spec, 5, 3, 1);
        for (double g : p.rel_gaps)
            CHECK(g < 1e-10);
    }
}

TEST_CASE("Experiments are independent of the thread count")
{
    ConvergencePlan c;
    c.base.num_trials = 8;
    c.users = {3};
    c.antennas = {16, 32};
    c.subset_array = 20;
    c.subset_sizes = {5, 10};
    auto c1 = c, c3 = c;
    c3.base.threads = 3;
    CHECK(text(run_crlb_convergence(c1)) == text(run_crlb_convergence(c3)));

    MlVariancePlan m;
    m.base.num_trials = 60;
    auto m3 = m;
    m3.base.threads = 3;
    CHECK(text(run_ml_variance(m)) == text(run_ml_variance(m3)));

    MusicLePlan u;
    u.base.num_trials = 4;
    u.points = {{2, 8}};
    u.grid_size = 200;
    auto u3 = u;
    u3.base.threads = 3;
    CHECK(text(run_music_le(u)) == text(run_music_le(u3)));

    LemmaPlan l;
    l.base.num_trials = 10;
    l.antennas = {64, 128};
    auto l3 = l;
    l3.base.threads = 3;
    CHECK(text(run_lemma_diagnostics(l)) == text(run_lemma_diagnostics(l3)));

    auto m7 = m;
    m7.base.master_seed = 7;
    CHECK(text(run_ml_variance(m)) != text(run_ml_variance(m7)));
}

TEST_CASE("Every row carries its seed")
{
    MlVariancePlan m;
    m.base.num_trials = 20;
    auto t = run_ml_variance(m);
    CHECK(t.columns == std::vector<std::string>{"trial", "seed", "theta_hat_furthest", "theta_hat_first"});
    const auto s = t.column("seed");
    for (const auto &row : t.rows)
        CHECK(std::get<std::string>(row[s]).size() > 0);

    LeSweepPlan le;
    le.users = {2, 3};
    auto lt = run_le_sweep(le);
    CHECK(lt.rows.size() == 2);
    CHECK_NOTHROW(lt.column("seed"));
}

TEST_CASE("trig_moment_sum")
{
    CHECK(trig_moment_sum(4096, 0.0) == Approx(1.0 / 3.0).epsilon(1e-3));
    CHECK(trig_moment_sum(3, 0.0) == Approx(14.0 / 27.0));
    for (double g : {0.5, 1.0, 2.0})
        CHECK(std::abs(trig_moment_sum(4096, g)) < 1e-2);
    double direct = 0;
    for (int m = 1; m <= 10; ++m)
        direct += m * m * std::cos(m * 0.7);
    CHECK(trig_moment_sum(10, 0.7) == Approx(direct / 1000));
}

TEST_CASE("Subset oracle experiment")
{
    SubsetOraclePlan p;
    p.antennas = {5, 9};
    bool ok = false;
    auto t = run_subset_oracle(p, &ok);
    CHECK(ok);
    CHECK(t.rows.size() == 14);
}

TEST_CASE("median")
{
    CHECK(median({3, 1, 2}) == 2);
    CHECK(median({4, 1, 2, 3}) == 2.5);
    CHECK(std::isnan(median({})));
}
