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

#include "aoa/errors.hpp"
#include "aoa/estimators.hpp"
#include "aoa/fisher.hpp"
#include "aoa/linalg.hpp"
#include "aoa/rng.hpp"
#include "aoa/selection.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace aoa;
using Catch::Approx;

namespace
{
    const double pi = std::numbers::pi;

    Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed)
    {
        CounterRng rng(seed);
        Eigen::MatrixXcd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a(i, j) = rng.complex_gaussian(1.0);
        return (a + a.adjoint()) / 2.0;
    }

    Scenario music_scene(int M, std::vector<double> angles, double noise)
    {
        Scenario sc{ArrayGeometry::with_spacing_ratio(M, 0.5), {}, noise, 0.0};
        for (double a : angles)
            sc.users.push_back(UserTerminal{a, 1.0, {1.0, 0.0}, {1.0, 0.0}});
        return sc;
    }
}

TEST_CASE("Sample covariance")
{
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(4);
    e1(0) = 1.0;
    std::vector<Eigen::VectorXcd> one{e1};
    auto r = sample_covariance(one);
    CHECK(r(0, 0) == cdouble(1.0, 0.0));
    CHECK(r.cwiseAbs().sum() == 1.0);

    CounterRng rng(1);
    Eigen::MatrixXcd y(5, 100000);
    for (int n = 0; n < y.cols(); ++n)
        for (int i = 0; i < 5; ++i)
            y(i, n) = rng.complex_gaussian(1.0);
    auto big = sample_covariance(y);
    CHECK((big - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() < 0.02);
    CHECK((big - big.adjoint()).norm() == 0.0);
}

TEST_CASE("Hermitian EVD - diagonal, scaled identity, random against Eigen")
{
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
    d.diagonal() << 2.0, -1.0, 5.0, 0.5;
    auto ed = hermitian_evd(d);
    CHECK(ed.values(0) == 5.0);
    CHECK(ed.values(1) == 2.0);
    CHECK(ed.values(2) == 0.5);
    CHECK(ed.values(3) == -1.0);
    CHECK(std::abs(ed.vectors(2, 0)) == Approx(1.0));

    auto ei = hermitian_evd(3.5 * Eigen::MatrixXcd::Identity(6, 6));
    for (int i = 0; i < 6; ++i)
        CHECK(ei.values(i) == Approx(3.5));

    for (int n : {2, 3, 8, 16, 40})
    {
        auto r = random_hermitian(n, static_cast<std::uint64_t>(n));
        auto e = hermitian_evd(r);
        const double scale = r.norm();
        Eigen::MatrixXcd recon = e.vectors * e.values.cast<cdouble>().asDiagonal() * e.vectors.adjoint();
        CHECK((recon - r).norm() < 1e-8 * scale);
        CHECK((r * e.vectors - e.vectors * e.values.cast<cdouble>().asDiagonal()).norm() < 1e-8 * scale);
        CHECK((e.vectors.adjoint() * e.vectors - Eigen::MatrixXcd::Identity(n, n)).norm() < 1e-10);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> oracle(r);
        Eigen::VectorXd want = oracle.eigenvalues().reverse();
        CHECK((e.values - want).norm() < 1e-10 * scale);
        for (int i = 0; i + 1 < n; ++i)
            CHECK(e.values(i) >= e.values(i + 1));
    }

    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_evd(bad), std::invalid_argument);
}

TEST_CASE("Search grid and peak picking")
{
    auto g = search_grid(5, 0.0);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == Approx(pi));
    CHECK(g[2] == Approx(pi / 2));
    CHECK_THROWS(search_grid(1, 0.0));

    Eigen::VectorXd s(7);
    s << 1, 3, 1, 2, 2, 5, 0;
    auto p = pick_peaks(s, 2);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == 1);
    CHECK(p[1] == 5);
}

TEST_CASE("MUSIC - orthogonality with the exact covariance")
{
    Scenario sc = music_scene(10, {0.8, 2.0}, 0.1);
    auto sub = AntennaSubset::full(10);
    Eigen::MatrixXcd a(10, 2);
    for (int k = 0; k < 2; ++k)
        a.col(k) = steering_vector(sc.geometry, sc.users[k].angle, sub);
    Eigen::MatrixXcd r = a * a.adjoint() + 0.1 * Eigen::MatrixXcd::Identity(10, 10);
    auto e = hermitian_evd(r);
    Eigen::MatrixXcd en = e.vectors.rightCols(8);
    for (int k = 0; k < 2; ++k)
        CHECK((en.adjoint() * a.col(k)).norm() < 1e-10);
}

TEST_CASE("MUSIC - high SNR recovers the angles")
{
    const int Q = 1800;
    const double step = pi / (Q - 1);
    for (auto angles : {std::vector<double>{pi / 3}, std::vector<double>{0.9, 2.1}})
    {
        Scenario sc = music_scene(16, angles, 1e-6);
        MusicConfig cfg{400, Q, AntennaSubset::full(16), 0.0};
        auto y = music_snapshots(sc, cfg.subset, cfg.snapshots, 1.0, 5);
        std::vector<Eigen::VectorXcd> cols;
        for (int n = 0; n < y.cols(); ++n)
            cols.push_back(y.col(n));
        auto r = music_estimate(cols, cfg, sc);
        REQUIRE(r.angles.size() == angles.size());
        for (std::size_t k = 0; k < angles.size(); ++k)
            CHECK(std::abs(r.angles[k] - angles[k]) <= step);

        MusicEstimator est(sc.geometry, cfg, static_cast<int>(angles.size()));
        CHECK(est.estimate(y).angles == r.angles);
    }
    Scenario sc = music_scene(4, {1.0, 2.0}, 1e-6);
    CHECK_THROWS_AS(MusicEstimator(sc.geometry, MusicConfig{10, 100, AntennaSubset::first(2), 0.0}, 2), NoNoiseSubspace);
}

TEST_CASE("ML - noiseless exactness and efficiency")
{
    const auto grid = search_grid(1800, 0.0);
    const double step = grid[1] - grid[0];

    Scenario sc{ArrayGeometry::with_spacing_ratio(16, 0.5), {UserTerminal{pi / 6, 1.0, {1.0, 0.0}, {0.0, 0.0}}}, 0.0, 0.5};
    auto ch = draw_channel(sc, ChannelLaw::complex_gaussian, 3);
    for (auto sub : {AntennaSubset::full(16), furthest_subset(16, 6), AntennaSubset::first(6)})
    {
        auto y = synthesize_snapshot(sc, ch, sub, 1);
        auto g = ml_estimate(y, sc, ch, sub, grid);
        CHECK(std::abs(g[0] - pi / 6) < step);
        MlOptions local{MlSearch::local, {pi / 6 + 0.01}, 50};
        CHECK(std::abs(ml_estimate(y, sc, ch, sub, grid, local)[0] - pi / 6) < step);
    }

    Scenario two{ArrayGeometry::with_spacing_ratio(24, 0.5),
                 {UserTerminal{0.7, 1.0, {1.0, 0.0}, {0.0, 0.0}}, UserTerminal{2.2, 1.0, {1.0, 0.0}, {0.0, 0.0}}}, 0.0, 0.5};
    auto ch2 = draw_channel(two, ChannelLaw::complex_gaussian, 4);
    auto y2 = synthesize_snapshot(two, ch2, AntennaSubset::full(24), 1);
    auto est2 = ml_estimate(y2, two, ch2, AntennaSubset::full(24), grid);
    std::sort(est2.begin(), est2.end());
    CHECK(std::abs(est2[0] - 0.7) < step);
    CHECK(std::abs(est2[1] - 2.2) < step);

    // variance of the local estimator sits at or above the bound for the full array
    Scenario eff{ArrayGeometry::with_spacing_ratio(64, 0.5), {UserTerminal{pi / 3, 1.0, {std::sqrt(1e-19), 0.0}, {0.0, 0.0}}}, 1e-20, 0.5};
    const auto fine = search_grid(3600, 0.0);
    MlOptions opts{MlSearch::local, {pi / 3}, 50};
    double se = 0;
    const int n = 3000;
    for (int t = 0; t < n; ++t)
    {
        auto c = draw_channel(eff, ChannelLaw::complex_gaussian, derive_stream(9, "ch", static_cast<std::uint64_t>(t)));
        auto y = synthesize_snapshot(eff, c, AntennaSubset::full(64), derive_stream(9, "n", static_cast<std::uint64_t>(t)));
        const double e = ml_estimate(y, eff, c, AntennaSubset::full(64), fine, opts)[0] - pi / 3;
        se += e * e;
    }
    const double det = deterministic_crlb(eff, SubsetSpec::full()).trace;
    CHECK(se / n >= 0.9 * det);
    CHECK(se / n < 2.0 * det);
}

TEST_CASE("Mean squared error")
{
    std::vector<double> truth{0.5, 1.5, 2.5};
    std::vector<std::vector<double>> perfect{truth, truth};
    CHECK(mse(truth, perfect) == 0.0);

    std::vector<std::vector<double>> offset{{0.5, 1.6, 2.5}};
    CHECK(mse(truth, offset) == Approx(0.01));

    CounterRng rng(2);
    std::vector<std::vector<double>> est(50);
    for (auto &e : est)
        for (double t : truth)
            e.push_back(t + 0.01 * rng.gaussian());
    double want = 0;
    for (const auto &e : est)
        for (std::size_t k = 0; k < truth.size(); ++k)
            want += (e[k] - truth[k]) * (e[k] - truth[k]);
    CHECK(mse(truth, est) == Approx(want / 50));
}

TEST_CASE("MUSIC - contiguous subsets share the population covariance")
{
    // a_furthest(theta) = exp(-j (M-F) beta cos theta) a_first(theta); the phase cancels in a a^H
    Scenario sc = music_scene(22, {0.6, 1.4, 2.5}, 0.3);
    for (int F = 4; F <= 22; ++F)
    {
        Eigen::MatrixXcd r_far = 0.3 * Eigen::MatrixXcd::Identity(F, F), r_near = r_far;
        for (const auto &u : sc.users)
        {
            auto af = steering_vector(sc.geometry, u.angle, furthest_subset(22, F));
            auto an = steering_vector(sc.geometry, u.angle, AntennaSubset::first(F));
            r_far += af * af.adjoint();
            r_near += an * an.adjoint();
        }
        CHECK((r_far - r_near).norm() < 1e-12);
    }
}
