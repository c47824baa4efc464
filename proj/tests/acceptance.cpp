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

// Acceptance checks A1..A10. Prints one PASS/FAIL line per criterion and exits non-zero if any fail.

#include "aoa/energy.hpp"
#include "aoa/errors.hpp"
#include "aoa/fisher.hpp"
#include "aoa/montecarlo.hpp"
#include "aoa/rng.hpp"
#include "aoa/selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>

using namespace aoa;

namespace
{
    const double pi = std::numbers::pi;

    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    std::string fmt(const char *f, double a)
    {
        char buf[128];
        std::snprintf(buf, sizeof buf, f, a);
        return buf;
    }

    int hw_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

    // w = G s written out directly, the finite-difference oracle differentiates this
    Eigen::VectorXcd signal(const Scenario &sc, const ChannelRealization &ch, const AntennaSubset &sub)
    {
        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(sub.size());
        const double beta = 2.0 * pi * sc.geometry.spacing() / sc.geometry.wavelength();
        const double f = static_cast<double>(sub.size());
        for (int i = 0; i < sub.size(); ++i)
            for (int k = 0; k < sc.num_users(); ++k)
            {
                const auto &u = sc.users[static_cast<std::size_t>(k)];
                w(i) += std::sqrt(u.path_gain) * ch.h(sub[i], k) * u.pilot *
                        std::exp(cdouble(0.0, -sub[i] * beta * std::cos(u.angle))) / std::sqrt(f);
            }
        return w;
    }

    Outcome a1()
    {
        CounterRng rng(derive_stream(2026, "A1", 0));
        double worst = 0.0, worst_s = 0.0;
        for (int n = 0; n < 100; ++n)
        {
            const int K = 1 + static_cast<int>(rng.uniform() * 5);
            const int M = K + 2 + static_cast<int>(rng.uniform() * (63 - K));
            Scenario sc{ArrayGeometry(M, 0.2 + 0.6 * rng.uniform(), 1.0), {}, 1e-20 * (0.5 + rng.uniform()),
                        0.1 + rng.uniform()};
            // distinct angles kept away from each other and from endfire
            std::vector<double> angles;
            while (static_cast<int>(angles.size()) < K)
            {
                const double a = 0.2 + (pi - 0.4) * rng.uniform();
                bool close = false;
                for (double b : angles)
                    close = close || std::abs(std::cos(a) - std::cos(b)) < 0.05;
                if (!close)
                    angles.push_back(a);
            }
            for (double a : angles)
                sc.users.push_back(UserTerminal{a, 0.1 + 4.0 * rng.uniform(),
                                                std::polar(std::sqrt(1e-19 * (0.2 + rng.uniform())), 2 * pi * rng.uniform()),
                                                {rng.gaussian() * 0.5, rng.gaussian() * 0.5}});
            const auto law = static_cast<ChannelLaw>(n % 3);
            const auto ch = draw_channel(sc, law, derive_stream(2026, "A1-ch", static_cast<std::uint64_t>(n)));

            std::vector<int> idx;
            for (int x = 0; x < M; ++x)
                if (rng.uniform() < 0.6 || x == M - 1)
                    idx.push_back(x);
            const auto sub = n % 2 ? AntennaSubset::full(M) : AntennaSubset::from_indices(idx);

            const double h = 1e-6;
            Eigen::MatrixXcd d(sub.size(), K);
            for (int k = 0; k < K; ++k)
            {
                Scenario up = sc, down = sc;
                up.users[static_cast<std::size_t>(k)].angle += h;
                down.users[static_cast<std::size_t>(k)].angle -= h;
                d.col(k) = (signal(up, ch, sub) - signal(down, ch, sub)) / (2.0 * h);
            }
            const Eigen::MatrixXd j_fd = (2.0 / sc.noise_psd) * (d.adjoint() * d).real();
            Eigen::MatrixXd j;
            try
            {
                j = exact_crlb(sc, ch, sub).fim;
            }
            catch (const SingularFim &)
            {
                return {false, "singular FIM in scenario " + std::to_string(n)};
            }
            worst = std::max(worst, (j - j_fd).norm() / j_fd.norm());

            // degenerate channel: exact single-user bound equals the closed form, including sqrt(l)
            Scenario one{sc.geometry, {sc.users[0]}, sc.noise_psd, 0.0};
            one.users[0].dominant_gain = {1.0, 0.0};
            const auto c1 = draw_channel(one, law, 1);
            const double exact = exact_crlb(one, c1, AntennaSubset::full(M)).trace;
            const double det = deterministic_crlb(one, SubsetSpec::full()).trace;
            worst_s = std::max(worst_s, std::abs(exact - det) / det);
        }
        return {worst < 1e-4 && worst_s < 1e-10,
                "max rel Frobenius error " + fmt("%.2e", worst) + ", single-user closed-form gap " + fmt("%.1e", worst_s)};
    }

    Outcome a2()
    {
        bool ok = true;
        std::string detail;
        std::uint64_t point = 0;
        for (auto law : {ChannelLaw::complex_gaussian, ChannelLaw::uniform, ChannelLaw::rademacher})
        {
            double prev = HUGE_VAL;
            detail += std::string(to_string(law)) + ":";
            for (int M : {64, 128, 256})
            {
                const auto sc = make_scenario(M, 5, pi / 10, 10.0, Physics{});
                const auto p = crlb_convergence_point(sc, law, SubsetSpec::full(), 100,
                                                      derive_stream(1, "A2", point++), hw_threads());
                ok = ok && p.median_rel_gap <= prev;
                if (M == 256)
                    ok = ok && p.median_rel_gap < 0.05;
                prev = p.median_rel_gap;
                detail += fmt(" %.4f", p.median_rel_gap);
            }
            detail += "; ";
        }
        return {ok, "medians at M=64,128,256 " + detail};
    }

    Outcome a3()
    {
        SubsetOraclePlan plan;
        plan.antennas.clear();
        for (int M = 2; M <= 14; ++M)
            plan.antennas.push_back(M);
        bool match = false;
        run_subset_oracle(plan, &match);

        bool closed = true;
        double worst = 0.0;
        for (int M = 2; M <= 512; ++M)
        {
            std::int64_t direct = 0;
            for (int F = 1; F <= M; ++F)
            {
                const std::int64_t x = M - F;
                direct += x * x;
                closed = closed && furthest_sum_of_squares(M, F) == direct;
                // closed form with exact integer numerator: 6 * sum = F (6M(M-F-1) + (F+1)(2F+1))
                const std::int64_t num = 6LL * M * (M - F - 1) + std::int64_t{F + 1} * (2 * F + 1);
                closed = closed && 6 * direct == F * num;
                const double t1 = furthest_trace_closed_form(M, F, 1.0);
                const double t2 = subset_trace(furthest_subset(M, F), 1.0);
                worst = std::max(worst, std::abs(t1 - t2) / t2);
            }
        }
        return {match && closed && worst < 1e-14,
                std::string("exhaustive search ") + (match ? "agrees" : "DISAGREES") + " for M<=14; integer closed form " +
                    (closed ? "exact" : "WRONG") + " for M<=512; double trace rel diff " + fmt("%.1e", worst)};
    }

    Outcome a4()
    {
        const auto far = geometry_factor(SubsetSpec::furthest(6), 16);
        const auto near = geometry_factor(SubsetSpec::first(6), 16);
        // far/near == 55/955 exactly
        const bool exact = far.num * near.den * 955 == near.num * far.den * 55;

        MlVariancePlan plan;
        plan.base.threads = hw_threads();
        MlVarianceSummary s;
        run_ml_variance(plan, &s);
        const bool band = s.ratio_mc >= 0.03 && s.ratio_mc <= 0.12;
        return {exact && band && s.var_furthest < s.var_first,
                "deterministic ratio " + std::string(exact ? "= 55/955 exactly" : "WRONG") + " (" + fmt("%.6f", s.ratio_det) +
                    "), ML ratio over " + std::to_string(plan.base.num_trials) + " trials " + fmt("%.4f", s.ratio_mc)};
    }

    Outcome a5()
    {
        EnergyParams e;
        std::string got;
        bool ok = true;
        for (int K = 2; K <= 10; ++K)
        {
            const auto sc = make_scenario(80, K, pi / 10, e.pilot_power / 1e-20, Physics{});
            const int f = optimize_num_antennas([&](int F) { return le_ml(sc, F, Selection::furthest, e).log_le; }, K, 80);
            ok = ok && f == K + 1;
            got += " " + std::to_string(f);
        }
        return {ok, "F* for K=2..10:" + got};
    }

    Outcome a6()
    {
        const int M = 80;
        bool ok = true;
        // compare num/den rationals by cross-multiplication
        auto less = [](GeometryFactor a, GeometryFactor b) { return a.num * b.den < b.num * a.den; };
        auto equal = [](GeometryFactor a, GeometryFactor b) { return a.num * b.den == b.num * a.den; };
        for (int F = 2; F <= M; ++F)
        {
            const auto far = geometry_factor(SubsetSpec::furthest(F), M);
            const auto near = geometry_factor(SubsetSpec::first(F), M);
            if (F > 2)
            {
                ok = ok && less(geometry_factor(SubsetSpec::furthest(F - 1), M), far);
                ok = ok && less(near, geometry_factor(SubsetSpec::first(F - 1), M));
            }
            ok = ok && (F < M ? less(far, near) : equal(far, near));
        }
        const auto sc = make_scenario(M, 3, pi / 10, 10.0, Physics{});
        ok = ok && deterministic_crlb(sc, SubsetSpec::furthest(M)).trace == deterministic_crlb(sc, SubsetSpec::first(M)).trace;
        return {ok, "furthest increasing, first decreasing, furthest < first for F < 80, equal at F = 80"};
    }

    Outcome a7()
    {
        CounterRng rng(derive_stream(2026, "A7", 0));
        bool ok = true;
        for (int i = 0; i < 10000; ++i)
        {
            const long long K = 1 + static_cast<long long>(rng.uniform() * 64);
            const long long F = K + 1 + static_cast<long long>(rng.uniform() * 512);
            const long long N = 1 + static_cast<long long>(rng.uniform() * 4096);
            const long long Q = 1 + static_cast<long long>(rng.uniform() * 7200);
            const long long steps = (2 * N + 1) * F * F + F * F * F + Q * (2 * F * F * (F - K) + F * F + F - 1);
            ok = ok && music_op_count(static_cast<int>(F), static_cast<int>(K), static_cast<int>(N), static_cast<int>(Q)).total == steps;
        }
        const auto spot = music_op_count(8, 2, 100, 180).total;
        return {ok && spot == 164396, "10^4 random tuples " + std::string(ok ? "match" : "MISMATCH") + ", spot value " +
                                          std::to_string(spot)};
    }

    Outcome a8()
    {
        MusicLePlan plan;
        plan.base.threads = hw_threads();
        const auto t = run_music_le(plan);
        const auto cK = t.column("K"), cF = t.column("F"), cM = t.column("M"), cLf = t.column("log_le_furthest"),
                   cLn = t.column("log_le_first"), cW = t.column("frac_furthest_le_first");

        struct Point
        {
            std::vector<int> F;
            std::vector<double> far, near, win;
            int M = 0;
        };
        std::map<std::int64_t, Point> points;
        for (const auto &row : t.rows)
        {
            auto &p = points[std::get<std::int64_t>(row[cK])];
            p.M = static_cast<int>(std::get<std::int64_t>(row[cM]));
            p.F.push_back(static_cast<int>(std::get<std::int64_t>(row[cF])));
            p.far.push_back(std::get<double>(row[cLf]));
            p.near.push_back(std::get<double>(row[cLn]));
            p.win.push_back(std::get<double>(row[cW]));
        }

        bool le_order = true, mse_order = true, interior = true;
        std::string detail;
        for (const auto &[K, p] : points)
        {
            int le_bad = 0;
            double wins = 0.0;
            int counted = 0;
            for (std::size_t i = 0; i < p.F.size(); ++i)
            {
                le_bad += p.far[i] < p.near[i];
                if (p.F[i] < p.M)
                {
                    wins += p.win[i];
                    ++counted;
                }
            }
            const double frac = counted ? wins / counted : 1.0;
            const auto best = static_cast<std::size_t>(std::max_element(p.near.begin(), p.near.end()) - p.near.begin());
            const auto best_far = static_cast<std::size_t>(std::max_element(p.far.begin(), p.far.end()) - p.far.begin());
            const bool inner = best > 0 && best + 1 < p.near.size();
            le_order = le_order && le_bad == 0;
            mse_order = mse_order && frac >= 0.8;
            interior = interior && inner;
            detail += "(K=" + std::to_string(K) + ",M=" + std::to_string(p.M) + "): LE furthest<first at " +
                      std::to_string(le_bad) + "/" + std::to_string(p.F.size()) + " F, MSE win fraction " +
                      fmt("%.3f", frac) + ", first-set argmax F=" + std::to_string(p.F[best]) + " (" +
                      (inner ? "interior" : "boundary") + "), furthest argmax F=" + std::to_string(p.F[best_far]) + "; ";
        }
        detail = std::string("LE ordering ") + (le_order ? "ok" : "fails") + ", MSE ordering " + (mse_order ? "ok" : "fails") +
                 ", interior max " + (interior ? "ok" : "fails") + " | " + detail;
        return {le_order && mse_order && interior, detail};
    }

    Outcome a9()
    {
        LemmaPlan plan;
        plan.base.threads = hw_threads();
        const auto t = run_lemma_diagnostics(plan);
        const auto cM = t.column("M"), cQ = t.column("quantity"), cG = t.column("gamma"), cMed = t.column("median");
        std::map<std::string, std::vector<double>> med;
        bool v_ok = true;
        std::string vtext;
        for (const auto &row : t.rows)
        {
            const auto &q = std::get<std::string>(row[cQ]);
            if (q == "quad_form_gap" || q == "cross_form" || q == "gram_residual")
                med[q].push_back(std::get<double>(row[cMed]));
            if (q == "trig_sum" && std::get<std::int64_t>(row[cM]) == 4096)
            {
                const double g = std::get<double>(row[cG]);
                const double v = std::get<double>(row[cMed]);
                if (g != 0.0)
                {
                    v_ok = v_ok && v < 1e-2;
                    vtext += fmt(" %.1e", v);
                }
            }
        }
        bool mono = med.size() == 3;
        std::string mtext;
        for (const auto &[q, v] : med)
        {
            for (std::size_t i = 1; i < v.size(); ++i)
                mono = mono && v[i] <= v[i - 1];
            mtext += " " + q + fmt(" %.3g", v.front()) + fmt("->%.3g", v.back());
        }
        return {v_ok && mono, "|V(4096, 0.5/1/2)|" + vtext + "; medians M=64->4096:" + mtext};
    }

    int run_cli(const std::string &args)
    {
        const std::string cmd = std::string(AOA_LAB_EXE) + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream f(p, std::ios::binary);
        std::stringstream s;
        s << f.rdbuf();
        return s.str();
    }

    Outcome a10()
    {
        namespace fs = std::filesystem;
        const auto dir = fs::temp_directory_path() / "aoa_lab_acceptance";
        fs::create_directories(dir);
        const std::vector<std::pair<std::string, std::string>> runs = {
            {"crlb-convergence", "--set trials=20 --set M=32,64 --set subset_M=40 --set F=10,20,40"},
            {"ml-variance", "--set trials=400"},
            {"le-sweep", ""},
            {"music-le", "--set trials=10 --set points=3:10 --set Q=300"},
            {"lemma-diagnostics", "--set trials=20 --set M=64,128,256"},
            {"subset-oracle", "--M 10"},
        };
        bool ok = true;
        std::string bad;
        for (const auto &[name, extra] : runs)
        {
            std::vector<std::string> outputs;
            for (int threads : {1, 2, 5})
            {
                const auto out = dir / (name + "-" + std::to_string(threads) + ".csv");
                fs::remove(out);
                const int code = run_cli(name + " --seed 42 --threads " + std::to_string(threads) + " " + extra + " -o " + out.string());
                outputs.push_back(code == 0 ? slurp(out) : "exit " + std::to_string(code));
            }
            const bool same = !outputs[0].empty() && outputs[0].rfind("exit", 0) != 0 && outputs[0] == outputs[1] &&
                              outputs[0] == outputs[2];
            ok = ok && same;
            if (!same)
                bad += " " + name;
        }
        return {ok, ok ? "six experiments byte-identical at --threads 1, 2, 5" : "differences in:" + bad};
    }
}

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"A1 FIM consistency", a1},
        {"A2 CRLB convergence", a2},
        {"A3 subset optimality", a3},
        {"A4 selection ratio", a4},
        {"A5 optimal antenna count", a5},
        {"A6 CRLB ordering", a6},
        {"A7 MUSIC operation count", a7},
        {"A8 MUSIC behaviour", a8},
        {"A9 lemma diagnostics", a9},
        {"A10 determinism", a10},
    };
    int failed = 0;
    for (const auto &[name, check] : criteria)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = check();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s [%.1fs]: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
