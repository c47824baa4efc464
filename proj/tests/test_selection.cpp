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
#include "aoa/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace aoa;
using Catch::Approx;

TEST_CASE("furthest_subset - definition")
{
    CHECK(furthest_subset(16, 6) == AntennaSubset::from_indices({10, 11, 12, 13, 14, 15}));
    CHECK(furthest_subset(9, 9) == AntennaSubset::full(9));
    CHECK(furthest_subset(9, 1) == AntennaSubset::from_indices({8}));
    CHECK_THROWS(furthest_subset(9, 0));
    CHECK_THROWS(furthest_subset(9, 10));
}

TEST_CASE("subset_trace - spot values")
{
    const double pi = std::numbers::pi;
    CHECK(subset_trace(AntennaSubset::full(4), pi) == Approx(0.875 * pi * pi));
    CHECK(subset_trace(furthest_subset(16, 6), 1.0) == Approx(955.0 / 36.0));
    CHECK(furthest_trace_closed_form(16, 6, 1.0) == Approx(955.0 / 36.0));
    CHECK(selection_objective(furthest_subset(16, 6)) == Approx(955.0 / 36.0));
}

TEST_CASE("Closed forms equal direct summation exactly")
{
    for (int M = 2; M <= 512; ++M)
    {
        std::int64_t full = 0;
        for (int x = 0; x < M; ++x)
            full += std::int64_t{x} * x;
        CHECK(full * 6 == std::int64_t{M - 1} * (2 * M - 1) * M);
        CHECK(full_trace_closed_form(M, 1.0) == Approx(double(full) / (double(M) * M)).epsilon(1e-15));
        for (int F = 1; F <= M; F += (M > 40 ? 7 : 1))
        {
            std::int64_t direct = 0;
            for (int x = M - F; x < M; ++x)
                direct += std::int64_t{x} * x;
            CHECK(furthest_sum_of_squares(M, F) == direct);
            CHECK(furthest_subset(M, F).sum_of_squares() == direct);
        }
    }
}

TEST_CASE("Brute force search - small arrays")
{
    CHECK(brute_force_best_subset(8, 3) == AntennaSubset::from_indices({5, 6, 7}));
    CHECK(brute_force_best_subset(8, 8) == AntennaSubset::full(8));
    for (int F = 1; F <= 14; ++F)
        CHECK(brute_force_best_subset(14, F) == furthest_subset(14, F));
    CHECK(binomial(14, 7) == 3432);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(5, 6) == 0);
    CHECK_THROWS_AS(brute_force_best_subset(60, 30, 1000), BudgetExceeded);
}
