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

#include "aoa/selection.hpp"
#include "aoa/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace aoa
{
    namespace
    {
        void check_sizes(int num_antennas, int size, const char *who)
        {
            if (num_antennas < 1)
                throw std::invalid_argument(std::string(who) + ": M must be positive");
            if (size < 1 || size > num_antennas)
                throw InvalidSubset(std::string(who) + ": F=" + std::to_string(size) + " outside [1, " +
                                    std::to_string(num_antennas) + "]");
        }
    }

    AntennaSubset furthest_subset(int num_antennas, int size)
    {
        check_sizes(num_antennas, size, "furthest_subset");
        std::vector<int> idx;
        idx.reserve(static_cast<std::size_t>(size));
        for (int x = num_antennas - size; x < num_antennas; ++x)
            idx.push_back(x);
        return AntennaSubset::from_indices(std::move(idx));
    }

    double selection_objective(const AntennaSubset &subset)
    {
        const double f = subset.size();
        return static_cast<double>(subset.sum_of_squares()) / (f * f);
    }

    double subset_trace(const AntennaSubset &subset, double beta)
    {
        return beta * beta * selection_objective(subset);
    }

    std::int64_t furthest_sum_of_squares(int num_antennas, int size)
    {
        check_sizes(num_antennas, size, "furthest_sum_of_squares");
        const std::int64_t M = num_antennas;
        const std::int64_t F = size;
        return F * (6 * M * (M - F - 1) + (F + 1) * (2 * F + 1)) / 6;
    }

    double furthest_trace_closed_form(int num_antennas, int size, double beta)
    {
        check_sizes(num_antennas, size, "furthest_trace_closed_form");
        const std::int64_t M = num_antennas;
        const std::int64_t F = size;
        const std::int64_t q = 6 * M * (M - F - 1) + (F + 1) * (2 * F + 1);
        return beta * beta * (static_cast<double>(q) / static_cast<double>(6 * F));
    }

    double full_trace_closed_form(int num_antennas, double beta)
    {
        const std::int64_t M = num_antennas;
        return beta * beta * (static_cast<double>((M - 1) * (2 * M - 1)) / static_cast<double>(6 * M));
    }

    std::uint64_t binomial(int n, int k)
    {
        if (k < 0 || k > n)
            return 0;
        k = std::min(k, n - k);
        __extension__ unsigned __int128 r = 1;
        for (int i = 1; i <= k; ++i)
        {
            r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
            if (r > UINT64_MAX)
                return UINT64_MAX;
        }
        return static_cast<std::uint64_t>(r);
    }

    AntennaSubset brute_force_best_subset(int num_antennas, int size, std::uint64_t max_combinations)
    {
        check_sizes(num_antennas, size, "brute_force_best_subset");
        if (binomial(num_antennas, size) > max_combinations)
            throw BudgetExceeded("brute_force_best_subset: C(" + std::to_string(num_antennas) + ", " +
                                 std::to_string(size) + ") exceeds the enumeration budget");

        // Lexicographic enumeration of combinations; strict improvement keeps the first maximizer.
        std::vector<int> comb(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i)
            comb[static_cast<std::size_t>(i)] = i;

        std::vector<int> best = comb;
        std::int64_t best_value = -1;
        while (true)
        {
            std::int64_t value = 0;
            for (int x : comb)
                value += static_cast<std::int64_t>(x) * x;
            if (value > best_value)
            {
                best_value = value;
                best = comb;
            }

            int i = size - 1;
            while (i >= 0 && comb[static_cast<std::size_t>(i)] == num_antennas - size + i)
                --i;
            if (i < 0)
                break;
            ++comb[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
        }
        return AntennaSubset::from_indices(std::move(best));
    }
}
