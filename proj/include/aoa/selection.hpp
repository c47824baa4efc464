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

#include <cstdint>

#include "aoa/array_model.hpp"

namespace aoa
{
    /// Phase indices {M-F, ..., M-1}: the F antennas furthest from the reference element.
    AntennaSubset furthest_subset(int num_antennas, int size);

    /// (1/F^2) * sum_{x in S} x^2
    double selection_objective(const AntennaSubset &subset);

    /// tr(Sigma_S) = (beta^2 / F^2) * sum_{x in S} x^2
    double subset_trace(const AntennaSubset &subset, double beta);

    /// beta^2 * (6M(M-F-1) + (F+1)(2F+1)) / (6F), the trace of the furthest set.
    double furthest_trace_closed_form(int num_antennas, int size, double beta);

    /// beta^2 (M-1)(2M-1) / (6M), the trace of the full array.
    double full_trace_closed_form(int num_antennas, double beta);

    /// Integer identity behind the closed forms: sum_{x=M-F}^{M-1} x^2 = F (6M(M-F-1) + (F+1)(2F+1)) / 6.
    std::int64_t furthest_sum_of_squares(int num_antennas, int size);

    std::uint64_t binomial(int n, int k);

    /// Exhaustive search for the size-F subset maximizing sum x^2; the lexicographically smallest
    /// maximizer wins ties. Throws BudgetExceeded if C(M, F) exceeds max_combinations.
    AntennaSubset brute_force_best_subset(int num_antennas, int size, std::uint64_t max_combinations = 10'000'000);
}
