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

#include <stdexcept>
#include <string>

namespace aoa
{
    // Subset index out of range, duplicated, or empty.
    class InvalidSubset : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Fisher information matrix is (numerically) singular, e.g. two users share an angle.
    class SingularFim : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Closed-form bound diverges (endfire angle, zero SNR, zero channel power).
    class DivergentBound : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    class NumericalFailure : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // MUSIC needs at least one noise eigenvector: F > K.
    class NoNoiseSubspace : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class BudgetExceeded : public std::length_error
    {
    public:
        using std::length_error::length_error;
    };
}
