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

#include "aoa/rng.hpp"

#include <cmath>
#include <numbers>

namespace aoa
{
    namespace
    {
        constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t hash_tag(std::string_view tag) noexcept
    {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (unsigned char c : tag)
        {
            h ^= c;
            h *= 0x100000001B3ULL;
        }
        return h;
    }

    std::uint64_t derive_stream(std::uint64_t master_seed, std::string_view purpose_tag, std::uint64_t index) noexcept
    {
        std::uint64_t h = splitmix64_mix(master_seed + golden_gamma);
        h = splitmix64_mix(h ^ hash_tag(purpose_tag));
        h = splitmix64_mix(h + index * golden_gamma);
        return h;
    }

    std::uint64_t CounterRng::next_u64() noexcept
    {
        ++counter_;
        return splitmix64_mix(key_ + counter_ * golden_gamma);
    }

    double CounterRng::uniform() noexcept
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double CounterRng::gaussian() noexcept
    {
        if (has_cached_)
        {
            has_cached_ = false;
            return cached_;
        }
        // 1 - uniform() lies in (0, 1], keeps log finite
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(phi);
        has_cached_ = true;
        return r * std::cos(phi);
    }

    std::complex<double> CounterRng::complex_gaussian(double variance) noexcept
    {
        const double s = std::sqrt(0.5 * variance);
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

    double CounterRng::sign() noexcept
    {
        return (next_u64() >> 63) ? 1.0 : -1.0;
    }
}
