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

#include <complex>
#include <cstdint>
#include <string_view>

namespace aoa
{
    /// Counter-based 64-bit generator.
    ///
    /// Output i is the SplitMix64 finalizer applied to key + (i+1)*golden_gamma, so a stream is
    /// fully described by its key and position. Streams for independent work items are obtained
    /// with derive_stream(), which makes results independent of evaluation order.
    class CounterRng
    {
    public:
        explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

        std::uint64_t key() const noexcept { return key_; }
        std::uint64_t position() const noexcept { return counter_; }

        std::uint64_t next_u64() noexcept;

        /// Uniform on [0, 1) with 53 random bits.
        double uniform() noexcept;

        /// Standard normal via Box-Muller; the second variate is cached.
        double gaussian() noexcept;

        /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
        std::complex<double> complex_gaussian(double variance) noexcept;

        /// +1 or -1 with equal probability.
        double sign() noexcept;

    private:
        std::uint64_t key_;
        std::uint64_t counter_ = 0;
        double cached_ = 0.0;
        bool has_cached_ = false;
    };

    std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

    /// FNV-1a 64-bit hash of a tag string.
    std::uint64_t hash_tag(std::string_view tag) noexcept;

    /// Stream key for (master_seed, purpose_tag, index).
    std::uint64_t derive_stream(std::uint64_t master_seed, std::string_view purpose_tag, std::uint64_t index) noexcept;
}
