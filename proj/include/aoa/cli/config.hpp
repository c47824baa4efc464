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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aoa/energy.hpp"
#include "aoa/montecarlo.hpp"

namespace aoa::cli
{
    /// Malformed configuration text. `line` is 1-based, 0 for flag overrides.
    class ConfigError : public std::runtime_error
    {
    public:
        ConfigError(const std::string &source, int line, const std::string &what);
        int line() const noexcept { return line_; }

    private:
        int line_;
    };

    /// Well-formed value outside its allowed range, or an unknown key.
    class ValidationError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    inline constexpr std::string_view experiments[] = {"crlb-convergence", "ml-variance",       "le-sweep",
                                                       "music-le",         "lemma-diagnostics", "subset-oracle"};

    bool is_experiment(std::string_view name) noexcept;

    struct RunConfig
    {
        std::string experiment;
        std::map<std::string, std::string> params; // validated key = value pairs
        std::optional<std::filesystem::path> out;  // stdout when empty
        std::uint64_t seed = 1;
        int threads = 1;
        bool plot = false;

        double real(const std::string &key, double fallback) const;
        int integer(const std::string &key, int fallback) const;
        std::vector<int> int_list(const std::string &key, std::vector<int> fallback) const;
        std::vector<double> real_list(const std::string &key, std::vector<double> fallback) const;
        std::string text(const std::string &key, std::string fallback) const;
    };

    /// Reads `key = value` lines. '#' starts a comment; blank lines are skipped.
    /// Throws ConfigError on malformed lines and ValidationError on unknown keys or bad values.
    std::map<std::string, std::string> parse_config_text(std::istream &in, const std::string &source = "<config>");

    /// Throws ValidationError naming the key if it is unknown or the value is out of range.
    void validate_parameter(const std::string &key, const std::string &value);

    /// Names of all accepted keys.
    std::vector<std::string> known_keys();

    struct FlagValues
    {
        std::string experiment;
        std::optional<std::filesystem::path> config_file;
        std::optional<std::filesystem::path> out;
        std::optional<std::uint64_t> seed;
        std::optional<int> threads;
        bool plot = false;
        std::vector<std::string> overrides; // "key=value"
        std::optional<std::string> env_seed;  // AOA_LAB_SEED
    };

    /// Merges sources in increasing priority: defaults, AOA_LAB_SEED, config file, flags.
    /// Throws std::runtime_error if the config file cannot be read.
    RunConfig resolve_config(const FlagValues &flags);

    /// Energy parameters after applying overrides to the defaults.
    EnergyParams energy_params(const RunConfig &config);
    Physics physics_params(const RunConfig &config);
}
