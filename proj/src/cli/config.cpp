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

#include "aoa/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <sstream>
#include <thread>

namespace aoa::cli
{
    ConfigError::ConfigError(const std::string &source, int line, const std::string &what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line)
    {
    }

    bool is_experiment(std::string_view name) noexcept
    {
        return std::find(std::begin(experiments), std::end(experiments), name) != std::end(experiments);
    }

    namespace
    {
        std::string trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return std::string(s.substr(b, e - b + 1));
        }

        std::vector<std::string> split(const std::string &s, char sep)
        {
            std::vector<std::string> out;
            std::string item;
            std::istringstream in(s);
            while (std::getline(in, item, sep))
                out.push_back(trim(item));
            return out;
        }

        std::optional<double> to_real(const std::string &s)
        {
            double v = 0.0;
            const char *end = s.data() + s.size();
            auto [p, ec] = std::from_chars(s.data(), end, v);
            if (ec != std::errc() || p != end || !std::isfinite(v))
                return std::nullopt;
            return v;
        }

        std::optional<long long> to_int(const std::string &s)
        {
            long long v = 0;
            const char *end = s.data() + s.size();
            auto [p, ec] = std::from_chars(s.data(), end, v);
            if (ec != std::errc() || p != end)
                return std::nullopt;
            return v;
        }

        using Check = std::function<void(const std::string &key, const std::string &value)>;

        [[noreturn]] void reject(const std::string &key, const std::string &value, const std::string &why)
        {
            throw ValidationError("invalid value '" + value + "' for " + key + ": " + why);
        }

        Check real_in(double lo, double hi, bool lo_open, bool hi_open = false)
        {
            return [=](const std::string &key, const std::string &value)
            {
                const auto v = to_real(value);
                if (!v)
                    reject(key, value, "not a number");
                const bool below = lo_open ? !(*v > lo) : !(*v >= lo);
                const bool above = hi_open ? !(*v < hi) : !(*v <= hi);
                if (below || above)
                    reject(key, value, "out of range");
            };
        }

        Check positive() { return real_in(0.0, HUGE_VAL, true); }
        Check non_negative() { return real_in(0.0, HUGE_VAL, false); }

        Check int_list_min(long long lo, bool single = false)
        {
            return [=](const std::string &key, const std::string &value)
            {
                const auto parts = split(value, ',');
                if (parts.empty() || (single && parts.size() != 1))
                    reject(key, value, single ? "expected one integer" : "expected integers");
                for (const auto &part : parts)
                {
                    const auto v = to_int(part);
                    if (!v)
                        reject(key, value, "not an integer");
                    if (*v < lo || *v > 1000000000LL)
                        reject(key, value, "out of range");
                }
            };
        }

        const std::map<std::string, Check, std::less<>> &checks()
        {
            static const std::map<std::string, Check, std::less<>> table = {
                {"W", positive()},
                {"zeta", positive()},
                {"L_BS", positive()},
                {"P_BS", positive()},
                {"P_UT", positive()},
                {"P_fix", positive()},
                {"omega", real_in(0.0, 1.0, true)},
                {"p", positive()},
                {"sigma_n2", positive()},
                {"sigma_h2", non_negative()},
                {"h_d", non_negative()},
                {"d_over_lambda", positive()},
                {"snr", positive()},
                {"theta", real_in(0.0, std::numbers::pi, true, true)},
                {"exclusion", real_in(0.0, std::numbers::pi / 2, false, true)},
                {"trials", int_list_min(1, true)},
                {"Q", int_list_min(2, true)},
                {"N", int_list_min(1, true)},
                {"M", int_list_min(2)},
                {"K", int_list_min(1)},
                {"F", int_list_min(1)},
                {"subset_M", int_list_min(0, true)},
                {"gamma", [](const std::string &key, const std::string &value)
                 {
                     for (const auto &part : split(value, ','))
                         if (!to_real(part))
                             reject(key, value, "not a number");
                 }},
                {"law", [](const std::string &key, const std::string &value)
                 {
                     for (const auto &part : split(value, ','))
                     {
                         try
                         {
                             parse_channel_law(part);
                         }
                         catch (const std::invalid_argument &)
                         {
                             reject(key, value, "expected gaussian, uniform or rademacher");
                         }
                     }
                 }},
                {"search", [](const std::string &key, const std::string &value)
                 {
                     if (value != "global" && value != "local")
                         reject(key, value, "expected global or local");
                 }},
                {"points", [](const std::string &key, const std::string &value)
                 {
                     for (const auto &part : split(value, ','))
                     {
                         const auto colon = part.find(':');
                         if (colon == std::string::npos)
                             reject(key, value, "expected K:M pairs");
                         const auto k = to_int(trim(part.substr(0, colon)));
                         const auto m = to_int(trim(part.substr(colon + 1)));
                         if (!k || !m || *k < 1 || *m <= *k || *m > 100000)
                             reject(key, value, "need 1 <= K < M");
                     }
                 }},
                {"seed", [](const std::string &key, const std::string &value)
                 {
                     std::uint64_t v = 0;
                     auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
                     if (ec != std::errc() || p != value.data() + value.size())
                         reject(key, value, "expected an unsigned 64-bit integer");
                 }},
                {"threads", int_list_min(1, true)},
            };
            return table;
        }

        std::uint64_t parse_seed(const std::string &value)
        {
            validate_parameter("seed", value);
            std::uint64_t v = 0;
            std::from_chars(value.data(), value.data() + value.size(), v);
            return v;
        }
    }

    void validate_parameter(const std::string &key, const std::string &value)
    {
        const auto it = checks().find(key);
        if (it == checks().end())
            throw ValidationError("unknown key '" + key + "'");
        it->second(key, value);
    }

    std::vector<std::string> known_keys()
    {
        std::vector<std::string> out;
        for (const auto &[k, v] : checks())
            out.push_back(k);
        return out;
    }

    std::map<std::string, std::string> parse_config_text(std::istream &in, const std::string &source)
    {
        std::map<std::string, std::string> out;
        std::string line;
        int number = 0;
        while (std::getline(in, line))
        {
            ++number;
            const auto hash = line.find('#');
            const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
            if (body.empty())
                continue;
            const auto eq = body.find('=');
            if (eq == std::string::npos)
                throw ConfigError(source, number, "expected 'key = value'");
            const std::string key = trim(body.substr(0, eq));
            const std::string value = trim(body.substr(eq + 1));
            if (key.empty() || value.empty())
                throw ConfigError(source, number, "expected 'key = value'");
            try
            {
                validate_parameter(key, value);
            }
            catch (const ValidationError &e)
            {
                throw ValidationError(source + ":" + std::to_string(number) + ": " + e.what());
            }
            out[key] = value;
        }
        return out;
    }

    RunConfig resolve_config(const FlagValues &flags)
    {
        RunConfig cfg;
        cfg.experiment = flags.experiment;
        cfg.out = flags.out;
        cfg.plot = flags.plot;
        cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

        if (flags.env_seed && !flags.env_seed->empty())
        {
            try
            {
                cfg.seed = parse_seed(trim(*flags.env_seed));
            }
            catch (const ValidationError &e)
            {
                throw ValidationError(std::string("AOA_LAB_SEED: ") + e.what());
            }
        }

        if (flags.config_file)
        {
            std::ifstream file(*flags.config_file);
            if (!file)
                throw std::runtime_error("cannot read config file " + flags.config_file->string());
            for (auto &[k, v] : parse_config_text(file, flags.config_file->string()))
                cfg.params[k] = v;
        }

        for (const auto &item : flags.overrides)
        {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set", 0, "expected key=value, got '" + item + "'");
            const std::string key = trim(item.substr(0, eq));
            const std::string value = trim(item.substr(eq + 1));
            validate_parameter(key, value);
            cfg.params[key] = value;
        }

        if (auto it = cfg.params.find("seed"); it != cfg.params.end())
            cfg.seed = parse_seed(it->second);
        if (flags.seed)
            cfg.seed = *flags.seed;

        if (auto it = cfg.params.find("threads"); it != cfg.params.end())
            cfg.threads = static_cast<int>(*to_int(it->second));
        if (flags.threads)
        {
            if (*flags.threads < 1)
                throw ValidationError("invalid value for threads: must be at least 1");
            cfg.threads = *flags.threads;
        }
        // seed and threads are not experiment parameters
        cfg.params.erase("seed");
        cfg.params.erase("threads");
        return cfg;
    }

    double RunConfig::real(const std::string &key, double fallback) const
    {
        const auto it = params.find(key);
        return it == params.end() ? fallback : *to_real(it->second);
    }

    int RunConfig::integer(const std::string &key, int fallback) const
    {
        const auto it = params.find(key);
        if (it == params.end())
            return fallback;
        const auto list = int_list(key, {});
        if (list.size() != 1)
            throw ValidationError("expected a single integer for " + key);
        return list.front();
    }

    std::vector<int> RunConfig::int_list(const std::string &key, std::vector<int> fallback) const
    {
        const auto it = params.find(key);
        if (it == params.end())
            return fallback;
        std::vector<int> out;
        for (const auto &part : split(it->second, ','))
            out.push_back(static_cast<int>(*to_int(part)));
        return out;
    }

    std::vector<double> RunConfig::real_list(const std::string &key, std::vector<double> fallback) const
    {
        const auto it = params.find(key);
        if (it == params.end())
            return fallback;
        std::vector<double> out;
        for (const auto &part : split(it->second, ','))
            out.push_back(*to_real(part));
        return out;
    }

    std::string RunConfig::text(const std::string &key, std::string fallback) const
    {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }

    EnergyParams energy_params(const RunConfig &config)
    {
        EnergyParams e;
        e.bandwidth = config.real("W", e.bandwidth);
        e.pilot_duration = config.real("zeta", e.pilot_duration);
        e.compute_efficiency = config.real("L_BS", e.compute_efficiency);
        e.rf_power_bs = config.real("P_BS", e.rf_power_bs);
        e.rf_power_ut = config.real("P_UT", e.rf_power_ut);
        e.fixed_power = config.real("P_fix", e.fixed_power);
        e.amp_efficiency = config.real("omega", e.amp_efficiency);
        e.pilot_power = config.real("p", e.pilot_power);
        return e;
    }

    Physics physics_params(const RunConfig &config)
    {
        Physics p;
        p.d_over_lambda = config.real("d_over_lambda", p.d_over_lambda);
        p.noise_psd = config.real("sigma_n2", p.noise_psd);
        p.multipath_var = config.real("sigma_h2", p.multipath_var);
        p.dominant_gain = config.real("h_d", p.dominant_gain);
        return p;
    }
}
