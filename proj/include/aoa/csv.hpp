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
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace aoa
{
    using CsvCell = std::variant<std::int64_t, double, std::string>;

    /// Comma-separated table with '#' metadata lines above a single header row.
    struct CsvTable
    {
        std::vector<std::pair<std::string, std::string>> metadata;
        std::vector<std::string> columns;
        std::vector<std::vector<CsvCell>> rows;

        void add_meta(std::string key, std::string value);
        void add_meta(std::string key, double value);
        void add_row(std::vector<CsvCell> row);

        /// Column position by name; throws std::out_of_range if absent.
        std::size_t column(std::string_view name) const;
    };

    /// Doubles at 17 significant digits (round-trip exact), integers verbatim, strings quoted when needed.
    std::string format_cell(const CsvCell &cell);
    std::string format_double(double value);

    void write_csv(const CsvTable &table, std::ostream &out);

    /// Throws std::runtime_error if the file cannot be written.
    void write_csv(const CsvTable &table, const std::filesystem::path &path);

    /// Parsed file: metadata, header and raw cell text.
    struct CsvText
    {
        std::vector<std::pair<std::string, std::string>> metadata;
        std::vector<std::string> columns;
        std::vector<std::vector<std::string>> rows;
    };

    CsvText read_csv(std::istream &in);
}
