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

#include "aoa/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace aoa
{
    void CsvTable::add_meta(std::string key, std::string value)
    {
        metadata.emplace_back(std::move(key), std::move(value));
    }

    void CsvTable::add_meta(std::string key, double value)
    {
        metadata.emplace_back(std::move(key), format_double(value));
    }

    void CsvTable::add_row(std::vector<CsvCell> row)
    {
        if (row.size() != columns.size())
            throw std::invalid_argument("CsvTable: row has " + std::to_string(row.size()) + " cells, schema has " +
                                        std::to_string(columns.size()));
        rows.push_back(std::move(row));
    }

    std::size_t CsvTable::column(std::string_view name) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name)
                return i;
        throw std::out_of_range("CsvTable: no column '" + std::string(name) + "'");
    }

    std::string format_double(double value)
    {
        if (std::isnan(value))
            return "nan";
        if (std::isinf(value))
            return value > 0 ? "inf" : "-inf";
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        return buf;
    }

    namespace
    {
        std::string quote_if_needed(const std::string &s)
        {
            if (s.find_first_of(",\"\n\r") == std::string::npos)
                return s;
            std::string q = "\"";
            for (char c : s)
            {
                if (c == '"')
                    q += '"';
                q += c;
            }
            q += '"';
            return q;
        }

        std::vector<std::string> split_record(const std::string &line)
        {
            std::vector<std::string> cells;
            std::string cur;
            bool quoted = false;
            for (std::size_t i = 0; i < line.size(); ++i)
            {
                const char c = line[i];
                if (quoted)
                {
                    if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
                    {
                        cur += '"';
                        ++i;
                    }
                    else if (c == '"')
                        quoted = false;
                    else
                        cur += c;
                }
                else if (c == '"')
                    quoted = true;
                else if (c == ',')
                {
                    cells.push_back(std::move(cur));
                    cur.clear();
                }
                else
                    cur += c;
            }
            cells.push_back(std::move(cur));
            return cells;
        }
    }

    std::string format_cell(const CsvCell &cell)
    {
        if (const auto *i = std::get_if<std::int64_t>(&cell))
            return std::to_string(*i);
        if (const auto *d = std::get_if<double>(&cell))
            return format_double(*d);
        return quote_if_needed(std::get<std::string>(cell));
    }

    void write_csv(const CsvTable &table, std::ostream &out)
    {
        for (const auto &[key, value] : table.metadata)
            out << "# " << key << '=' << value << '\n';
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            out << (i ? "," : "") << quote_if_needed(table.columns[i]);
        out << '\n';
        for (const auto &row : table.rows)
        {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << format_cell(row[i]);
            out << '\n';
        }
    }

    void write_csv(const CsvTable &table, const std::filesystem::path &path)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        write_csv(table, out);
        out.flush();
        if (!out)
            throw std::runtime_error("write to '" + path.string() + "' failed");
    }

    CsvText read_csv(std::istream &in)
    {
        CsvText text;
        std::string line;
        bool have_header = false;
        while (std::getline(in, line))
        {
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (!have_header && !line.empty() && line[0] == '#')
            {
                std::string body = line.substr(1);
                if (!body.empty() && body[0] == ' ')
                    body.erase(0, 1);
                const auto eq = body.find('=');
                if (eq == std::string::npos)
                    text.metadata.emplace_back(body, "");
                else
                    text.metadata.emplace_back(body.substr(0, eq), body.substr(eq + 1));
                continue;
            }
            if (!have_header)
            {
                text.columns = split_record(line);
                have_header = true;
                continue;
            }
            if (line.empty())
                continue;
            text.rows.push_back(split_record(line));
        }
        if (!have_header)
            throw std::runtime_error("read_csv: missing header row");
        return text;
    }
}
