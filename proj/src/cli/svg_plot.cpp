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

#include "aoa/cli/run.hpp"
#include "aoa/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace aoa::cli
{
    namespace
    {
        constexpr double width = 640, height = 420;
        constexpr double left = 70, right = 150, top = 40, bottom = 50;
        const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

        std::string escape(const std::string &s)
        {
            std::string out;
            for (char c : s)
            {
                switch (c)
                {
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                case '&': out += "&amp;"; break;
                case '"': out += "&quot;"; break;
                default: out += c;
                }
            }
            return out;
        }

        std::string num(double v)
        {
            std::ostringstream s;
            s.precision(4);
            s << v;
            return s.str();
        }
    }

    std::string render_svg(const PlotSpec &spec)
    {
        auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
        auto usable = [&](double x, double y) { return std::isfinite(x) && std::isfinite(y) && (!spec.log_y || y > 0); };

        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
        for (const auto &s : spec.series)
            for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
                if (usable(s.x[i], s.y[i]))
                {
                    x0 = std::min(x0, s.x[i]);
                    x1 = std::max(x1, s.x[i]);
                    y0 = std::min(y0, ty(s.y[i]));
                    y1 = std::max(y1, ty(s.y[i]));
                }
        if (!std::isfinite(x0))
            x0 = 0, x1 = 1, y0 = 0, y1 = 1;
        if (x1 == x0)
            x1 = x0 + 1;
        if (y1 == y0)
            y1 = y0 + 1;

        const double pw = width - left - right, ph = height - top - bottom;
        auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
        auto py = [&](double y) { return top + ph - (ty(y) - y0) / (y1 - y0) * ph; };

        std::ostringstream o;
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
          << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        o << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
          << "</text>\n";
        o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
          << "\" fill=\"none\" stroke=\"black\"/>\n";

        for (int i = 0; i <= 4; ++i)
        {
            const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
            const double sx = left + pw * i / 4.0, sy = top + ph - ph * i / 4.0;
            o << "<text x=\"" << sx << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << num(fx) << "</text>\n";
            o << "<text x=\"" << left - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
              << (spec.log_y ? "1e" + num(fy) : num(fy)) << "</text>\n";
        }
        o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
          << escape(spec.x_label) << "</text>\n";
        o << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
          << top + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

        for (std::size_t k = 0; k < spec.series.size(); ++k)
        {
            const auto &s = spec.series[k];
            const char *colour = palette[k % std::size(palette)];
            o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
                if (usable(s.x[i], s.y[i]))
                    o << px(s.x[i]) << "," << py(s.y[i]) << " ";
            o << "\"/>\n";
            const double ly = top + 14 + 18 * static_cast<double>(k);
            o << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << width - right + 30
              << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
            o << "<text x=\"" << width - right + 34 << "\" y=\"" << ly << "\">" << escape(s.name) << "</text>\n";
        }
        o << "</svg>\n";
        return o.str();
    }

    void write_svg(const PlotSpec &spec, const std::filesystem::path &path)
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + path.string());
        f << render_svg(spec);
        if (!f)
            throw std::runtime_error("write failed: " + path.string());
    }

    namespace
    {
        double as_double(const CsvCell &c)
        {
            if (auto i = std::get_if<std::int64_t>(&c))
                return static_cast<double>(*i);
            if (auto d = std::get_if<double>(&c))
                return *d;
            return std::nan("");
        }

        std::string as_text(const CsvCell &c)
        {
            if (auto s = std::get_if<std::string>(&c))
                return *s;
            return format_cell(c);
        }

        // Series keyed by the value of `group`, restricted to rows accepted by `keep`.
        template <class Keep>
        std::vector<PlotSeries> grouped(const CsvTable &t, const std::string &group, const std::string &xcol,
                                        const std::string &ycol, const std::string &prefix, Keep keep)
        {
            std::map<std::string, PlotSeries> by;
            std::vector<std::string> order;
            const auto g = t.column(group), x = t.column(xcol), y = t.column(ycol);
            for (const auto &row : t.rows)
            {
                if (!keep(row))
                    continue;
                const std::string name = prefix + as_text(row[g]);
                if (!by.count(name))
                    order.push_back(name);
                auto &s = by[name];
                s.name = name;
                s.x.push_back(as_double(row[x]));
                s.y.push_back(as_double(row[y]));
            }
            std::vector<PlotSeries> out;
            for (const auto &n : order)
                out.push_back(by[n]);
            return out;
        }
    }

    PlotSpec default_plot(const std::string &experiment, const CsvTable &t)
    {
        PlotSpec spec;
        spec.title = experiment;
        if (t.rows.empty())
            return spec;
        if (experiment == "crlb-convergence")
        {
            const auto law = t.column("law"), sel = t.column("selection"), K = t.column("K");
            const auto first_law = t.rows.front()[law];
            const auto first_k = t.rows.front()[K];
            auto keep = [&](const std::vector<CsvCell> &r)
            { return r[law] == first_law && r[K] == first_k && as_text(r[sel]) != "full"; };
            spec.series = grouped(t, "selection", "F", "det_trace", "det ", keep);
            for (auto &s : grouped(t, "selection", "F", "mc_mean_trace", "mc ", keep))
                spec.series.push_back(s);
            spec.x_label = "F";
            spec.y_label = "tr CRLB (rad^2)";
            spec.log_y = true;
        }
        else if (experiment == "ml-variance")
        {
            PlotSeries far{"furthest", {}, {}}, near{"first", {}, {}};
            const auto n = std::min<std::size_t>(t.rows.size(), 500);
            for (std::size_t i = 0; i < n; ++i)
            {
                far.x.push_back(static_cast<double>(i));
                far.y.push_back(as_double(t.rows[i][t.column("theta_hat_furthest")]));
                near.x.push_back(static_cast<double>(i));
                near.y.push_back(as_double(t.rows[i][t.column("theta_hat_first")]));
            }
            spec.series = {near, far};
            spec.x_label = "trial";
            spec.y_label = "estimate (rad)";
        }
        else if (experiment == "le-sweep")
        {
            auto all = [](const auto &) { return true; };
            for (const char *col : {"log_le_all", "log_le_first_opt", "log_le_furthest_opt"})
            {
                auto s = grouped(t, "seed", "K", col, "", all);
                PlotSeries merged{col, {}, {}};
                for (auto &part : s)
                {
                    merged.x.insert(merged.x.end(), part.x.begin(), part.x.end());
                    merged.y.insert(merged.y.end(), part.y.begin(), part.y.end());
                }
                spec.series.push_back(merged);
            }
            spec.x_label = "K";
            spec.y_label = "ln LE";
        }
        else if (experiment == "music-le")
        {
            auto all = [](const auto &) { return true; };
            spec.series = grouped(t, "seed", "F", "log_le_first", "first ", all);
            for (auto &s : grouped(t, "seed", "F", "log_le_furthest", "furthest ", all))
                spec.series.push_back(s);
            // label by operating point rather than seed
            for (auto &s : spec.series)
                s.name = s.name.substr(0, s.name.find(' ')) + " M=" + std::to_string(static_cast<int>(s.x.back()));
            spec.x_label = "F";
            spec.y_label = "ln LE";
        }
        else if (experiment == "lemma-diagnostics")
        {
            const auto q = t.column("quantity");
            auto keep = [&](const std::vector<CsvCell> &r) { return as_text(r[q]) != "trig_sum"; };
            spec.series = grouped(t, "quantity", "M", "median", "", keep);
            for (auto &s : spec.series)
                for (auto &x : s.x)
                    x = std::log2(x);
            spec.x_label = "log2 M";
            spec.y_label = "median";
            spec.log_y = true;
        }
        return spec;
    }
}
