// SPDX-License-Identifier: Apache-2.0
//
// cpsc-fama: link-level simulator for codebook-based fluid antenna uplink access
// Copyright (C) 2026 The cpsc-fama Authors
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

#include "cpsc/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "cpsc/error.hpp"
#include "cpsc/mac.hpp"

namespace cpsc
{

namespace
{

const char *const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_text(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string &s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::vector<double> nice_ticks(double lo, double hi)
{
    const double span = hi - lo;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double f : {1.0, 2.0, 5.0, 10.0})
        if (f * mag >= raw)
        {
            step = f * mag;
            break;
        }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step)
        ticks.push_back(t);
    return ticks;
}

struct Range
{
    double lo = 0.0;
    double hi = 0.0;

    void pad()
    {
        if (hi - lo < 1e-12)
        {
            const double d = std::max(std::abs(lo) * 0.1, 0.5);
            lo -= d;
            hi += d;
        }
    }
};

} // namespace

std::string render_line_chart(const ChartSpec &spec, const std::vector<Series> &series)
{
    Range xr{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    Range yr = xr;
    std::size_t points = 0;
    for (const Series &s : series)
    {
        if (s.x.size() != s.y.size())
            throw InvalidArgument("series '" + s.label + "': x and y lengths differ");
        const bool band = !s.lower.empty();
        if (band && (s.lower.size() != s.x.size() || s.upper.size() != s.x.size()))
            throw InvalidArgument("series '" + s.label + "': band length differs from x");
        for (std::size_t i = 0; i < s.x.size(); ++i)
        {
            xr.lo = std::min(xr.lo, s.x[i]);
            xr.hi = std::max(xr.hi, s.x[i]);
            yr.lo = std::min(yr.lo, band ? s.lower[i] : s.y[i]);
            yr.hi = std::max(yr.hi, band ? s.upper[i] : s.y[i]);
            ++points;
        }
    }
    if (points == 0)
        throw InvalidArgument("nothing to plot");
    xr.pad();
    yr.pad();
    const auto xticks = nice_ticks(xr.lo, xr.hi);
    auto yticks = nice_ticks(yr.lo, yr.hi);
    yr.lo = std::min(yr.lo, yticks.front());
    yr.hi = std::max(yr.hi, yticks.back());

    const double left = 70, right = 170, top = 40, bottom = 60;
    const double pw = spec.width - left - right;
    const double ph = spec.height - top - bottom;
    auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        o << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
          << escape(spec.title) << "</text>\n";

    for (double t : yticks)
    {
        if (t < yr.lo - 1e-12 || t > yr.hi + 1e-12)
            continue;
        o << "<line x1=\"" << num(left) << "\" x2=\"" << num(left + pw) << "\" y1=\"" << num(py(t)) << "\" y2=\""
          << num(py(t)) << "\" stroke=\"#e0e0e0\"/>\n";
        o << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">"
          << tick_text(t) << "</text>\n";
    }
    for (double t : xticks)
    {
        o << "<line x1=\"" << num(px(t)) << "\" x2=\"" << num(px(t)) << "\" y1=\"" << num(top) << "\" y2=\""
          << num(top + ph) << "\" stroke=\"#f0f0f0\"/>\n";
        o << "<text x=\"" << num(px(t)) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
          << tick_text(t) << "</text>\n";
    }
    o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(spec.height - 15.0)
      << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
    o << "<text transform=\"translate(18," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(spec.y_label) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si)
    {
        const Series &s = series[si];
        const char *colour = kPalette[si % std::size(kPalette)];
        if (s.x.empty())
            continue;
        if (!s.lower.empty())
        {
            o << "<polygon fill=\"" << colour << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                o << num(px(s.x[i])) << ',' << num(py(s.upper[i])) << ' ';
            for (std::size_t i = s.x.size(); i-- > 0;)
                o << num(px(s.x[i])) << ',' << num(py(s.lower[i])) << ' ';
            o << "\"/>\n";
        }
        o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\"";
        if (s.dashed)
            o << " stroke-dasharray=\"6,4\"";
        o << " points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            o << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
        o << "\"/>\n";
        if (s.markers)
            for (std::size_t i = 0; i < s.x.size(); ++i)
                o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"3\" fill=\""
                  << colour << "\"/>\n";
        const double ly = top + 14 + 20.0 * static_cast<double>(si);
        o << "<line x1=\"" << num(left + pw + 12) << "\" x2=\"" << num(left + pw + 36) << "\" y1=\"" << num(ly)
          << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\""
          << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
        o << "<text x=\"" << num(left + pw + 42) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

PlotMetric parse_plot_metric(const std::string &name)
{
    if (name == "rate")
        return PlotMetric::rate_per_user;
    if (name == "sum-rate")
        return PlotMetric::sum_rate;
    if (name == "collision")
        return PlotMetric::collision_rate;
    throw InvalidArgument("unknown plot metric '" + name + "' (rate, sum-rate, collision)");
}

std::string axis_label(const std::string &p)
{
    if (p == "n")
        return "Number of ports N";
    if (p == "u")
        return "Number of users U";
    if (p == "m")
        return "BS antennas M";
    if (p == "t")
        return "Retained singular vectors t";
    if (p == "snr_db")
        return "SNR (dB)";
    if (p == "k")
        return "Active ports K";
    return "Configuration";
}

std::string render_sweep_chart(const std::vector<std::pair<std::string, SweepResult>> &inputs,
                               const PlotRequest &request)
{
    std::string param;
    std::vector<Series> series;
    for (const auto &[label, result] : inputs)
    {
        if (result.points.empty())
            throw SchemaError("'" + label + "' has no data rows");
        for (const PointResult &p : result.points)
        {
            if (param.empty())
                param = p.param;
            else if (p.param != param)
                throw SchemaError("inputs sweep different parameters ('" + param + "' and '" + p.param + "')");
        }
        Series s;
        s.label = label;
        for (const PointResult &p : result.points)
        {
            s.x.push_back(p.value);
            switch (request.metric)
            {
            case PlotMetric::rate_per_user:
                s.y.push_back(p.mean_rate_per_user);
                s.lower.push_back(p.mean_rate_per_user - p.ci95);
                s.upper.push_back(p.mean_rate_per_user + p.ci95);
                break;
            case PlotMetric::sum_rate:
                s.y.push_back(p.mean_sum_rate);
                s.lower.push_back(p.mean_sum_rate - p.sum_ci95);
                s.upper.push_back(p.mean_sum_rate + p.sum_ci95);
                break;
            case PlotMetric::collision_rate:
            {
                // Binomial 95% half-width.
                const double r = p.collision_rate;
                const double h = 1.96 * std::sqrt(r * (1.0 - r) / static_cast<double>(std::max<std::size_t>(p.trials, 1)));
                s.y.push_back(r);
                s.lower.push_back(r - h);
                s.upper.push_back(r + h);
                break;
            }
            }
        }
        series.push_back(std::move(s));
    }

    if (request.analytic_overlay)
    {
        if (request.metric != PlotMetric::collision_rate)
            throw InvalidArgument("the analytic overlay applies to collision charts only");
        Series a;
        a.label = "analytic";
        a.dashed = true;
        a.markers = false;
        double lo = series.front().x.front(), hi = lo;
        for (const Series &s : series)
            for (double x : s.x)
            {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        for (double x = std::ceil(lo); x <= hi; x += std::max(1.0, std::floor((hi - lo) / 400.0)))
        {
            const auto v = static_cast<std::size_t>(x);
            double p = 0.0;
            if (param == "m")
            {
                if (!request.users)
                    throw InvalidArgument("analytic overlay over m needs the user count");
                p = collision_probability(v, *request.users);
            }
            else if (param == "u")
            {
                if (!request.codewords)
                    throw InvalidArgument("analytic overlay over u needs the codebook size");
                p = collision_probability(*request.codewords, v);
            }
            else
                throw InvalidArgument("analytic overlay needs a sweep over m or u");
            a.x.push_back(x);
            a.y.push_back(p);
        }
        series.push_back(std::move(a));
    }

    ChartSpec spec;
    spec.title = request.title;
    spec.x_label = axis_label(param);
    switch (request.metric)
    {
    case PlotMetric::rate_per_user:
        spec.y_label = "Average rate per user (bit/s/Hz)";
        break;
    case PlotMetric::sum_rate:
        spec.y_label = "Average sum rate (bit/s/Hz)";
        break;
    case PlotMetric::collision_rate:
        spec.y_label = "Collision probability";
        break;
    }
    return render_line_chart(spec, series);
}

void plot_sweep_files(const std::vector<std::string> &csv_paths, const std::string &svg_path,
                      const PlotRequest &request)
{
    if (csv_paths.empty())
        throw InvalidArgument("no CSV inputs");
    std::vector<std::pair<std::string, SweepResult>> inputs;
    for (const std::string &path : csv_paths)
        inputs.emplace_back(std::filesystem::path(path).stem().string(), read_sweep_csv(path));
    const std::string svg = render_sweep_chart(inputs, request);
    std::ofstream out(svg_path, std::ios::binary);
    if (!out)
        throw InvalidArgument("cannot write '" + svg_path + "'");
    out << svg;
}

} // namespace cpsc
