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


#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpsc/sim.hpp"

namespace cpsc
{

struct Series
{
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    // Optional band (same length as x), drawn as a shaded region.
    std::vector<double> lower;
    std::vector<double> upper;
    bool dashed = false;
    bool markers = true;
};

struct ChartSpec
{
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 720;
    int height = 480;
};

// Static SVG line chart. Throws InvalidArgument when there is nothing to
// draw.
std::string render_line_chart(const ChartSpec &spec, const std::vector<Series> &series);

enum class PlotMetric
{
    rate_per_user,
    sum_rate,
    collision_rate,
};

PlotMetric parse_plot_metric(const std::string &name);

struct PlotRequest
{
    PlotMetric metric = PlotMetric::rate_per_user;
    std::string title;
    // Adds the analytic curve 1 - P_unique(M, U) to a collision chart. For a
    // sweep over m the user count is taken from `users`; over u the
    // codebook size from `codewords`.
    bool analytic_overlay = false;
    std::optional<std::size_t> users;
    std::optional<std::size_t> codewords;
};

std::string axis_label(const std::string &sweep_param);

// One series per labelled sweep result; all must share the sweep parameter.
std::string render_sweep_chart(const std::vector<std::pair<std::string, SweepResult>> &inputs,
                               const PlotRequest &request);

// Reads the CSVs (SchemaError on mismatch), renders, and only then writes
// `svg_path`; nothing is written on error.
void plot_sweep_files(const std::vector<std::string> &csv_paths, const std::string &svg_path,
                      const PlotRequest &request);

} // namespace cpsc
