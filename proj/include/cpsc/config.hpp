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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpsc/channel.hpp"
#include "cpsc/mac.hpp"

namespace cpsc
{

enum class Scheme
{
    cpsc,
    cpsc_no_combining,
    fixed_antenna,
    cpsc_exhaustive,
    bs_random_codeword,
};

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string &name);

struct SweepSpec
{
    // One of n, u, m, t, snr_db, k. "n" resizes the port grid.
    std::string param;
    std::vector<double> values;
};

struct ExperimentConfig
{
    std::size_t m = 32;
    PortGrid grid{10, 10, 4.0, 4.0};
    std::size_t u = 8;
    std::size_t k = 8;
    // Retained singular vectors; 0 means t = k.
    std::size_t t = 0;
    double snr_db = 10.0;
    double rice_factor = 0.1;
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    Scheme scheme = Scheme::cpsc;
    CollisionPolicy collision_policy;
    std::optional<SweepSpec> sweep;

    // Throws ConfigError on hard violations.
    void validate() const;
    // Soft violations (e.g. m < u) that are allowed but worth reporting.
    std::vector<std::string> warnings() const;

    std::size_t effective_t() const { return t == 0 ? k : t; }
};

bool is_sweep_param(const std::string &name);

// Near-square grid holding exactly n ports: n1 is the largest divisor of n
// not above sqrt(n). Surface extent is kept.
PortGrid grid_for_ports(std::size_t n, double w1, double w2);

// Copy of `base` with the sweep parameter set to `value` (sweep cleared).
ExperimentConfig at_sweep_point(const ExperimentConfig &base, const std::string &param, double value);

ExperimentConfig config_from_json_text(const std::string &text);
ExperimentConfig load_config(const std::string &path);
std::string config_to_json_text(const ExperimentConfig &config);

// Applies one KEY=VALUE override. KEY is a declared field, optionally dotted
// for nested ones (grid.n1, collision_policy.keeper, sweep.values, ...).
// VALUE is read as JSON when it parses, else as a plain string.
void apply_override(ExperimentConfig &config, const std::string &assignment);

} // namespace cpsc
