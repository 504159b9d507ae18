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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cpsc/codebook.hpp"
#include "cpsc/mac.hpp"

namespace cpsc
{

// z_k = q_k^H y.
std::complex<double> decode_projection(const Eigen::VectorXcd &y, const Codebook &book, std::size_t k);

// SINR_u = P_u |q_{k(u)}^H h_u|^2 / (sum_{v != u} P_v |q_{k(u)}^H h_v|^2 + sigma^2)
// for users holding pairwise-distinct codewords. Duplicate indices throw
// InvalidState.
std::vector<double> compute_sinr(std::span<const Eigen::VectorXcd> effective, std::span<const std::size_t> codewords,
                                 std::span<const double> powers, double noise_power, const Codebook &book);

struct SlotOutcome
{
    std::vector<double> sinr;
    std::vector<double> rate;
    std::vector<UserStatus> status;
    double sum_rate = 0.0;
    // Users that took part in a reservation collision. slot_rates can only
    // count non-clear statuses; the simulator overwrites this with the
    // ground truth (keepers included).
    std::size_t collision_count = 0;
    bool had_collision = false;
};

// rate = log2(1 + sinr), forced to 0 for deferred and failed users.
SlotOutcome slot_rates(std::span<const double> sinrs, std::span<const UserStatus> statuses);

} // namespace cpsc
