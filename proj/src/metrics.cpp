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

#include "cpsc/metrics.hpp"

#include <cmath>
#include <set>

#include "cpsc/error.hpp"

namespace cpsc
{

std::complex<double> decode_projection(const Eigen::VectorXcd &y, const Codebook &book, std::size_t k)
{
    if (k >= book.size())
        throw InvalidArgument("decode_projection: codeword index out of range");
    if (static_cast<std::size_t>(y.size()) != book.size())
        throw InvalidArgument("decode_projection: observation length differs from M");
    return book.word(k).dot(y);
}

std::vector<double> compute_sinr(std::span<const Eigen::VectorXcd> effective, std::span<const std::size_t> codewords,
                                 std::span<const double> powers, double noise_power, const Codebook &book)
{
    const std::size_t u = effective.size();
    if (codewords.size() != u || powers.size() != u)
        throw InvalidArgument("compute_sinr: inconsistent user counts");
    if (!(noise_power > 0.0))
        throw InvalidArgument("compute_sinr: noise power must be positive");
    std::set<std::size_t> seen;
    for (std::size_t k : codewords)
    {
        if (k >= book.size())
            throw InvalidArgument("compute_sinr: codeword index out of range");
        if (!seen.insert(k).second)
            throw InvalidState("compute_sinr: two users share a codeword; resolve collisions first");
    }
    for (double p : powers)
        if (!(p > 0.0))
            throw InvalidArgument("compute_sinr: powers must be positive");

    // gains(a, b) = |q_{k(a)}^H h_b|^2
    Eigen::MatrixXd gains(u, u);
    for (std::size_t a = 0; a < u; ++a)
        for (std::size_t b = 0; b < u; ++b)
            gains(a, b) = std::norm(book.word(codewords[a]).dot(effective[b]));

    std::vector<double> sinr(u);
    for (std::size_t a = 0; a < u; ++a)
    {
        double interference = 0.0;
        for (std::size_t b = 0; b < u; ++b)
            if (b != a)
                interference += powers[b] * gains(a, b);
        sinr[a] = powers[a] * gains(a, a) / (interference + noise_power);
    }
    return sinr;
}

SlotOutcome slot_rates(std::span<const double> sinrs, std::span<const UserStatus> statuses)
{
    if (sinrs.size() != statuses.size())
        throw InvalidArgument("slot_rates: inconsistent lengths");
    SlotOutcome out;
    out.sinr.assign(sinrs.begin(), sinrs.end());
    out.status.assign(statuses.begin(), statuses.end());
    out.rate.assign(sinrs.size(), 0.0);
    for (std::size_t i = 0; i < sinrs.size(); ++i)
    {
        const UserStatus s = statuses[i];
        if (s != UserStatus::clear)
            ++out.collision_count;
        if (s == UserStatus::deferred || s == UserStatus::failed)
        {
            out.sinr[i] = 0.0;
            continue;
        }
        if (sinrs[i] < 0.0)
            throw InvalidArgument("slot_rates: negative SINR");
        out.rate[i] = std::log2(1.0 + sinrs[i]);
        out.sum_rate += out.rate[i];
    }
    out.had_collision = out.collision_count > 0;
    return out;
}

} // namespace cpsc
