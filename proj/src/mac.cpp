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

#include "cpsc/mac.hpp"

#include <algorithm>
#include <cmath>

#include "cpsc/error.hpp"

namespace cpsc
{

double unique_probability(std::size_t m, std::size_t u)
{
    if (m == 0)
        throw InvalidArgument("unique_probability: need at least one codeword");
    if (u > m)
        return 0.0;
    double p = 1.0;
    for (std::size_t i = 0; i < u; ++i)
        p *= static_cast<double>(m - i) / static_cast<double>(m);
    return p;
}

double collision_probability(std::size_t m, std::size_t u)
{
    return 1.0 - unique_probability(m, u);
}

double unique_probability_asymptotic(std::size_t m, std::size_t u)
{
    if (m == 0)
        throw InvalidArgument("unique_probability_asymptotic: need at least one codeword");
    const double uu = static_cast<double>(u);
    return std::exp(-uu * (uu - 1.0) / (2.0 * static_cast<double>(m)));
}

EnergyThresholds calibrate_thresholds(std::span<const double> single_user_energies, double noise_power,
                                      double false_alarm, double factor)
{
    if (single_user_energies.empty())
        throw InvalidArgument("calibrate_thresholds: no calibration energies");
    if (!(false_alarm > 0.0 && false_alarm < 1.0))
        throw InvalidArgument("calibrate_thresholds: false-alarm rate must lie in (0, 1)");
    std::vector<double> sorted(single_user_energies.begin(), single_user_energies.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return {noise_power * std::log(1.0 / false_alarm), factor * median};
}

std::size_t ReservationReport::num_users() const
{
    std::size_t n = 0;
    for (const auto &[k, users] : claims)
        n += users.size();
    return n;
}

bool ReservationReport::has_collision() const
{
    return std::any_of(claims.begin(), claims.end(), [](const auto &kv) { return kv.second.size() > 1; });
}

std::size_t ReservationReport::colliding_users() const
{
    std::size_t n = 0;
    for (const auto &[k, users] : claims)
        if (users.size() > 1)
            n += users.size();
    return n;
}

ReservationReport detect_collisions(const ReservationInput &input, const Codebook &book, double noise_power,
                                    DetectionMode mode, CounterRng *rng, const EnergyThresholds &thresholds)
{
    const std::size_t m = book.size();
    ReservationReport report;
    report.mode = mode;
    for (std::size_t u = 0; u < input.claims.size(); ++u)
    {
        if (input.claims[u] >= m)
            throw InvalidArgument("detect_collisions: claimed codeword outside the codebook");
        report.claims[input.claims[u]].push_back(u);
    }

    std::vector<CodewordState> truth(m, CodewordState::empty);
    for (const auto &[k, users] : report.claims)
        truth[k] = users.size() == 1 ? CodewordState::single : CodewordState::collided;

    if (mode == DetectionMode::oracle)
    {
        report.detected = truth;
        return report;
    }

    if (input.channels.size() != input.claims.size() || input.powers.size() != input.claims.size())
        throw InvalidArgument("detect_collisions: energy mode needs a channel and power per user");
    if (noise_power > 0.0 && rng == nullptr)
        throw InvalidArgument("detect_collisions: energy mode with noise needs a random stream");

    std::optional<NormalSource> normal;
    if (rng)
        normal.emplace(*rng);
    report.energies.assign(m, 0.0);
    report.detected.assign(m, CodewordState::empty);
    const double noise_std = std::sqrt(noise_power);
    for (std::size_t k = 0; k < m; ++k)
    {
        std::complex<double> r = 0.0;
        if (auto it = report.claims.find(k); it != report.claims.end())
            for (std::size_t u : it->second)
                r += std::sqrt(input.powers[u]) * book.word(k).dot(input.channels[u]);
        if (noise_power > 0.0)
            r += noise_std * normal->next_complex();
        const double e = std::norm(r);
        report.energies[k] = e;
        if (e >= thresholds.single_collided)
            report.detected[k] = CodewordState::collided;
        else if (e >= thresholds.empty_single)
            report.detected[k] = CodewordState::single;
        if (report.detected[k] != truth[k])
            ++report.classification_errors;
    }
    return report;
}

std::string to_string(PolicyKind kind)
{
    switch (kind)
    {
    case PolicyKind::deferral:
        return "deferral";
    case PolicyKind::ue_reselect:
        return "ue-reselect";
    case PolicyKind::bs_reassign:
        return "bs-reassign";
    }
    return "?";
}

PolicyKind parse_policy(const std::string &name)
{
    if (name == "deferral")
        return PolicyKind::deferral;
    if (name == "ue-reselect" || name == "ue_reselect")
        return PolicyKind::ue_reselect;
    if (name == "bs-reassign" || name == "bs_reassign")
        return PolicyKind::bs_reassign;
    throw InvalidArgument("unknown collision policy '" + name + "'");
}

std::string to_string(KeeperRule rule)
{
    return rule == KeeperRule::arbitrary ? "arbitrary" : "max-power";
}

KeeperRule parse_keeper_rule(const std::string &name)
{
    if (name == "arbitrary")
        return KeeperRule::arbitrary;
    if (name == "max-power" || name == "max_power")
        return KeeperRule::max_power;
    throw InvalidArgument("unknown keeper rule '" + name + "'");
}

std::string to_string(UserStatus status)
{
    switch (status)
    {
    case UserStatus::clear:
        return "clear";
    case UserStatus::deferred:
        return "deferred";
    case UserStatus::reselected:
        return "reselected";
    case UserStatus::reassigned:
        return "reassigned";
    case UserStatus::failed:
        return "failed";
    }
    return "?";
}

bool ResolutionOutcome::transmits(std::size_t user) const
{
    return codeword[user].has_value();
}

ResolutionOutcome resolve(const ReservationReport &report, std::size_t num_codewords, const CollisionPolicy &policy,
                          const LocalAgents &agents, CounterRng &rng)
{
    if (report.detected.size() != num_codewords)
        throw InvalidArgument("resolve: report does not cover the codebook");
    const std::size_t users = report.num_users();
    ResolutionOutcome out;
    out.status.assign(users, UserStatus::clear);
    out.codeword.assign(users, std::nullopt);

    auto drop = [&](std::size_t u, UserStatus why) {
        out.status[u] = why;
        out.codeword[u].reset();
    };

    std::vector<bool> occupied(num_codewords, false);
    std::vector<std::size_t> pending;

    for (const auto &[k, members] : report.claims)
    {
        for (std::size_t u : members)
        {
            if (u >= users)
                throw InvalidArgument("resolve: claim lists are not a partition of the users");
            out.codeword[u] = k;
        }
        const CodewordState seen = report.detected[k];
        if (seen == CodewordState::empty)
        {
            // Missed by the BS: nobody will decode this codeword.
            for (std::size_t u : members)
                drop(u, UserStatus::failed);
            continue;
        }
        occupied[k] = true;
        if (seen == CodewordState::single)
        {
            if (members.size() > 1)
                for (std::size_t u : members)
                    drop(u, UserStatus::failed);
            continue;
        }

        if (policy.kind == PolicyKind::deferral)
        {
            for (std::size_t u : members)
                drop(u, UserStatus::deferred);
            continue;
        }

        std::size_t keeper = members.front();
        if (policy.keeper == KeeperRule::arbitrary)
            keeper = members[uniform_index(rng, members.size())];
        else
        {
            if (!agents.power)
                throw InvalidArgument("resolve: max-power keeper rule needs a power callback");
            double best = -1.0;
            for (std::size_t u : members)
                if (double p = agents.power(u); p > best)
                {
                    best = p;
                    keeper = u;
                }
        }
        for (std::size_t u : members)
            if (u != keeper)
                pending.push_back(u);
    }

    std::vector<std::size_t> free_words;
    for (std::size_t k = 0; k < num_codewords; ++k)
        if (!occupied[k])
            free_words.push_back(k);

    if (policy.kind == PolicyKind::ue_reselect)
    {
        if (!agents.reselect)
            throw InvalidArgument("resolve: ue-reselect needs a reselection callback");
        std::map<std::size_t, std::vector<std::size_t>> second_round;
        for (std::size_t u : pending)
        {
            if (free_words.empty())
            {
                drop(u, UserStatus::failed);
                continue;
            }
            std::size_t pick = agents.reselect(u, free_words);
            if (!std::binary_search(free_words.begin(), free_words.end(), pick))
                throw InvalidState("resolve: reselection returned an occupied codeword");
            second_round[pick].push_back(u);
        }
        for (const auto &[k, members] : second_round)
        {
            if (members.size() == 1)
            {
                out.status[members.front()] = UserStatus::reselected;
                out.codeword[members.front()] = k;
            }
            else
                for (std::size_t u : members)
                    drop(u, UserStatus::failed);
        }
    }
    else if (policy.kind == PolicyKind::bs_reassign)
    {
        shuffle(pending, rng);
        shuffle(free_words, rng);
        for (std::size_t i = 0; i < pending.size(); ++i)
        {
            if (i < free_words.size())
            {
                out.status[pending[i]] = UserStatus::reassigned;
                out.codeword[pending[i]] = free_words[i];
            }
            else
                drop(pending[i], UserStatus::failed);
        }
    }
    return out;
}

} // namespace cpsc
