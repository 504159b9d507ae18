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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cpsc/codebook.hpp"
#include "cpsc/random.hpp"

namespace cpsc
{

// Probability that u uniform picks among m codewords are pairwise distinct:
// m (m-1) ... (m-u+1) / m^u. Zero when u > m.
double unique_probability(std::size_t m, std::size_t u);

// 1 - unique_probability(m, u).
double collision_probability(std::size_t m, std::size_t u);

// exp(-u (u-1) / (2m)), the large-m approximation of unique_probability.
double unique_probability_asymptotic(std::size_t m, std::size_t u);

enum class DetectionMode
{
    oracle,
    energy,
};

enum class CodewordState
{
    empty,
    single,
    collided,
};

struct EnergyThresholds
{
    // Below: nobody transmitted on the codeword.
    double empty_single = 0.0;
    // At or above: more than one claimant.
    double single_collided = 0.0;
};

// tau1 = sigma^2 ln(1/p_fa); tau2 = factor * median(single_user_energies).
EnergyThresholds calibrate_thresholds(std::span<const double> single_user_energies, double noise_power,
                                      double false_alarm = 1e-3, double factor = 2.5);

struct ReservationReport
{
    // Ground-truth claims: codeword index -> users that announced it.
    std::map<std::size_t, std::vector<std::size_t>> claims;
    DetectionMode mode = DetectionMode::oracle;
    // State of every codeword as seen by the BS.
    std::vector<CodewordState> detected;
    // Reservation energies E_k = |r_k|^2 (energy mode only).
    std::vector<double> energies;
    // Codewords whose detected state differs from the truth.
    std::size_t classification_errors = 0;

    std::size_t num_users() const;
    bool has_collision() const;
    // Users that share their claimed codeword with somebody else.
    std::size_t colliding_users() const;
};

struct ReservationInput
{
    // Claimed codeword index per user.
    std::vector<std::size_t> claims;
    // Effective channel per user (only used in energy mode).
    std::vector<Eigen::VectorXcd> channels;
    // Transmit power per user (energy mode).
    std::vector<double> powers;
};

// Groups users by claimed codeword. In energy mode the BS correlates each
// codeword's reservation observation (same-index claimants superposed plus
// noise, unit pilot symbols) and classifies E_k against the thresholds.
ReservationReport detect_collisions(const ReservationInput &input, const Codebook &book, double noise_power,
                                    DetectionMode mode, CounterRng *rng = nullptr,
                                    const EnergyThresholds &thresholds = {});

enum class PolicyKind
{
    deferral,
    ue_reselect,
    bs_reassign,
};

enum class KeeperRule
{
    arbitrary,
    max_power,
};

struct CollisionPolicy
{
    PolicyKind kind = PolicyKind::deferral;
    KeeperRule keeper = KeeperRule::arbitrary;
};

std::string to_string(PolicyKind kind);
PolicyKind parse_policy(const std::string &name);
std::string to_string(KeeperRule rule);
KeeperRule parse_keeper_rule(const std::string &name);

enum class UserStatus
{
    clear,
    deferred,
    reselected,
    reassigned,
    failed,
};

std::string to_string(UserStatus status);

struct ResolutionOutcome
{
    std::vector<UserStatus> status;
    std::vector<std::optional<std::size_t>> codeword;

    bool transmits(std::size_t user) const;
};

// Hooks into the UEs' local optimizers.
struct LocalAgents
{
    // Best codeword for `user` restricted to `allowed` (non-empty).
    std::function<std::size_t(std::size_t user, std::span<const std::size_t> allowed)> reselect;
    // Effective channel power, consulted by KeeperRule::max_power.
    std::function<double(std::size_t user)> power;
};

// Applies `policy` to the detected collisions in `report`. Port and combiner
// re-optimization for users whose codeword changed is left to the caller.
ResolutionOutcome resolve(const ReservationReport &report, std::size_t num_codewords, const CollisionPolicy &policy,
                          const LocalAgents &agents, CounterRng &rng);

} // namespace cpsc
