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
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cpsc/channel.hpp"
#include "cpsc/codebook.hpp"
#include "cpsc/config.hpp"
#include "cpsc/metrics.hpp"
#include "cpsc/port_optimizer.hpp"
#include "cpsc/selector.hpp"

namespace cpsc
{

// Substream ids: (purpose << 24) | user.
enum class StreamPurpose : std::uint32_t
{
    geometry = 1,
    channel = 2,
    basis = 3,
    random_codeword = 4,
    resolution = 5,
    reselection = 6,
};

CounterRng trial_stream(std::uint64_t seed, std::uint64_t trial, StreamPurpose purpose, std::size_t user = 0);

// Per-user state after the local optimization of one trial.
struct UserState
{
    UserGeometry geometry;
    ChannelMatrix channel;
    SubspaceBasis basis;
    std::size_t codeword = 0;
    AlignmentResult ports;
    Eigen::VectorXcd effective;
};

struct TrialDetail
{
    std::vector<UserState> users;
    ReservationReport report;
    ResolutionOutcome resolution;
    SlotOutcome outcome;
};

// Immutable per-configuration context (codebook, channel generator). Safe to
// share across worker threads.
class Experiment
{
  public:
    explicit Experiment(ExperimentConfig config);

    const ExperimentConfig &config() const { return config_; }
    const Codebook &codebook() const { return book_; }
    const ChannelGenerator &generator() const { return generator_; }
    double noise_power() const { return noise_power_; }

    // Deterministic in (config, seed, trial).
    SlotOutcome run_trial(std::uint64_t trial) const;
    TrialDetail run_trial_detail(std::uint64_t trial) const;

    // Port/combiner optimization of `channel` for codeword `k` under the
    // configured scheme.
    AlignmentResult optimize_ports(const Eigen::MatrixXcd &channel, std::size_t k) const;

  private:
    ExperimentConfig config_;
    Codebook book_;
    ChannelGenerator generator_;
    double noise_power_;
};

struct PointResult
{
    std::string param = "none";
    double value = 0.0;
    double mean_rate_per_user = 0.0;
    double ci95 = 0.0;
    double mean_sum_rate = 0.0;
    double sum_ci95 = 0.0;
    double collision_rate = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;

    // Standard error of the mean per-user rate (ci95 / 1.96).
    double rate_se() const;
};

struct SweepResult
{
    std::vector<PointResult> points;
};

struct RunOptions
{
    // 0: CPSC_THREADS if set, else hardware concurrency.
    std::size_t workers = 0;
    // Called after every completed sweep point.
    std::function<void(const PointResult &)> on_point;
};

std::size_t resolve_worker_count(std::size_t requested);

// Runs config.trials trials of one configuration (sweep ignored).
PointResult run_point(const ExperimentConfig &config, const RunOptions &options = {});

// One row per sweep value; a config without a sweep yields a single row
// labelled ("none", 0).
SweepResult run_sweep(const ExperimentConfig &config, const RunOptions &options = {});

// Neumaier-compensated running sum.
class CompensatedSum
{
  public:
    void add(double x);
    double value() const { return sum_ + compensation_; }

  private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

inline const char *kSweepCsvHeader =
    "sweep_param,value,mean_rate_per_user,ci95,mean_sum_rate,sum_ci95,collision_rate,trials,seed";

void write_sweep_csv(std::ostream &out, const SweepResult &result);
void write_sweep_csv(const std::string &path, const SweepResult &result);
// Throws SchemaError on a header or row that does not match.
SweepResult read_sweep_csv(std::istream &in);
SweepResult read_sweep_csv(const std::string &path);

// One-sided z statistic of mean(a) > mean(b) from the stored standard errors.
double z_greater(const PointResult &a, const PointResult &b);

} // namespace cpsc
