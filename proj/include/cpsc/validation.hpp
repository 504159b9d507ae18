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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cpsc/config.hpp"
#include "cpsc/port_optimizer.hpp"
#include "cpsc/sim.hpp"

namespace cpsc
{

struct SuiteResult
{
    std::string name;
    bool passed = false;
    std::string detail;
};

using CombinerFn = std::function<CombinerSolution(const Eigen::MatrixXcd &, const Eigen::VectorXcd &)>;

struct ValidationOptions
{
    std::uint64_t seed = 20260101;
    // The combiner under test; swapped out by mutation tests.
    CombinerFn combiner = optimal_combiner;
};

// lemma1, omp, fft, covariance, collision, greedy.
const std::vector<std::string> &suite_names();

// Throws InvalidArgument for an unknown suite name.
SuiteResult run_suite(const std::string &name, const ValidationOptions &options = {});

// Runs `names` in order, or every suite when empty.
std::vector<SuiteResult> run_validation(const std::vector<std::string> &names, const ValidationOptions &options = {});

// Checks the collision_rate column of a uniform-random-codeword sweep against
// 1 - P_unique(M, U) within 3 binomial standard errors; M and U come from
// `base` with each row's sweep value substituted.
SuiteResult check_collision_csv(const SweepResult &result, const ExperimentConfig &base);

} // namespace cpsc
