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
#include <vector>

#include <Eigen/Dense>

namespace cpsc
{

// Sorted, distinct 0-based port indices, at most `capacity` of them.
class PortSet
{
  public:
    PortSet() = default;
    PortSet(std::vector<std::size_t> indices, std::size_t capacity, std::size_t num_ports);

    const std::vector<std::size_t> &indices() const { return indices_; }
    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }

    friend bool operator==(const PortSet &, const PortSet &) = default;

  private:
    std::vector<std::size_t> indices_;
    std::size_t capacity_ = 0;
};

// Real, unit-norm per-port weights, ordered like PortSet::indices().
struct CombiningVector
{
    Eigen::VectorXd weights;
};

enum class CombinerStatus
{
    ok,
    // Re{H_S^H H_S} was ill-conditioned and solved with a ridge term.
    regularized,
    // Gram matrix unusable even after regularization; uniform weights.
    degraded,
    // a = Re{H_S^H q} vanished, so every weight vector scores 0; uniform weights.
    zero_alignment,
};

// Which figure of merit `AlignmentResult::alignment` carries.
enum class AlignmentMetric
{
    // Re{q^H H_S b} / ||H_S b||, the objective maximized with real combining.
    real_part,
    // |q^H H_S b| / ||H_S b||; used when weights are fixed to be uniform and
    // the common phase cannot be steered.
    magnitude,
};

struct AlignmentResult
{
    PortSet ports;
    CombiningVector weights;
    double alignment = 0.0;
    AlignmentMetric metric = AlignmentMetric::real_part;
    CombinerStatus status = CombinerStatus::ok;
    // OMP: residual norm after each iteration. Greedy: accepted scores.
    std::vector<double> trace;
};

struct CombinerSolution
{
    CombiningVector weights;
    CombinerStatus status = CombinerStatus::ok;
};

// Real Gram data of a port subset: g = Re{H_S^H H_S}, a = Re{H_S^H q}.
struct RealGram
{
    Eigen::MatrixXd g;
    Eigen::VectorXd a;
};

RealGram real_gram(const Eigen::MatrixXcd &h_s, const Eigen::VectorXcd &q);

Eigen::MatrixXcd gather_columns(const Eigen::MatrixXcd &h, const std::vector<std::size_t> &ports);

Eigen::VectorXcd effective_channel(const Eigen::MatrixXcd &h, const PortSet &ports, const CombiningVector &b);

double real_alignment(const Eigen::VectorXcd &q, const Eigen::VectorXcd &effective);
double magnitude_alignment(const Eigen::VectorXcd &q, const Eigen::VectorXcd &effective);

// Recomputes the alignment of (ports, weights) under `metric`.
double evaluate_alignment(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &q, const PortSet &ports,
                          const CombiningVector &b, AlignmentMetric metric);

// Closed-form maximizer of Re{q^H H_S b}/||H_S b|| over real unit b:
// b = G^{-1} a / ||G^{-1} a||.
CombinerSolution optimal_combiner(const Eigen::MatrixXcd &h_s, const Eigen::VectorXcd &q);

// Real-coefficient least-squares fit of q on the columns of h_s:
// x = Re{H^H H}^{-1} Re{H^H q}; the projection is h_s * x.
Eigen::VectorXd real_projection_coefficients(const Eigen::MatrixXcd &h_s, const Eigen::VectorXcd &q);

// Orthogonal matching pursuit under the real inner product; exactly k
// iterations, final weights from optimal_combiner.
AlignmentResult omp_port_select(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &q, std::size_t k);

// Greedy selection with fixed uniform weights. Stops early once no candidate
// strictly improves the score |sum g|^2 / sum r.
AlignmentResult greedy_no_combining(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &q, std::size_t k);

enum class WeightsMode
{
    lemma1,
    uniform,
};

inline constexpr double kDefaultSubsetBudget = 2e6;

// Global optimum over all k-subsets. Throws BudgetExceeded when C(N, k)
// exceeds `budget`. Ties resolve to the lexicographically first subset.
AlignmentResult exhaustive_port_select(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &q, std::size_t k,
                                       WeightsMode mode, double budget = kDefaultSubsetBudget);

// C(n, k) as a double (exact below 2^53).
double binomial(std::size_t n, std::size_t k);

// Benchmark for N >= M: M pivoted independent ports with complex weights
// solving H_S b = alpha q. Not part of the real-weight pipeline.
struct FullRankAlignment
{
    PortSet ports;
    Eigen::VectorXcd weights;
    // |q^H H_S b| / ||H_S b||.
    double alignment = 0.0;
};

FullRankAlignment full_rank_alignment(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &q);

} // namespace cpsc
