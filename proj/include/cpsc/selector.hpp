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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cpsc/codebook.hpp"
#include "cpsc/random.hpp"

namespace cpsc
{

// Scores closer than this are treated as ties and resolved to the lowest
// codeword index.
inline constexpr double kScoreTieTolerance = 1e-10;

// Orthonormal M x t basis approximating the dominant left singular subspace
// of a channel matrix.
struct SubspaceBasis
{
    Eigen::MatrixXcd vectors;

    std::size_t rank() const { return static_cast<std::size_t>(vectors.cols()); }
};

struct CodewordChoice
{
    std::size_t index = 0;
    double score = 0.0;
};

enum class BasisMode
{
    randomized,
    exact,
};

struct RangeFinderOptions
{
    std::size_t oversampling = 8;
    std::size_t power_iterations = 2;
};

// Top-t left singular vectors of `h`. Randomized mode uses a Gaussian range
// finder followed by an SVD of the small projected matrix; exact mode runs a
// full SVD of h.
SubspaceBasis truncated_basis(const Eigen::MatrixXcd &h, std::size_t t, CounterRng &rng,
                              BasisMode mode = BasisMode::randomized, RangeFinderOptions options = {});

// Per-codeword captured energy ||U^H q_m||^2 for every m.
Eigen::VectorXd codeword_energies(const SubspaceBasis &basis, const Codebook &book);

// argmax of ||U^H q_m||^2 over all codewords, or over `allowed` (which must
// be non-empty).
CodewordChoice select_codeword(const SubspaceBasis &basis, const Codebook &book);
CodewordChoice select_codeword(const SubspaceBasis &basis, const Codebook &book,
                               std::span<const std::size_t> allowed);

struct ProjectorChoice
{
    CodewordChoice choice;
    // Number of linearly independent columns retained before forming the
    // projector.
    std::size_t rank = 0;
    // Set when the Gram matrix of the retained columns still needed ridge
    // regularization.
    bool regularized = false;
};

// Reference rule with the full projector P_H = H (H^H H)^{-1} H^H.
ProjectorChoice select_codeword_full_projector(const Eigen::MatrixXcd &h, const Codebook &book);
ProjectorChoice select_codeword_full_projector(const Eigen::MatrixXcd &h, const Codebook &book,
                                               std::span<const std::size_t> allowed);

// Full projector onto span(h) after rank-revealing column selection.
Eigen::MatrixXcd column_space_projector(const Eigen::MatrixXcd &h, std::size_t *rank = nullptr,
                                        bool *regularized = nullptr);

std::vector<std::size_t> all_indices(std::size_t count);

} // namespace cpsc
