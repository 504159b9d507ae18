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
#include <iosfwd>
#include <memory>

#include <Eigen/Dense>

#include "cpsc/fft.hpp"

namespace cpsc
{

enum class CodebookKind
{
    dft,
    custom_unitary,
};

// M unit-norm orthogonal codewords q_0..q_{M-1}, stored as the columns of an
// M x M unitary matrix. Shared read-only by the UEs and the BS.
class Codebook
{
  public:
    // Wraps an arbitrary unitary matrix. Throws InvalidArgument when
    // max|Q^H Q - I| exceeds `tolerance`.
    static Codebook custom(Eigen::MatrixXcd columns, double tolerance = 1e-10);

    std::size_t size() const { return static_cast<std::size_t>(columns_.cols()); }
    CodebookKind kind() const { return kind_; }
    const Eigen::MatrixXcd &matrix() const { return columns_; }
    auto word(std::size_t k) const { return columns_.col(static_cast<Eigen::Index>(k)); }

    // Largest entry of |Q^H Q - I|.
    double unitarity_error() const;

  private:
    friend Codebook make_dft_codebook(std::size_t m);
    Codebook(Eigen::MatrixXcd columns, CodebookKind kind, std::shared_ptr<const FftPlan> plan);

    Eigen::MatrixXcd columns_;
    CodebookKind kind_;
    std::shared_ptr<const FftPlan> plan_;

    friend Eigen::MatrixXcd project_all(const Eigen::MatrixXcd &vectors, const Codebook &book);
};

// Column m has entries exp(-j 2 pi i m / M) / sqrt(M), i = 0..M-1.
Codebook make_dft_codebook(std::size_t m);

// Scores of every codeword against every column of `vectors` (M x t):
// result(r, m) = q_m^H v_r, shape t x M. DFT codebooks use one M-point FFT
// per column; other kinds fall back to the direct product.
Eigen::MatrixXcd project_all(const Eigen::MatrixXcd &vectors, const Codebook &book);

// Reference path: (Q^H V)^T by explicit inner products.
Eigen::MatrixXcd project_all_direct(const Eigen::MatrixXcd &vectors, const Codebook &book);

// CSV with header m,i,re,im: codeword index m and entry index i, 1-based.
void write_codebook_csv(std::ostream &out, const Codebook &book);
Codebook read_codebook_csv(std::istream &in);

} // namespace cpsc
