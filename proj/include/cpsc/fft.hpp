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

namespace cpsc
{

// Forward DFT X[k] = sum_i x[i] exp(-j 2 pi i k / n) for any length n.
// Powers of two use iterative radix-2; other lengths go through Bluestein's
// chirp-z reduction onto a power-of-two transform. A plan is immutable and
// can be executed from several threads at once.
class FftPlan
{
  public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const { return n_; }

    void forward(std::span<std::complex<double>> data) const;

  private:
    void radix2(std::span<std::complex<double>> data, const std::vector<std::complex<double>> &twiddle,
                bool inverse) const;

    std::size_t n_;
    bool pow2_;
    std::size_t padded_ = 0;
    std::vector<std::complex<double>> twiddle_;
    std::vector<std::complex<double>> chirp_;
    std::vector<std::complex<double>> chirp_spectrum_;
};

} // namespace cpsc
