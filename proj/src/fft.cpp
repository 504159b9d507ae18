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

#include "cpsc/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "cpsc/error.hpp"

namespace cpsc
{

namespace
{
// exp(-j 2 pi num / den) with the argument reduced exactly before the trig
// call, so large index products do not lose precision.
std::complex<double> unit_root(std::size_t num, std::size_t den)
{
    num %= den;
    double angle = -2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
    return {std::cos(angle), std::sin(angle)};
}

std::vector<std::complex<double>> make_twiddles(std::size_t n)
{
    std::vector<std::complex<double>> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        w[k] = unit_root(k, n);
    return w;
}
} // namespace

FftPlan::FftPlan(std::size_t n) : n_(n), pow2_(n != 0 && std::has_single_bit(n))
{
    if (n == 0)
        throw InvalidArgument("FftPlan: length must be >= 1");
    if (pow2_)
    {
        twiddle_ = make_twiddles(n);
        return;
    }
    padded_ = std::bit_ceil(2 * n - 1);
    twiddle_ = make_twiddles(padded_);
    // chirp[i] = exp(-j pi i^2 / n); i^2 is reduced modulo 2n.
    chirp_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        chirp_[i] = unit_root((i * i) % (2 * n), 2 * n);
    chirp_spectrum_.assign(padded_, {0.0, 0.0});
    chirp_spectrum_[0] = std::conj(chirp_[0]);
    for (std::size_t i = 1; i < n; ++i)
    {
        chirp_spectrum_[i] = std::conj(chirp_[i]);
        chirp_spectrum_[padded_ - i] = std::conj(chirp_[i]);
    }
    radix2(chirp_spectrum_, twiddle_, false);
}

void FftPlan::radix2(std::span<std::complex<double>> x, const std::vector<std::complex<double>> &twiddle,
                     bool inverse) const
{
    const std::size_t n = x.size();
    for (std::size_t i = 1, j = 0; i < n; ++i)
    {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1)
    {
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len)
            for (std::size_t k = 0; k < len / 2; ++k)
            {
                std::complex<double> w = twiddle[k * stride];
                if (inverse)
                    w = std::conj(w);
                std::complex<double> a = x[start + k];
                std::complex<double> b = x[start + k + len / 2] * w;
                x[start + k] = a + b;
                x[start + k + len / 2] = a - b;
            }
    }
}

void FftPlan::forward(std::span<std::complex<double>> data) const
{
    if (data.size() != n_)
        throw InvalidArgument("FftPlan::forward: length mismatch");
    if (n_ == 1)
        return;
    if (pow2_)
    {
        radix2(data, twiddle_, false);
        return;
    }
    std::vector<std::complex<double>> work(padded_, {0.0, 0.0});
    for (std::size_t i = 0; i < n_; ++i)
        work[i] = data[i] * chirp_[i];
    radix2(work, twiddle_, false);
    for (std::size_t i = 0; i < padded_; ++i)
        work[i] *= chirp_spectrum_[i];
    radix2(work, twiddle_, true);
    const double scale = 1.0 / static_cast<double>(padded_);
    for (std::size_t k = 0; k < n_; ++k)
        data[k] = work[k] * scale * chirp_[k];
}

} // namespace cpsc
