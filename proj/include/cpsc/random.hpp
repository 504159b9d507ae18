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

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace cpsc
{

// Philox4x32-10 counter-based generator.
//
// The 64-bit key holds the master seed; the 128-bit counter is split into
// a 32-bit block counter, a 32-bit substream id and a 64-bit stream id
// (the Monte-Carlo trial index). Any (seed, trial, substream) triple maps to
// its own sequence, so results never depend on which worker ran a trial.
class Philox4x32
{
  public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block apply(Block counter, Key key);
};

class CounterRng
{
  public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint32_t substream() const { return substream_; }

  private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint32_t substream_;
    std::uint32_t block_ = 0;
    Philox4x32::Block buffer_{};
    int used_ = 4;
};

// Distributions are written out here instead of taken from <random> because
// the standard ones are implementation-defined, and output files must be
// byte-identical across toolchains for a given seed.

// Uniform double in (0, 1), never exactly 0 or 1.
double uniform_open(CounterRng &rng);

// Uniform double in [lo, hi).
double uniform_real(CounterRng &rng, double lo, double hi);

// Uniform integer in [0, n). n must be > 0.
std::size_t uniform_index(CounterRng &rng, std::size_t n);

// Standard normal deviate (Box-Muller; caches the second value).
class NormalSource
{
  public:
    explicit NormalSource(CounterRng &rng) : rng_(rng) {}

    double next();

    // Circularly-symmetric complex Gaussian with E|z|^2 = 1.
    std::complex<double> next_complex();

  private:
    CounterRng &rng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

template <typename T>
void shuffle(std::vector<T> &items, CounterRng &rng)
{
    for (std::size_t i = items.size(); i > 1; --i)
    {
        std::size_t j = uniform_index(rng, i);
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace cpsc
