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

// Shared fixtures and independent reference implementations for the unit
// tests. Nothing here calls into the library's numerical kernels.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "cpsc/random.hpp"

namespace testing
{

inline Eigen::MatrixXcd random_complex(cpsc::CounterRng &rng, Eigen::Index rows, Eigen::Index cols)
{
    cpsc::NormalSource normal(rng);
    Eigen::MatrixXcd h(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            h(i, j) = normal.next_complex();
    return h;
}

inline Eigen::MatrixXd random_real(cpsc::CounterRng &rng, Eigen::Index rows, Eigen::Index cols)
{
    cpsc::NormalSource normal(rng);
    Eigen::MatrixXd h(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            h(i, j) = normal.next();
    return h;
}

inline Eigen::VectorXcd random_unit(cpsc::CounterRng &rng, Eigen::Index m)
{
    Eigen::VectorXcd v = random_complex(rng, m, 1).col(0);
    return v / v.norm();
}

// Power series of J0; accurate for |x| <~ 6.
inline double bessel_j0_series(double x)
{
    double term = 1.0, sum = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 60; ++k)
    {
        term *= -q / (double(k) * double(k));
        sum += term;
    }
    return sum;
}

// J0(x) = (1/pi) * integral_0^pi cos(x sin th) dth, trapezoid rule (spectrally
// accurate for this periodic integrand).
inline double bessel_j0_integral(double x)
{
    constexpr int n = 4000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double th = (i + 0.5) * std::numbers::pi / n;
        sum += std::cos(x * std::sin(th));
    }
    return sum / n;
}

// Naive DFT entry for codeword m, element i: exp(-j 2 pi i m / M) / sqrt(M).
inline std::complex<double> dft_entry(std::size_t i, std::size_t m, std::size_t size)
{
    const double angle = -2.0 * std::numbers::pi * double((i * m) % size) / double(size);
    return std::polar(1.0 / std::sqrt(double(size)), angle);
}

// Closed-form combiner objective a^T b / sqrt(b^T G b) evaluated from raw H_S, q.
inline double real_objective(const Eigen::MatrixXcd &h_s, const Eigen::VectorXcd &q, const Eigen::VectorXd &b)
{
    const Eigen::VectorXcd e = h_s * b.cast<std::complex<double>>();
    const double n = e.norm();
    return n > 0 ? q.dot(e).real() / n : 0.0;
}

} // namespace testing
