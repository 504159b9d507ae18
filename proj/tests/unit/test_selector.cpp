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

#include <catch_amalgamated.hpp>

#include "cpsc/channel.hpp"
#include "cpsc/codebook.hpp"
#include "cpsc/error.hpp"
#include "cpsc/selector.hpp"
#include "helpers.hpp"

using namespace cpsc;

namespace
{
double orthonormality_error(const SubspaceBasis &b)
{
    const auto t = b.vectors.cols();
    return (b.vectors.adjoint() * b.vectors - Eigen::MatrixXcd::Identity(t, t)).cwiseAbs().maxCoeff();
}
} // namespace

TEST_CASE("rank-one channel gives its column direction", "[selector]")
{
    CounterRng rng(30, 0, 0);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(8, 5);
    const Eigen::VectorXcd c = testing::random_complex(rng, 8, 1).col(0);
    h.col(2) = c;
    for (BasisMode mode : {BasisMode::randomized, BasisMode::exact})
    {
        const SubspaceBasis b = truncated_basis(h, 1, rng, mode);
        REQUIRE(b.rank() == 1);
        CHECK(std::abs(std::abs(b.vectors.col(0).dot(c / c.norm())) - 1.0) < 1e-12);
    }
}

TEST_CASE("bases are orthonormal and t is range-checked", "[selector]")
{
    CounterRng rng(31, 0, 0);
    const Eigen::MatrixXcd h = testing::random_complex(rng, 16, 40);
    for (std::size_t t : {1u, 4u, 16u})
        for (BasisMode mode : {BasisMode::randomized, BasisMode::exact})
            CHECK(orthonormality_error(truncated_basis(h, t, rng, mode)) < 1e-10);
    CHECK_THROWS_AS(truncated_basis(h, 0, rng), InvalidArgument);
    CHECK_THROWS_AS(truncated_basis(h, 17, rng), InvalidArgument);
    CHECK_THROWS_AS(truncated_basis(testing::random_complex(rng, 16, 3), 4, rng), InvalidArgument);
}

TEST_CASE("isotropic spectrum: average captured energy is t/M", "[selector]")
{
    CounterRng rng(32, 0, 0);
    const std::size_t m = 8, t = 3;
    const SubspaceBasis b = truncated_basis(Eigen::MatrixXcd::Identity(8, 8), t, rng, BasisMode::exact);
    constexpr int draws = 20000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i)
        sum += (b.vectors.adjoint() * testing::random_unit(rng, 8)).squaredNorm();
    // Captured energy of a uniform unit vector is Beta(t, M - t): variance
    // t (M-t) / (M^2 (M+1)).
    const double sd = std::sqrt(double(t * (m - t)) / double(m * m * (m + 1)) / draws);
    CHECK(std::abs(sum / draws - double(t) / m) < 4 * sd);
}

TEST_CASE("randomized range finder captures 99% of the exact energy", "[selector]")
{
    // Spatially correlated 10x10 grid, no LoS term.
    ChannelModel model;
    model.num_bs_antennas = 32;
    model.grid = PortGrid(10, 10, 4, 4);
    model.rice_factor = 0.0;
    const ChannelGenerator gen(model);
    CounterRng rng(33, 0, 0);
    for (int trial = 0; trial < 20; ++trial)
    {
        const Eigen::MatrixXcd h = gen.sample_nlos(rng);
        const SubspaceBasis fast = truncated_basis(h, 4, rng, BasisMode::randomized);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeThinU);
        const double exact = svd.singularValues().head(4).squaredNorm();
        REQUIRE((fast.vectors.adjoint() * h).squaredNorm() >= 0.99 * exact);
    }
}

TEST_CASE("select_codeword examples", "[selector]")
{
    const Codebook book = make_dft_codebook(8);
    SubspaceBasis b{book.matrix().col(5)};
    CodewordChoice c = select_codeword(b, book);
    CHECK(c.index == 5);
    CHECK(std::abs(c.score - 1.0) < 1e-12);

    const Codebook small = make_dft_codebook(4);
    SubspaceBasis mix{(small.matrix().col(3) + 2.0 * small.matrix().col(1)) / std::sqrt(5.0)};
    const std::vector<std::size_t> first_two{0, 1};
    c = select_codeword(mix, small, first_two);
    CHECK(c.index == 1);
    CHECK(std::abs(c.score - 0.8) < 1e-12);
    const std::vector<std::size_t> zero_and_two{0, 2};
    c = select_codeword(mix, small, zero_and_two);
    CHECK(c.index == 0);
    CHECK(std::abs(c.score) < 1e-12);

    CHECK_THROWS_AS(select_codeword(mix, small, std::vector<std::size_t>{}), InvalidArgument);
    CHECK_THROWS_AS(select_codeword(mix, small, std::vector<std::size_t>{7}), InvalidArgument);
}

TEST_CASE("complete basis scores every codeword 1 and picks index 0", "[selector]")
{
    CounterRng rng(34, 0, 0);
    const Codebook book = make_dft_codebook(6);
    const SubspaceBasis b = truncated_basis(testing::random_complex(rng, 6, 9), 6, rng, BasisMode::exact);
    const Eigen::VectorXd e = codeword_energies(b, book);
    CHECK((e.array() - 1.0).abs().maxCoeff() < 1e-10);
    CHECK(select_codeword(b, book).index == 0);
}

TEST_CASE("full projector oracle", "[selector]")
{
    CounterRng rng(35, 0, 0);
    const Codebook book = make_dft_codebook(8);
    Eigen::MatrixXcd h(8, 2);
    h.col(0) = testing::random_complex(rng, 8, 1).col(0);
    h.col(1) = 0.7 * book.matrix().col(6) + 0.2 * h.col(0);
    ProjectorChoice p = select_codeword_full_projector(h, book);
    CHECK(p.choice.index == 6);
    CHECK(std::abs(p.choice.score - 1.0) < 1e-10);
    CHECK(p.rank == 2);

    const Eigen::MatrixXcd wide = testing::random_complex(rng, 8, 12);
    p = select_codeword_full_projector(wide, book);
    CHECK(p.choice.index == 0);
    CHECK(std::abs(p.choice.score - 1.0) < 1e-10);

    std::size_t rank = 0;
    bool reg = false;
    const Eigen::MatrixXcd proj = column_space_projector(testing::random_complex(rng, 8, 3), &rank, &reg);
    CHECK(rank == 3);
    CHECK((proj * proj - proj).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((proj - proj.adjoint()).cwiseAbs().maxCoeff() < 1e-9);

    Eigen::MatrixXcd dup(8, 3);
    dup.col(0) = h.col(0);
    dup.col(1) = h.col(0);
    dup.col(2) = h.col(1);
    column_space_projector(dup, &rank, &reg);
    CHECK(rank == 2);
}

TEST_CASE("truncated selection agrees with the projector oracle at full rank", "[selector]")
{
    CounterRng rng(36, 0, 0);
    const Codebook book = make_dft_codebook(8);
    int agree = 0;
    for (int i = 0; i < 1000; ++i)
    {
        const Eigen::MatrixXcd h = testing::random_complex(rng, 8, 3);
        const std::size_t a = select_codeword_full_projector(h, book).choice.index;
        const std::size_t b = select_codeword(truncated_basis(h, 3, rng), book).index;
        agree += a == b;
    }
    CHECK(agree >= 950);
}

TEST_CASE("selector invariants", "[selector]")
{
    CounterRng rng(37, 0, 0);
    const Codebook book = make_dft_codebook(16);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Eigen::MatrixXcd h = testing::random_complex(rng, 16, 24);
        double last = -1.0;
        for (std::size_t t = 1; t <= 8; ++t)
        {
            CounterRng unused(0, 0, 0);
            const double best = select_codeword(truncated_basis(h, t, unused, BasisMode::exact), book).score;
            REQUIRE(best >= last - 1e-12);
            last = best;
        }

        // Scale invariance (same random stream for both runs).
        CounterRng r1(38, std::uint64_t(trial), 0), r2(38, std::uint64_t(trial), 0);
        CHECK(select_codeword(truncated_basis(h, 4, r1), book).index ==
              select_codeword(truncated_basis(3.5 * h, 4, r2), book).index);
        CHECK(select_codeword_full_projector(h.leftCols(5), book).choice.index ==
              select_codeword_full_projector(0.01 * h.leftCols(5), book).choice.index);

        // Restriction consistency.
        CounterRng r3(39, std::uint64_t(trial), 0);
        const SubspaceBasis b = truncated_basis(h, 4, r3);
        const CodewordChoice global = select_codeword(b, book);
        std::vector<std::size_t> allowed{global.index};
        for (std::size_t k = 0; k < 16; k += 3)
            if (k != global.index)
                allowed.push_back(k);
        CHECK(select_codeword(b, book, allowed).index == global.index);
        const double score = select_codeword(b, book, allowed).score;
        CHECK(score >= 0.0);
        CHECK(score <= 1.0 + 1e-12);
    }
}
