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

#include <sstream>

#include "cpsc/codebook.hpp"
#include "cpsc/error.hpp"
#include "cpsc/fft.hpp"
#include "helpers.hpp"

using namespace cpsc;

TEST_CASE("FFT matches a naive DFT for assorted lengths", "[fft]")
{
    CounterRng rng(20, 0, 0);
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 12u, 17u, 64u, 100u, 128u})
    {
        const Eigen::VectorXcd x = testing::random_complex(rng, Eigen::Index(n), 1).col(0);
        std::vector<std::complex<double>> data(x.data(), x.data() + n);
        FftPlan(n).forward(data);
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k)
        {
            std::complex<double> ref = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                ref += x(Eigen::Index(i)) * std::sqrt(double(n)) * testing::dft_entry(i, k, n);
            worst = std::max(worst, std::abs(ref - data[k]));
        }
        INFO("n = " << n);
        CHECK(worst < 1e-10 * std::max(1.0, double(n)));
    }
    CHECK_THROWS_AS(FftPlan(0), InvalidArgument);
}

TEST_CASE("small DFT codebooks", "[codebook]")
{
    const Codebook one = make_dft_codebook(1);
    CHECK(one.size() == 1);
    CHECK(std::abs(one.matrix()(0, 0) - 1.0) < 1e-15);

    const Codebook two = make_dft_codebook(2);
    const double r = 1 / std::sqrt(2.0);
    CHECK(std::abs(two.matrix()(0, 0) - r) < 1e-15);
    CHECK(std::abs(two.matrix()(1, 0) - r) < 1e-15);
    CHECK(std::abs(two.matrix()(0, 1) - r) < 1e-15);
    CHECK(std::abs(two.matrix()(1, 1) + r) < 1e-15);
    CHECK(two.kind() == CodebookKind::dft);
    CHECK_THROWS_AS(make_dft_codebook(0), InvalidArgument);
}

TEST_CASE("DFT codebook entries and unitarity", "[codebook]")
{
    for (std::size_t m : {3u, 16u, 64u, 100u, 1024u})
    {
        const Codebook book = make_dft_codebook(m);
        const Eigen::MatrixXcd &q = book.matrix();
        const Eigen::MatrixXcd g = q.adjoint() * q;
        INFO("m = " << m);
        CHECK((g - Eigen::MatrixXcd::Identity(Eigen::Index(m), Eigen::Index(m))).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(book.unitarity_error() < 1e-12);
        if (m <= 100)
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t k = 0; k < m; ++k)
                    REQUIRE(std::abs(q(Eigen::Index(i), Eigen::Index(k)) - testing::dft_entry(i, k, m)) < 1e-13);
    }
}

TEST_CASE("projection scores", "[codebook]")
{
    const Codebook book = make_dft_codebook(16);
    const Eigen::MatrixXcd s = project_all(book.matrix().col(3), book);
    REQUIRE(s.rows() == 1);
    REQUIRE(s.cols() == 16);
    for (Eigen::Index m = 0; m < 16; ++m)
        CHECK(std::abs(s(0, m) - (m == 3 ? 1.0 : 0.0)) < 1e-12);
    CHECK(project_all(Eigen::MatrixXcd::Zero(16, 2), book).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(project_all(Eigen::MatrixXcd::Zero(8, 1), book), InvalidArgument);
    CHECK_THROWS_AS(project_all_direct(Eigen::MatrixXcd::Zero(8, 1), book), InvalidArgument);
}

TEST_CASE("fast scores equal direct inner products", "[codebook]")
{
    CounterRng rng(21, 0, 0);
    for (std::size_t m : {16u, 12u, 48u, 64u})
    {
        const Codebook book = make_dft_codebook(m);
        for (int trial = 0; trial < 50; ++trial)
        {
            const Eigen::MatrixXcd v = testing::random_complex(rng, Eigen::Index(m), 3);
            Eigen::MatrixXcd ref(3, Eigen::Index(m));
            for (Eigen::Index r = 0; r < 3; ++r)
                for (std::size_t k = 0; k < m; ++k)
                {
                    std::complex<double> z = 0;
                    for (std::size_t i = 0; i < m; ++i)
                        z += std::conj(testing::dft_entry(i, k, m)) * v(Eigen::Index(i), r);
                    ref(r, Eigen::Index(k)) = z;
                }
            REQUIRE((project_all(v, book) - ref).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("fast and direct argmax agree on 1000 inputs", "[codebook]")
{
    CounterRng rng(22, 0, 0);
    const Codebook book = make_dft_codebook(64);
    for (int i = 0; i < 1000; ++i)
    {
        const Eigen::MatrixXcd v = testing::random_complex(rng, 64, 1);
        Eigen::Index a = 0, b = 0;
        project_all(v, book).row(0).cwiseAbs().maxCoeff(&a);
        project_all_direct(v, book).row(0).cwiseAbs().maxCoeff(&b);
        REQUIRE(a == b);
    }
}

TEST_CASE("Parseval over the codebook", "[codebook]")
{
    CounterRng rng(23, 0, 0);
    for (std::size_t m : {7u, 32u, 100u})
    {
        const Codebook book = make_dft_codebook(m);
        const Eigen::MatrixXcd v = testing::random_complex(rng, Eigen::Index(m), 4);
        const Eigen::MatrixXcd s = project_all(v, book);
        for (Eigen::Index r = 0; r < 4; ++r)
            CHECK(std::abs(s.row(r).squaredNorm() - v.col(r).squaredNorm()) < 1e-9 * v.col(r).squaredNorm());
    }
}

TEST_CASE("custom codebooks", "[codebook]")
{
    CounterRng rng(24, 0, 0);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(testing::random_complex(rng, 6, 6));
    const Eigen::MatrixXcd u = qr.householderQ();
    const Codebook book = Codebook::custom(u);
    CHECK(book.kind() == CodebookKind::custom_unitary);
    const Eigen::MatrixXcd v = testing::random_complex(rng, 6, 2);
    CHECK((project_all(v, book) - (u.adjoint() * v).transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::MatrixXcd bad = u;
    bad(0, 0) += 1e-6;
    CHECK_THROWS_AS(Codebook::custom(bad), InvalidArgument);
    CHECK_THROWS_AS(Codebook::custom(Eigen::MatrixXcd::Identity(3, 2)), InvalidArgument);
}

TEST_CASE("codebook CSV round trip", "[codebook]")
{
    const Codebook book = make_dft_codebook(5);
    std::stringstream s;
    write_codebook_csv(s, book);
    const std::string text = s.str();
    CHECK(text.rfind("m,i,re,im\n", 0) == 0);
    const Codebook back = read_codebook_csv(s);
    CHECK(back.size() == 5);
    CHECK((back.matrix() - book.matrix()).cwiseAbs().maxCoeff() == 0.0);

    std::stringstream broken("m,i,re,im\n1,1,one,0\n");
    CHECK_THROWS(read_codebook_csv(broken));
    std::stringstream header("a,b,c,d\n");
    CHECK_THROWS(read_codebook_csv(header));
}
