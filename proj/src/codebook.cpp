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

#include "cpsc/codebook.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cpsc/error.hpp"

namespace cpsc
{

Codebook::Codebook(Eigen::MatrixXcd columns, CodebookKind kind, std::shared_ptr<const FftPlan> plan)
    : columns_(std::move(columns)), kind_(kind), plan_(std::move(plan))
{
}

Codebook Codebook::custom(Eigen::MatrixXcd columns, double tolerance)
{
    if (columns.rows() == 0 || columns.rows() != columns.cols())
        throw InvalidArgument("Codebook::custom: matrix must be square and non-empty");
    Codebook book(std::move(columns), CodebookKind::custom_unitary, nullptr);
    double err = book.unitarity_error();
    if (!(err <= tolerance))
    {
        std::ostringstream msg;
        msg << "Codebook::custom: matrix is not unitary (max |Q^H Q - I| = " << err << ")";
        throw InvalidArgument(msg.str());
    }
    return book;
}

double Codebook::unitarity_error() const
{
    const auto m = columns_.cols();
    Eigen::MatrixXcd gram = columns_.adjoint() * columns_;
    gram -= Eigen::MatrixXcd::Identity(m, m);
    return gram.cwiseAbs().maxCoeff();
}

Codebook make_dft_codebook(std::size_t m)
{
    if (m == 0)
        throw InvalidArgument("make_dft_codebook: need at least one codeword");
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    Eigen::MatrixXcd q(m, m);
    for (std::size_t col = 0; col < m; ++col)
        for (std::size_t i = 0; i < m; ++i)
        {
            std::size_t phase = (i * col) % m;
            double angle = -2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(m);
            q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col)) = std::polar(scale, angle);
        }
    return Codebook(std::move(q), CodebookKind::dft, std::make_shared<FftPlan>(m));
}

Eigen::MatrixXcd project_all_direct(const Eigen::MatrixXcd &vectors, const Codebook &book)
{
    if (static_cast<std::size_t>(vectors.rows()) != book.size())
        throw InvalidArgument("project_all: vector length differs from codeword length");
    return (book.matrix().adjoint() * vectors).transpose();
}

Eigen::MatrixXcd project_all(const Eigen::MatrixXcd &vectors, const Codebook &book)
{
    if (book.kind() != CodebookKind::dft)
        return project_all_direct(vectors, book);
    const auto m = static_cast<Eigen::Index>(book.size());
    if (vectors.rows() != m)
        throw InvalidArgument("project_all: vector length differs from codeword length");

    // q_m^H v = (1/sqrt M) sum_i v_i e^{+j 2 pi i m / M} = conj(FFT(conj v))[m] / sqrt M
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    Eigen::MatrixXcd scores(vectors.cols(), m);
    std::vector<std::complex<double>> work(static_cast<std::size_t>(m));
    for (Eigen::Index r = 0; r < vectors.cols(); ++r)
    {
        for (Eigen::Index i = 0; i < m; ++i)
            work[static_cast<std::size_t>(i)] = std::conj(vectors(i, r));
        book.plan_->forward(work);
        for (Eigen::Index k = 0; k < m; ++k)
            scores(r, k) = std::conj(work[static_cast<std::size_t>(k)]) * scale;
    }
    return scores;
}

void write_codebook_csv(std::ostream &out, const Codebook &book)
{
    out << "m,i,re,im\n";
    char buf[96];
    const auto &q = book.matrix();
    for (Eigen::Index m = 0; m < q.cols(); ++m)
        for (Eigen::Index i = 0; i < q.rows(); ++i)
        {
            std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g\n", static_cast<long long>(m + 1),
                          static_cast<long long>(i + 1), q(i, m).real(), q(i, m).imag());
            out << buf;
        }
}

Codebook read_codebook_csv(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line) || line != "m,i,re,im")
        throw SchemaError("codebook CSV: expected header 'm,i,re,im'");

    struct Entry
    {
        long long m, i;
        double re, im;
    };
    std::vector<Entry> entries;
    long long size = 0;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        Entry e{};
        char tail = 0;
        if (std::sscanf(line.c_str(), "%lld,%lld,%lf,%lf%c", &e.m, &e.i, &e.re, &e.im, &tail) != 4)
            throw SchemaError("codebook CSV: malformed row '" + line + "'");
        if (e.m < 1 || e.i < 1)
            throw SchemaError("codebook CSV: indices are 1-based");
        size = std::max({size, e.m, e.i});
        entries.push_back(e);
    }
    if (size == 0 || entries.size() != static_cast<std::size_t>(size * size))
        throw SchemaError("codebook CSV: expected a complete M x M matrix");

    Eigen::MatrixXcd q = Eigen::MatrixXcd::Constant(size, size, {std::nan(""), 0.0});
    for (const auto &e : entries)
        q(e.i - 1, e.m - 1) = {e.re, e.im};
    if (!q.allFinite())
        throw SchemaError("codebook CSV: duplicate or missing entries");
    return Codebook::custom(std::move(q));
}

} // namespace cpsc
