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

#include "cpsc/selector.hpp"

#include <algorithm>
#include <numeric>

#include "cpsc/error.hpp"

namespace cpsc
{

namespace
{
Eigen::MatrixXcd thin_q(const Eigen::MatrixXcd &a)
{
    const Eigen::Index k = std::min(a.rows(), a.cols());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(a.rows(), k);
}

void check_allowed(std::span<const std::size_t> allowed, std::size_t size)
{
    if (allowed.empty())
        throw InvalidArgument("select_codeword: allowed codeword set is empty");
    for (std::size_t k : allowed)
        if (k >= size)
            throw InvalidArgument("select_codeword: allowed index outside the codebook");
}

template <typename ScoreFn>
CodewordChoice best_of(std::span<const std::size_t> allowed, ScoreFn score)
{
    CodewordChoice best;
    bool first = true;
    auto consider = [&](std::size_t k) {
        double s = score(k);
        if (first || s > best.score + kScoreTieTolerance ||
            (std::abs(s - best.score) <= kScoreTieTolerance && k < best.index))
        {
            best = {k, s};
            first = false;
        }
    };
    for (std::size_t k : allowed)
        consider(k);
    return best;
}
} // namespace

std::vector<std::size_t> all_indices(std::size_t count)
{
    std::vector<std::size_t> out(count);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
}

SubspaceBasis truncated_basis(const Eigen::MatrixXcd &h, std::size_t t, CounterRng &rng, BasisMode mode,
                              RangeFinderOptions options)
{
    const auto m = static_cast<std::size_t>(h.rows());
    const auto n = static_cast<std::size_t>(h.cols());
    if (t < 1 || t > std::min(m, n))
        throw InvalidArgument("truncated_basis: t must lie in [1, min(M, N)]");
    const auto tt = static_cast<Eigen::Index>(t);

    if (mode == BasisMode::exact)
    {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeThinU);
        return {svd.matrixU().leftCols(tt)};
    }

    const auto sketch = static_cast<Eigen::Index>(std::min(t + options.oversampling, n));
    NormalSource normal(rng);
    Eigen::MatrixXcd test(h.cols(), sketch);
    for (Eigen::Index i = 0; i < test.rows(); ++i)
        for (Eigen::Index j = 0; j < sketch; ++j)
            test(i, j) = normal.next_complex();

    Eigen::MatrixXcd q = thin_q(h * test);
    for (std::size_t it = 0; it < options.power_iterations; ++it)
    {
        Eigen::MatrixXcd z = thin_q(h.adjoint() * q);
        q = thin_q(h * z);
    }
    Eigen::MatrixXcd small = q.adjoint() * h;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(small, Eigen::ComputeThinU);
    return {q * svd.matrixU().leftCols(tt)};
}

Eigen::VectorXd codeword_energies(const SubspaceBasis &basis, const Codebook &book)
{
    Eigen::MatrixXcd scores = project_all(basis.vectors, book);
    return scores.cwiseAbs2().colwise().sum().transpose();
}

CodewordChoice select_codeword(const SubspaceBasis &basis, const Codebook &book)
{
    auto all = all_indices(book.size());
    return select_codeword(basis, book, all);
}

CodewordChoice select_codeword(const SubspaceBasis &basis, const Codebook &book, std::span<const std::size_t> allowed)
{
    if (static_cast<std::size_t>(basis.vectors.rows()) != book.size())
        throw InvalidArgument("select_codeword: basis dimension differs from codebook");
    check_allowed(allowed, book.size());
    Eigen::VectorXd energy = codeword_energies(basis, book);
    return best_of(allowed, [&](std::size_t k) { return energy(static_cast<Eigen::Index>(k)); });
}

Eigen::MatrixXcd column_space_projector(const Eigen::MatrixXcd &h, std::size_t *rank_out, bool *regularized_out)
{
    const Eigen::Index m = h.rows();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(h);
    qr.setThreshold(1e-12);
    const Eigen::Index rank = qr.rank();
    if (rank_out)
        *rank_out = static_cast<std::size_t>(rank);
    if (regularized_out)
        *regularized_out = false;
    if (rank == 0)
        return Eigen::MatrixXcd::Zero(m, m);

    Eigen::MatrixXcd kept(m, rank);
    for (Eigen::Index c = 0; c < rank; ++c)
        kept.col(c) = h.col(qr.colsPermutation().indices()(c));

    Eigen::MatrixXcd gram = kept.adjoint() * kept;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12)
    {
        gram += Eigen::MatrixXcd::Identity(rank, rank) * (1e-10 * gram.trace().real() / static_cast<double>(rank));
        if (regularized_out)
            *regularized_out = true;
    }
    return kept * gram.ldlt().solve(kept.adjoint());
}

ProjectorChoice select_codeword_full_projector(const Eigen::MatrixXcd &h, const Codebook &book)
{
    auto all = all_indices(book.size());
    return select_codeword_full_projector(h, book, all);
}

ProjectorChoice select_codeword_full_projector(const Eigen::MatrixXcd &h, const Codebook &book,
                                               std::span<const std::size_t> allowed)
{
    if (static_cast<std::size_t>(h.rows()) != book.size())
        throw InvalidArgument("select_codeword_full_projector: channel rows differ from codeword length");
    check_allowed(allowed, book.size());
    ProjectorChoice out;
    Eigen::MatrixXcd proj = column_space_projector(h, &out.rank, &out.regularized);
    Eigen::MatrixXcd projected = proj * book.matrix();
    Eigen::VectorXd energy = projected.cwiseAbs2().colwise().sum().transpose();
    out.choice = best_of(allowed, [&](std::size_t k) { return energy(static_cast<Eigen::Index>(k)); });
    return out;
}

} // namespace cpsc
