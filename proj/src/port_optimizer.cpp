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

#include "cpsc/port_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cpsc/error.hpp"

namespace cpsc
{

namespace
{
constexpr double kConditionLimit = 1e12;
constexpr double kRidge = 1e-10;
// Relative margin a greedy candidate must clear to count as an improvement.
constexpr double kStrictGain = 1e-12;

struct GramSolve
{
    Eigen::VectorXd x;
    CombinerStatus status = CombinerStatus::ok;
};

GramSolve solve_gram(const Eigen::MatrixXd &g, const Eigen::VectorXd &a)
{
    GramSolve out;
    const Eigen::Index k = g.rows();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    // LDLT::rcond() skips zero pivots, so also bound the pivot spread.
    const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
    const bool pivots_ok = k > 0 && d.minCoeff() * kConditionLimit >= d.maxCoeff();
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() && pivots_ok && ldlt.rcond() >= 1.0 / kConditionLimit)
    {
        out.x = ldlt.solve(a);
        return out;
    }
    const double trace = g.trace();
    if (!(trace > 0.0) || !std::isfinite(trace))
    {
        out.status = CombinerStatus::degraded;
        return out;
    }
    Eigen::MatrixXd ridge = g + Eigen::MatrixXd::Identity(k, k) * (kRidge * trace / static_cast<double>(k));
    ldlt.compute(ridge);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(ldlt.rcond() > 0.0))
    {
        out.status = CombinerStatus::degraded;
        return out;
    }
    out.x = ldlt.solve(a);
    out.status = CombinerStatus::regularized;
    return out;
}

Eigen::VectorXd uniform_weights(Eigen::Index k)
{
    return Eigen::VectorXd::Constant(k, 1.0 / std::sqrt(static_cast<double>(k)));
}

CombinerSolution combiner_from_gram(const Eigen::MatrixXd &g, const Eigen::VectorXd &a)
{
    const Eigen::Index k = a.size();
    if (k == 0)
        throw InvalidArgument("optimal_combiner: empty port set");
    const double scale = std::sqrt(std::max(g.trace(), 0.0));
    if (!(a.norm() > 1e-14 * scale))
        return {{uniform_weights(k)}, CombinerStatus::zero_alignment};

    GramSolve solved = solve_gram(g, a);
    if (solved.status == CombinerStatus::degraded)
        return {{uniform_weights(k)}, CombinerStatus::degraded};
    const double norm = solved.x.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
        return {{uniform_weights(k)}, CombinerStatus::degraded};
    return {{solved.x / norm}, solved.status};
}

double gram_objective(const Eigen::MatrixXd &g, const Eigen::VectorXd &a, const Eigen::VectorXd &b)
{
    const double energy = b.dot(g * b);
    return energy > 0.0 ? a.dot(b) / std::sqrt(energy) : 0.0;
}

bool next_combination(std::vector<std::size_t> &idx, std::size_t n)
{
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;)
    {
        if (idx[i] < n - k + i)
        {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

void check_capacity(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &q, std::size_t k, const char *who)
{
    if (q.size() != h.rows())
        throw InvalidArgument(std::string(who) + ": codeword length differs from channel rows");
    if (k < 1 || k > static_cast<std::size_t>(h.cols()))
        throw InvalidArgument(std::string(who) + ": port capacity must lie in [1, N]");
}
} // namespace

PortSet::PortSet(std::vector<std::size_t> indices, std::size_t capacity, std::size_t num_ports)
    : indices_(std::move(indices)), capacity_(capacity)
{
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        throw InvalidArgument("PortSet: duplicate port");
    if (indices_.size() > capacity_)
        throw InvalidArgument("PortSet: more ports than capacity");
    if (!indices_.empty() && indices_.back() >= num_ports)
        throw InvalidArgument("PortSet: port index out of range");
}

RealGram real_gram(const Eigen::MatrixXcd &h_s, const Eigen::VectorXcd &q)
{
    return {(h_s.adjoint() * h_s).real(), (h_s.adjoint() * q).real()};
}

Eigen::MatrixXcd gather_columns(const Eigen::MatrixXcd &h, const std::vector<std::size_t> &ports)
{
    Eigen::MatrixXcd out(h.rows(), static_cast<Eigen::Index>(ports.size()));
    for (std::size_t c = 0; c < ports.size(); ++c)
        out.col(static_cast<Eigen::Index>(c)) = h.col(static_cast<Eigen::Index>(ports[c]));
    return out;
}

Eigen::VectorXcd effective_channel(const Eigen::MatrixXcd &h, const PortSet &ports, const CombiningVector &b)
{
    if (static_cast<std::size_t>(b.weights.size()) != ports.size())
        throw InvalidArgument("effective_channel: weight count differs from port count");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(h.rows());
    for (std::size_t c = 0; c < ports.size(); ++c)
        out += h.col(static_cast<Eigen::Index>(ports.indices()[c])) * b.weights(static_cast<Eigen::Index>(c));
    return out;
}

double real_alignment(const Eigen::VectorXcd &q, const Eigen::VectorXcd &effective)
{
    const double norm = effective.norm();
    return norm > 0.0 ? q.dot(effective).real() / norm : 0.0;
}

double magnitude_alignment(const Eigen::VectorXcd &q, const Eigen::VectorXcd &effective)
{
    const double norm = effective.norm();
    return norm > 0.0 ? std::abs(q.dot(effective)) / norm : 0.0;
}

double evaluate_alignment(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &q, const PortSet &ports,
                          const CombiningVector &b, AlignmentMetric metric)
{
    Eigen::VectorXcd eff = effective_channel(h, ports, b);
    return metric == AlignmentMetric::real_part ? real_alignment(q, eff) : magnitude_alignment(q, eff);
}

CombinerSolution optimal_combiner(const Eigen::MatrixXcd &h_s, const Eigen::VectorXcd &q)
{
    if (q.size() != h_s.rows())
        throw InvalidArgument("optimal_combiner: codeword length differs from channel rows");
    RealGram rg = real_gram(h_s, q);
    return combiner_from_gram(rg.g, rg.a);
}

Eigen::VectorXd real_projection_coefficients(const Eigen::MatrixXcd &h_s, const Eigen::VectorXcd &q)
{
    RealGram rg = real_gram(h_s, q);
    GramSolve solved = solve_gram(rg.g, rg.a);
    if (solved.status == CombinerStatus::degraded)
        return Eigen::VectorXd::Zero(h_s.cols());
    return solved.x;
}

AlignmentResult omp_port_select(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &q, std::size_t k)
{
    check_capacity(h, q, k, "omp_port_select");
    const Eigen::Index n = h.cols();
    Eigen::VectorXd norms = h.colwise().norm().transpose();

    std::vector<std::size_t> chosen;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    Eigen::VectorXcd residual = q;
    AlignmentResult out;

    for (std::size_t iter = 0; iter < k; ++iter)
    {
        Eigen::VectorXd corr = (h.adjoint() * residual).real();
        std::size_t best = 0;
        double best_score = -1.0;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            if (used[static_cast<std::size_t>(i)])
                continue;
            double score = norms(i) > 0.0 ? std::abs(corr(i)) / norms(i) : 0.0;
            if (score > best_score)
            {
                best_score = score;
                best = static_cast<std::size_t>(i);
            }
        }
        chosen.push_back(best);
        used[best] = true;

        Eigen::MatrixXcd h_s = gather_columns(h, chosen);
        residual = q - h_s * real_projection_coefficients(h_s, q).cast<std::complex<double>>();
        out.trace.push_back(residual.norm());
    }

    out.ports = PortSet(chosen, k, static_cast<std::size_t>(n));
    CombinerSolution comb = optimal_combiner(gather_columns(h, out.ports.indices()), q);
    out.weights = comb.weights;
    out.status = comb.status;
    out.metric = AlignmentMetric::real_part;
    out.alignment = evaluate_alignment(h, q, out.ports, out.weights, out.metric);
    return out;
}

AlignmentResult greedy_no_combining(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &q, std::size_t k)
{
    check_capacity(h, q, k, "greedy_no_combining");
    const Eigen::Index n = h.cols();
    // g_n = q^H h_n, r_nn = ||h_n||^2. cross(l) accumulates sum_{p in S} r_pl,
    // filled one row of Re{H^H H} per accepted port.
    Eigen::VectorXcd g = h.transpose() * q.conjugate();
    Eigen::VectorXd self = h.colwise().squaredNorm().transpose();
    Eigen::VectorXd cross = Eigen::VectorXd::Zero(n);

    std::vector<std::size_t> chosen;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    std::complex<double> g_sum = 0.0;
    double r_sum = 0.0;
    double score = 0.0;
    AlignmentResult out;

    while (chosen.size() < k)
    {
        std::size_t best = 0;
        double best_score = -1.0;
        for (Eigen::Index l = 0; l < n; ++l)
        {
            if (used[static_cast<std::size_t>(l)])
                continue;
            const double denom = r_sum + 2.0 * cross(l) + self(l);
            const double cand = denom > 0.0 ? std::norm(g_sum + g(l)) / denom : 0.0;
            if (cand > best_score)
            {
                best_score = cand;
                best = static_cast<std::size_t>(l);
            }
        }
        if (!chosen.empty() && !(best_score > score * (1.0 + kStrictGain)))
            break;

        const auto b = static_cast<Eigen::Index>(best);
        r_sum += 2.0 * cross(b) + self(b);
        g_sum += g(b);
        score = best_score;
        chosen.push_back(best);
        used[best] = true;
        cross += (h.col(b).adjoint() * h).real().transpose();
        out.trace.push_back(score);
    }

    out.ports = PortSet(chosen, k, static_cast<std::size_t>(n));
    out.weights.weights = uniform_weights(static_cast<Eigen::Index>(chosen.size()));
    out.metric = AlignmentMetric::magnitude;
    out.alignment = evaluate_alignment(h, q, out.ports, out.weights, out.metric);
    return out;
}

double binomial(std::size_t n, std::size_t k)
{
    if (k > n)
        return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i)
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(c);
}

AlignmentResult exhaustive_port_select(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &q, std::size_t k,
                                       WeightsMode mode, double budget)
{
    check_capacity(h, q, k, "exhaustive_port_select");
    const auto n = static_cast<std::size_t>(h.cols());
    const double subsets = binomial(n, k);
    if (subsets > budget)
    {
        std::ostringstream msg;
        msg << "exhaustive_port_select: C(" << n << ", " << k << ") = " << subsets << " subsets exceeds budget "
            << budget;
        throw BudgetExceeded(msg.str());
    }

    const Eigen::MatrixXd r = (h.adjoint() * h).real();
    const Eigen::VectorXd a_full = (h.adjoint() * q).real();
    const Eigen::VectorXcd g = h.transpose() * q.conjugate();
    const auto kk = static_cast<Eigen::Index>(k);

    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    std::vector<std::size_t> best_idx = idx;
    double best = -2.0;
    Eigen::MatrixXd gs(kk, kk);
    Eigen::VectorXd as(kk);

    do
    {
        double value;
        if (mode == WeightsMode::lemma1)
        {
            for (Eigen::Index i = 0; i < kk; ++i)
            {
                as(i) = a_full(static_cast<Eigen::Index>(idx[i]));
                for (Eigen::Index j = 0; j < kk; ++j)
                    gs(i, j) = r(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]));
            }
            value = gram_objective(gs, as, combiner_from_gram(gs, as).weights.weights);
        }
        else
        {
            std::complex<double> gsum = 0.0;
            double rsum = 0.0;
            for (std::size_t i = 0; i < k; ++i)
            {
                gsum += g(static_cast<Eigen::Index>(idx[i]));
                for (std::size_t j = 0; j < k; ++j)
                    rsum += r(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]));
            }
            value = rsum > 0.0 ? std::abs(gsum) / std::sqrt(rsum) : 0.0;
        }
        if (value > best)
        {
            best = value;
            best_idx = idx;
        }
    } while (next_combination(idx, n));

    AlignmentResult out;
    out.ports = PortSet(best_idx, k, n);
    if (mode == WeightsMode::lemma1)
    {
        CombinerSolution comb = optimal_combiner(gather_columns(h, out.ports.indices()), q);
        out.weights = comb.weights;
        out.status = comb.status;
        out.metric = AlignmentMetric::real_part;
    }
    else
    {
        out.weights.weights = uniform_weights(kk);
        out.metric = AlignmentMetric::magnitude;
    }
    out.alignment = evaluate_alignment(h, q, out.ports, out.weights, out.metric);
    return out;
}

FullRankAlignment full_rank_alignment(const Eigen::MatrixXcd &h, const Eigen::VectorXcd &q)
{
    const Eigen::Index m = h.rows();
    if (q.size() != m)
        throw InvalidArgument("full_rank_alignment: codeword length differs from channel rows");
    if (h.cols() < m)
        throw InvalidArgument("full_rank_alignment: needs at least M ports");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(h);
    qr.setThreshold(1e-10);
    if (qr.rank() < m)
    {
        std::ostringstream msg;
        msg << "full_rank_alignment: channel rank " << qr.rank() << " < M = " << m << ", no invertible port subset";
        throw NumericalError(msg.str());
    }
    std::vector<std::size_t> picked;
    for (Eigen::Index c = 0; c < m; ++c)
        picked.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()(c)));

    FullRankAlignment out;
    out.ports = PortSet(picked, static_cast<std::size_t>(m), static_cast<std::size_t>(h.cols()));
    Eigen::MatrixXcd h_s = gather_columns(h, out.ports.indices());
    Eigen::VectorXcd b0 = h_s.colPivHouseholderQr().solve(q);
    out.weights = b0 / b0.norm();
    out.alignment = magnitude_alignment(q, h_s * out.weights);
    return out;
}

} // namespace cpsc
