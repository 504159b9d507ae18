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

#include "cpsc/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cpsc/channel.hpp"
#include "cpsc/codebook.hpp"
#include "cpsc/error.hpp"
#include "cpsc/mac.hpp"
#include "cpsc/random.hpp"
#include "cpsc/selector.hpp"

namespace cpsc
{

namespace
{

std::string fmt(const char *pattern, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

Eigen::MatrixXcd gaussian_matrix(NormalSource &normal, Eigen::Index rows, Eigen::Index cols)
{
    Eigen::MatrixXcd h(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            h(i, j) = normal.next_complex();
    return h;
}

double lemma1_objective(const RealGram &rg, const Eigen::VectorXd &b)
{
    const double den = std::sqrt(b.dot(rg.g * b));
    return den > 0.0 ? rg.a.dot(b) / den : 0.0;
}

SuiteResult suite_lemma1(const ValidationOptions &opt)
{
    SuiteResult r{"lemma1", true, ""};
    CounterRng rng(opt.seed, 1, 0);
    NormalSource normal(rng);
    constexpr int kInstances = 100;
    constexpr int kSamples = 20000;
    double worst_gap = -1e300, worst_grad = 0.0;
    for (int inst = 0; inst < kInstances; ++inst)
    {
        const Eigen::Index m = inst % 2 ? 8 : 4;
        const Eigen::Index k = (inst / 2) % 2 ? 3 : 2;
        const Eigen::MatrixXcd h = gaussian_matrix(normal, m, k);
        Eigen::VectorXcd q = gaussian_matrix(normal, m, 1).col(0);
        q.normalize();
        const RealGram rg = real_gram(h, q);
        const CombinerSolution sol = opt.combiner(h, q);
        const Eigen::VectorXd &b = sol.weights.weights;
        const double f = lemma1_objective(rg, b);

        double best = -1e300;
        Eigen::VectorXd v(k);
        for (int s = 0; s < kSamples; ++s)
        {
            for (Eigen::Index i = 0; i < k; ++i)
                v(i) = normal.next();
            best = std::max(best, lemma1_objective(rg, v.normalized()));
        }
        worst_gap = std::max(worst_gap, best - f);

        // Riemannian gradient on the unit sphere must vanish at the optimum.
        const double bgb = b.dot(rg.g * b);
        const Eigen::VectorXd grad = rg.a / std::sqrt(bgb) - rg.a.dot(b) * (rg.g * b) / std::pow(bgb, 1.5);
        const double tangent = (grad - grad.dot(b) * b).norm() / std::max(rg.a.norm(), 1e-300) * std::sqrt(bgb);
        worst_grad = std::max(worst_grad, tangent);
    }
    r.passed = worst_gap <= 1e-4 && worst_grad <= 1e-6;
    r.detail = fmt("worst random-search excess %.3g (limit 1e-4), worst tangent gradient %.3g (limit 1e-6)",
                   worst_gap, worst_grad);
    return r;
}

SuiteResult suite_omp(const ValidationOptions &opt)
{
    SuiteResult r{"omp", true, ""};
    ChannelModel model;
    model.num_bs_antennas = 8;
    model.grid = PortGrid(3, 4, 4.0, 4.0);
    const ChannelGenerator gen(model);
    const Codebook book = make_dft_codebook(8);
    constexpr int kTrials = 100;
    double ratio_sum = 0.0, worst_excess = 0.0;
    for (int trial = 0; trial < kTrials; ++trial)
    {
        CounterRng rng(opt.seed, static_cast<std::uint64_t>(trial), 2);
        const UserGeometry geom = draw_user_geometry(Deployment{}, rng);
        const Eigen::MatrixXcd h = gen.sample(geom, rng).entries;
        const SubspaceBasis basis = truncated_basis(h, 3, rng);
        const Eigen::VectorXcd q = book.word(select_codeword(basis, book).index);
        const double omp = omp_port_select(h, q, 3).alignment;
        const double best = exhaustive_port_select(h, q, 3, WeightsMode::lemma1).alignment;
        ratio_sum += best > 0.0 ? omp / best : 1.0;
        worst_excess = std::max(worst_excess, omp - best);
    }
    const double mean = ratio_sum / kTrials;
    r.passed = mean >= 0.9 && mean <= 1.0 + 1e-12 && worst_excess <= 1e-9;
    r.detail = fmt("mean OMP/exhaustive alignment ratio %.6f over %g trials (floor 0.9)", mean, kTrials);
    return r;
}

SuiteResult suite_fft(const ValidationOptions &opt)
{
    SuiteResult r{"fft", true, ""};
    CounterRng rng(opt.seed, 3, 0);
    NormalSource normal(rng);
    double worst = 0.0;
    int mismatches = 0, cases = 0;
    for (std::size_t m : {64u, 48u})
    {
        const Codebook book = make_dft_codebook(m);
        const int count = m == 64 ? 200 : 50;
        for (int i = 0; i < count; ++i, ++cases)
        {
            const auto t = static_cast<Eigen::Index>(1 + uniform_index(rng, 8));
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(gaussian_matrix(normal, static_cast<Eigen::Index>(m), t));
            const Eigen::MatrixXcd basis =
                qr.householderQ() * Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(m), t);
            const Eigen::MatrixXcd fast = project_all(basis, book);
            const Eigen::MatrixXcd direct = project_all_direct(basis, book);
            worst = std::max(worst, (fast - direct).cwiseAbs().maxCoeff());
            Eigen::Index a = 0, b = 0;
            fast.cwiseAbs2().colwise().sum().maxCoeff(&a);
            direct.cwiseAbs2().colwise().sum().maxCoeff(&b);
            mismatches += a != b;
        }
    }
    r.passed = worst <= 1e-9 && mismatches == 0;
    r.detail = fmt("%g bases, max score difference %.3g, argmax mismatches %g", cases, worst, mismatches);
    return r;
}

SuiteResult suite_covariance(const ValidationOptions &opt)
{
    SuiteResult r{"covariance", true, ""};
    ChannelModel model;
    model.rice_factor = 0.0;
    model.num_bs_antennas = 1;
    model.grid = PortGrid(4, 4, 4.0, 4.0);
    const ChannelGenerator gen(model);
    const Eigen::MatrixXd j = spatial_covariance(model.grid, 1.0);
    const Eigen::Index n = j.rows();
    constexpr int kDraws = 20000;
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(n, n);
    CounterRng rng(opt.seed, 4, 0);
    for (int d = 0; d < kDraws; ++d)
    {
        const Eigen::RowVectorXcd h = gen.sample_nlos(rng).row(0);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
            {
                const std::complex<double> p = h(a) * std::conj(h(b));
                sum(a, b) += p;
                sum_sq(a, b) += std::norm(p);
            }
    }
    double worst = 0.0;
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
        {
            const std::complex<double> mean = sum(a, b) / double(kDraws);
            const double var = (sum_sq(a, b) / kDraws - std::norm(mean)) * kDraws / (kDraws - 1.0);
            const double se = std::sqrt(var / kDraws);
            worst = std::max(worst, std::abs(mean - j(a, b)) / se);
        }
    r.passed = worst <= 3.0;
    r.detail = fmt("%g draws on a 4x4 grid, worst entry deviation %.3f standard errors (limit 3)", kDraws, worst);
    return r;
}

SuiteResult suite_collision(const ValidationOptions &opt)
{
    SuiteResult r{"collision", true, ""};
    constexpr int kTrials = 10000;
    std::ostringstream detail;
    const std::pair<std::size_t, std::size_t> cases[] = {{16, 4}, {32, 8}, {64, 16}};
    for (auto [m, u] : cases)
    {
        CounterRng rng(opt.seed, 5, static_cast<std::uint32_t>(m));
        int hits = 0;
        std::vector<char> used(m);
        for (int t = 0; t < kTrials; ++t)
        {
            std::fill(used.begin(), used.end(), 0);
            bool collided = false;
            for (std::size_t i = 0; i < u; ++i)
            {
                const std::size_t k = uniform_index(rng, m);
                collided = collided || used[k];
                used[k] = 1;
            }
            hits += collided;
        }
        const double p = collision_probability(m, u);
        const double se = std::sqrt(p * (1 - p) / kTrials);
        const double z = std::abs(hits / double(kTrials) - p) / se;
        r.passed = r.passed && z <= 3.0;
        detail << fmt("M=%g U=%g: |z|=%.2f; ", double(m), double(u), z);
    }
    double worst_rel = 0.0;
    for (std::size_t u : {2u, 4u, 8u, 16u, 32u})
    {
        const std::size_t m = 10 * u * u;
        const double exact = unique_probability(m, u);
        worst_rel = std::max(worst_rel, std::abs(unique_probability_asymptotic(m, u) - exact) / exact);
    }
    r.passed = r.passed && worst_rel < 0.01;
    detail << fmt("asymptotic relative error %.4f at M=10U^2", worst_rel);
    r.detail = detail.str();
    return r;
}

SuiteResult suite_greedy(const ValidationOptions &opt)
{
    SuiteResult r{"greedy", true, ""};
    CounterRng rng(opt.seed, 6, 0);
    NormalSource normal(rng);
    int bad_trace = 0;
    double worst = 0.0;
    constexpr int kInstances = 300;
    for (int i = 0; i < kInstances; ++i)
    {
        const auto m = static_cast<Eigen::Index>(4 << uniform_index(rng, 3));
        const auto n = static_cast<Eigen::Index>(8 + uniform_index(rng, 17));
        const auto k = static_cast<std::size_t>(2 + uniform_index(rng, 5));
        const Eigen::MatrixXcd h = gaussian_matrix(normal, m, n);
        Eigen::VectorXcd q = gaussian_matrix(normal, m, 1).col(0);
        q.normalize();
        const AlignmentResult g = greedy_no_combining(h, q, k);
        for (std::size_t s = 1; s < g.trace.size(); ++s)
            bad_trace += !(g.trace[s] > g.trace[s - 1]);
        worst = std::max(worst, std::abs(g.alignment - std::sqrt(g.trace.back())));
    }
    Eigen::MatrixXcd dup(4, 6);
    const Eigen::VectorXcd col = gaussian_matrix(normal, 4, 1).col(0);
    for (Eigen::Index c = 0; c < 6; ++c)
        dup.col(c) = col;
    const Eigen::VectorXcd q = make_dft_codebook(4).word(1);
    const std::size_t dup_size = greedy_no_combining(dup, q, 4).ports.size();
    r.passed = bad_trace == 0 && worst <= 1e-10 && dup_size == 1;
    r.detail = fmt("non-increasing steps %g, worst |alignment - sqrt(score)| %.3g, duplicate-column set size %g",
                   bad_trace, worst, double(dup_size));
    return r;
}

} // namespace

const std::vector<std::string> &suite_names()
{
    static const std::vector<std::string> names{"lemma1", "omp", "fft", "covariance", "collision", "greedy"};
    return names;
}

SuiteResult run_suite(const std::string &name, const ValidationOptions &options)
{
    try
    {
        if (name == "lemma1")
            return suite_lemma1(options);
        if (name == "omp")
            return suite_omp(options);
        if (name == "fft")
            return suite_fft(options);
        if (name == "covariance")
            return suite_covariance(options);
        if (name == "collision")
            return suite_collision(options);
        if (name == "greedy")
            return suite_greedy(options);
    }
    catch (const InvalidArgument &)
    {
        throw;
    }
    catch (const std::exception &e)
    {
        return {name, false, std::string("error: ") + e.what()};
    }
    throw InvalidArgument("unknown validation suite '" + name + "'");
}

std::vector<SuiteResult> run_validation(const std::vector<std::string> &names, const ValidationOptions &options)
{
    const std::vector<std::string> &list = names.empty() ? suite_names() : names;
    for (const std::string &n : list)
        if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
            throw InvalidArgument("unknown validation suite '" + n + "'");
    std::vector<SuiteResult> out;
    for (const std::string &n : list)
        out.push_back(run_suite(n, options));
    return out;
}

SuiteResult check_collision_csv(const SweepResult &result, const ExperimentConfig &base)
{
    SuiteResult r{"collision-csv", true, ""};
    if (result.points.empty())
        throw SchemaError("sweep CSV has no rows");
    if (base.scheme != Scheme::bs_random_codeword)
        throw ConfigError("the analytic collision curve holds for uniform random codewords "
                          "(scheme bs_random_codeword) only");
    std::ostringstream detail;
    for (const PointResult &p : result.points)
    {
        const ExperimentConfig c = p.param == "none" ? base : at_sweep_point(base, p.param, p.value);
        const double expect = collision_probability(c.m, c.u);
        const double se = std::sqrt(expect * (1 - expect) / static_cast<double>(p.trials));
        const double dev = std::abs(p.collision_rate - expect);
        const bool ok = se > 0.0 ? dev <= 3.0 * se : dev <= 1e-9;
        r.passed = r.passed && ok;
        detail << p.param << '=' << p.value << fmt(": empirical %.4f analytic %.4f ", p.collision_rate, expect)
               << (ok ? "ok" : "FAIL") << "; ";
    }
    r.detail = detail.str();
    return r;
}

} // namespace cpsc
