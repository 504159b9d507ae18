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

#include "cpsc/sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "cpsc/error.hpp"

namespace cpsc
{

CounterRng trial_stream(std::uint64_t seed, std::uint64_t trial, StreamPurpose purpose, std::size_t user)
{
    if (user >= (1u << 24))
        throw InvalidArgument("trial_stream: user index too large");
    const auto sub = (static_cast<std::uint32_t>(purpose) << 24) | static_cast<std::uint32_t>(user);
    return CounterRng(seed, trial, sub);
}

namespace
{

ChannelModel model_for(const ExperimentConfig &c)
{
    ChannelModel model;
    model.rice_factor = c.rice_factor;
    model.channel_power = 1.0;
    model.num_bs_antennas = c.m;
    model.grid = c.grid;
    return model;
}

ExperimentConfig validated(ExperimentConfig c)
{
    c.validate();
    return c;
}

} // namespace

Experiment::Experiment(ExperimentConfig config)
    : config_(validated(std::move(config))), book_(make_dft_codebook(config_.m)), generator_(model_for(config_)),
      // Unit transmit power and unit channel power: sigma^2 = 10^(-SNR/10).
      noise_power_(std::pow(10.0, -config_.snr_db / 10.0))
{
}

AlignmentResult Experiment::optimize_ports(const Eigen::MatrixXcd &channel, std::size_t k) const
{
    const Eigen::VectorXcd q = book_.word(k);
    const std::size_t kk = config_.k;
    switch (config_.scheme)
    {
    case Scheme::cpsc:
    case Scheme::bs_random_codeword:
        return omp_port_select(channel, q, kk);
    case Scheme::cpsc_no_combining:
        return greedy_no_combining(channel, q, kk);
    case Scheme::cpsc_exhaustive:
        return exhaustive_port_select(channel, q, kk, WeightsMode::lemma1);
    case Scheme::fixed_antenna:
    {
        const auto n = static_cast<std::size_t>(channel.cols());
        const Eigen::MatrixXcd h_s = channel.leftCols(static_cast<Eigen::Index>(kk));
        CombinerSolution sol = optimal_combiner(h_s, q);
        AlignmentResult r;
        r.ports = PortSet(all_indices(kk), kk, n);
        r.weights = sol.weights;
        r.status = sol.status;
        r.metric = AlignmentMetric::real_part;
        r.alignment = real_alignment(q, h_s * sol.weights.weights.cast<std::complex<double>>());
        return r;
    }
    }
    throw InvalidState("unknown scheme");
}

TrialDetail Experiment::run_trial_detail(std::uint64_t trial) const
{
    const ExperimentConfig &c = config_;
    const std::size_t m = c.m;
    TrialDetail d;
    d.users.resize(c.u);
    const Deployment deployment;

    for (std::size_t u = 0; u < c.u; ++u)
    {
        UserState &s = d.users[u];
        CounterRng rg = trial_stream(c.seed, trial, StreamPurpose::geometry, u);
        s.geometry = draw_user_geometry(deployment, rg);
        CounterRng rc = trial_stream(c.seed, trial, StreamPurpose::channel, u);
        s.channel = generator_.sample(s.geometry, rc, u);
        const Eigen::MatrixXcd &h = s.channel.entries;

        if (c.scheme == Scheme::bs_random_codeword)
        {
            CounterRng rr = trial_stream(c.seed, trial, StreamPurpose::random_codeword, u);
            s.codeword = uniform_index(rr, m);
        }
        else
        {
            const Eigen::MatrixXcd source =
                c.scheme == Scheme::fixed_antenna ? Eigen::MatrixXcd(h.leftCols(static_cast<Eigen::Index>(c.k))) : h;
            const std::size_t t = std::min<std::size_t>(
                {c.effective_t(), static_cast<std::size_t>(source.rows()), static_cast<std::size_t>(source.cols())});
            CounterRng rb = trial_stream(c.seed, trial, StreamPurpose::basis, u);
            s.basis = truncated_basis(source, t, rb);
            s.codeword = select_codeword(s.basis, book_).index;
        }
        s.ports = optimize_ports(h, s.codeword);
        s.effective = effective_channel(h, s.ports.ports, s.ports.weights);
    }

    ReservationInput input;
    for (const UserState &s : d.users)
        input.claims.push_back(s.codeword);
    d.report = detect_collisions(input, book_, noise_power_, DetectionMode::oracle);
    if (d.report.classification_errors != 0)
        throw InvalidState("oracle reservation detection disagreed with the ground truth");

    LocalAgents agents;
    agents.power = [&](std::size_t u) { return d.users[u].effective.squaredNorm(); };
    agents.reselect = [&](std::size_t u, std::span<const std::size_t> allowed) -> std::size_t {
        if (c.scheme == Scheme::bs_random_codeword)
        {
            CounterRng rr = trial_stream(c.seed, trial, StreamPurpose::reselection, u);
            return allowed[uniform_index(rr, allowed.size())];
        }
        return select_codeword(d.users[u].basis, book_, allowed).index;
    };
    CounterRng rres = trial_stream(c.seed, trial, StreamPurpose::resolution);
    d.resolution = resolve(d.report, m, c.collision_policy, agents, rres);

    std::vector<Eigen::VectorXcd> effective;
    std::vector<std::size_t> words;
    std::vector<std::size_t> who;
    for (std::size_t u = 0; u < c.u; ++u)
    {
        const UserStatus st = d.resolution.status[u];
        if (st == UserStatus::reselected || st == UserStatus::reassigned)
        {
            UserState &s = d.users[u];
            s.codeword = *d.resolution.codeword[u];
            s.ports = optimize_ports(s.channel.entries, s.codeword);
            s.effective = effective_channel(s.channel.entries, s.ports.ports, s.ports.weights);
        }
        if (d.resolution.transmits(u))
        {
            effective.push_back(d.users[u].effective);
            words.push_back(*d.resolution.codeword[u]);
            who.push_back(u);
        }
    }
    const std::vector<double> powers(who.size(), 1.0);
    const std::vector<double> sinr_tx = compute_sinr(effective, words, powers, noise_power_, book_);
    std::vector<double> sinr(c.u, 0.0);
    for (std::size_t i = 0; i < who.size(); ++i)
        sinr[who[i]] = sinr_tx[i];

    d.outcome = slot_rates(sinr, d.resolution.status);
    d.outcome.collision_count = d.report.colliding_users();
    d.outcome.had_collision = d.report.has_collision();
    return d;
}

SlotOutcome Experiment::run_trial(std::uint64_t trial) const
{
    return run_trial_detail(trial).outcome;
}

double PointResult::rate_se() const
{
    return ci95 / 1.96;
}

void CompensatedSum::add(double x)
{
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        compensation_ += (sum_ - t) + x;
    else
        compensation_ += (x - t) + sum_;
    sum_ = t;
}

std::size_t resolve_worker_count(std::size_t requested)
{
    if (requested > 0)
        return requested;
    if (const char *env = std::getenv("CPSC_THREADS"))
    {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace
{

[[noreturn]] void rethrow_with_context(std::exception_ptr error, const std::string &context)
{
    try
    {
        std::rethrow_exception(error);
    }
    catch (const BudgetExceeded &e)
    {
        throw BudgetExceeded(context + ": " + e.what());
    }
    catch (const NumericalError &e)
    {
        throw NumericalError(context + ": " + e.what());
    }
    catch (const InvalidState &e)
    {
        throw InvalidState(context + ": " + e.what());
    }
    catch (const InvalidArgument &e)
    {
        throw InvalidArgument(context + ": " + e.what());
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(context + ": " + e.what());
    }
}

struct Moments
{
    double mean = 0.0;
    double ci95 = 0.0;
};

Moments moments(const std::vector<double> &x)
{
    const std::size_t n = x.size();
    CompensatedSum s;
    for (double v : x)
        s.add(v);
    Moments out;
    out.mean = s.value() / static_cast<double>(n);
    if (n < 2)
        return out;
    CompensatedSum ss;
    for (double v : x)
        ss.add((v - out.mean) * (v - out.mean));
    const double var = ss.value() / static_cast<double>(n - 1);
    out.ci95 = 1.96 * std::sqrt(var / static_cast<double>(n));
    return out;
}

} // namespace

PointResult run_point(const ExperimentConfig &config, const RunOptions &options)
{
    const Experiment experiment(config);
    const std::size_t n = config.trials;
    std::vector<double> per_user(n), sum_rate(n), collided(n);

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_trial = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error;

    auto work = [&]() {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (error_trial < i)
                    return;
            }
            try
            {
                const SlotOutcome o = experiment.run_trial(i);
                sum_rate[i] = o.sum_rate;
                per_user[i] = o.sum_rate / static_cast<double>(config.u);
                collided[i] = o.had_collision ? 1.0 : 0.0;
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (i < error_trial)
                {
                    error_trial = i;
                    error = std::current_exception();
                }
            }
        }
    };

    const std::size_t workers = std::min(resolve_worker_count(options.workers), n);
    if (workers <= 1)
        work();
    else
    {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto &th : pool)
            th.join();
    }
    if (error)
        rethrow_with_context(error, "trial " + std::to_string(error_trial));

    PointResult r;
    const Moments rate = moments(per_user);
    const Moments sum = moments(sum_rate);
    r.mean_rate_per_user = rate.mean;
    r.ci95 = rate.ci95;
    r.mean_sum_rate = sum.mean;
    r.sum_ci95 = sum.ci95;
    r.collision_rate = moments(collided).mean;
    r.trials = n;
    r.seed = config.seed;
    return r;
}

namespace
{

std::string format_value(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

SweepResult run_sweep(const ExperimentConfig &config, const RunOptions &options)
{
    config.validate();
    SweepResult result;
    if (!config.sweep)
    {
        result.points.push_back(run_point(config, options));
        if (options.on_point)
            options.on_point(result.points.back());
        return result;
    }
    for (double v : config.sweep->values)
    {
        const ExperimentConfig point = at_sweep_point(config, config.sweep->param, v);
        PointResult r;
        try
        {
            r = run_point(point, options);
        }
        catch (...)
        {
            rethrow_with_context(std::current_exception(), config.sweep->param + "=" + format_value(v));
        }
        r.param = config.sweep->param;
        r.value = v;
        result.points.push_back(r);
        if (options.on_point)
            options.on_point(r);
    }
    return result;
}

void write_sweep_csv(std::ostream &out, const SweepResult &result)
{
    out << kSweepCsvHeader << '\n';
    for (const PointResult &p : result.points)
        out << p.param << ',' << format_value(p.value) << ',' << format_value(p.mean_rate_per_user) << ','
            << format_value(p.ci95) << ',' << format_value(p.mean_sum_rate) << ',' << format_value(p.sum_ci95)
            << ',' << format_value(p.collision_rate) << ',' << p.trials << ',' << p.seed << '\n';
}

void write_sweep_csv(const std::string &path, const SweepResult &result)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidArgument("cannot write '" + path + "'");
    write_sweep_csv(out, result);
    if (!out)
        throw InvalidArgument("write to '" + path + "' failed");
}

namespace
{

std::string strip_cr(std::string s)
{
    if (!s.empty() && s.back() == '\r')
        s.pop_back();
    return s;
}

double parse_double(const std::string &s, std::size_t line)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size())
            return v;
    }
    catch (const std::exception &)
    {
    }
    throw SchemaError("line " + std::to_string(line) + ": '" + s + "' is not a number");
}

std::uint64_t parse_count(const std::string &s, std::size_t line)
{
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos)
    {
        try
        {
            return std::stoull(s);
        }
        catch (const std::exception &)
        {
        }
    }
    throw SchemaError("line " + std::to_string(line) + ": '" + s + "' is not a non-negative integer");
}

} // namespace

SweepResult read_sweep_csv(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line))
        throw SchemaError("empty CSV");
    if (strip_cr(line) != kSweepCsvHeader)
        throw SchemaError("unexpected header '" + strip_cr(line) + "'");
    SweepResult result;
    std::size_t lineno = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        line = strip_cr(line);
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (!line.empty() && line.back() == ',')
            f.emplace_back();
        if (f.size() != 9)
            throw SchemaError("line " + std::to_string(lineno) + ": expected 9 fields, got " +
                              std::to_string(f.size()));
        PointResult p;
        p.param = f[0];
        if (p.param != "none" && !is_sweep_param(p.param))
            throw SchemaError("line " + std::to_string(lineno) + ": unknown sweep parameter '" + p.param + "'");
        p.value = parse_double(f[1], lineno);
        p.mean_rate_per_user = parse_double(f[2], lineno);
        p.ci95 = parse_double(f[3], lineno);
        p.mean_sum_rate = parse_double(f[4], lineno);
        p.sum_ci95 = parse_double(f[5], lineno);
        p.collision_rate = parse_double(f[6], lineno);
        p.trials = parse_count(f[7], lineno);
        p.seed = parse_count(f[8], lineno);
        result.points.push_back(p);
    }
    return result;
}

SweepResult read_sweep_csv(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SchemaError("cannot read '" + path + "'");
    return read_sweep_csv(in);
}

double z_greater(const PointResult &a, const PointResult &b)
{
    const double diff = a.mean_rate_per_user - b.mean_rate_per_user;
    const double se = std::hypot(a.rate_se(), b.rate_se());
    if (se == 0.0)
        return diff > 0.0 ? std::numeric_limits<double>::infinity()
                          : (diff < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0);
    return diff / se;
}

} // namespace cpsc
