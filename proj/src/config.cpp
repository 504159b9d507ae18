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

#include "cpsc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cpsc/error.hpp"

namespace cpsc
{

using nlohmann::json;

std::string to_string(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::cpsc:
        return "cpsc";
    case Scheme::cpsc_no_combining:
        return "cpsc_no_combining";
    case Scheme::fixed_antenna:
        return "fixed_antenna";
    case Scheme::cpsc_exhaustive:
        return "cpsc_exhaustive";
    case Scheme::bs_random_codeword:
        return "bs_random_codeword";
    }
    return "?";
}

Scheme parse_scheme(const std::string &name)
{
    for (Scheme s : {Scheme::cpsc, Scheme::cpsc_no_combining, Scheme::fixed_antenna, Scheme::cpsc_exhaustive,
                     Scheme::bs_random_codeword})
        if (to_string(s) == name)
            return s;
    throw ConfigError("unknown scheme '" + name + "'");
}

bool is_sweep_param(const std::string &name)
{
    static const std::set<std::string> names{"n", "u", "m", "t", "snr_db", "k"};
    return names.count(name) > 0;
}

void ExperimentConfig::validate() const
{
    if (m < 1)
        throw ConfigError("m must be at least 1");
    if (u < 1)
        throw ConfigError("u must be at least 1");
    if (k < 1)
        throw ConfigError("k must be at least 1");
    if (k > grid.size())
        throw ConfigError("k = " + std::to_string(k) + " exceeds the number of ports " + std::to_string(grid.size()));
    if (trials < 1)
        throw ConfigError("trials must be at least 1");
    if (!std::isfinite(snr_db))
        throw ConfigError("snr_db must be finite");
    if (!(rice_factor >= 0.0) || !std::isfinite(rice_factor))
        throw ConfigError("rice_factor must be finite and non-negative");
    if (sweep)
    {
        if (!is_sweep_param(sweep->param))
            throw ConfigError("cannot sweep over '" + sweep->param + "' (allowed: n, u, m, t, snr_db, k)");
        if (sweep->values.empty())
            throw ConfigError("sweep over '" + sweep->param + "' has no values");
        for (double v : sweep->values)
            at_sweep_point(*this, sweep->param, v).validate();
    }
}

std::vector<std::string> ExperimentConfig::warnings() const
{
    std::vector<std::string> out;
    if (m < u)
        out.push_back("m < u: more users than codewords, collisions are unavoidable");
    if (t > std::min(m, grid.size()))
        out.push_back("t exceeds min(m, N) and is clipped");
    return out;
}

PortGrid grid_for_ports(std::size_t n, double w1, double w2)
{
    if (n == 0)
        throw ConfigError("port count must be positive");
    std::size_t n1 = 1;
    for (std::size_t d = 1; d * d <= n; ++d)
        if (n % d == 0)
            n1 = d;
    return PortGrid(n1, n / n1, w1, w2);
}

namespace
{

std::size_t as_count(const std::string &param, double value)
{
    if (!(value >= 0.0) || value != std::floor(value) || value > 1e12)
        throw ConfigError("sweep value " + std::to_string(value) + " for '" + param + "' is not a count");
    return static_cast<std::size_t>(value);
}

} // namespace

ExperimentConfig at_sweep_point(const ExperimentConfig &base, const std::string &param, double value)
{
    ExperimentConfig c = base;
    c.sweep.reset();
    if (param == "n")
        c.grid = grid_for_ports(as_count(param, value), base.grid.w1(), base.grid.w2());
    else if (param == "u")
        c.u = as_count(param, value);
    else if (param == "m")
        c.m = as_count(param, value);
    else if (param == "t")
        c.t = as_count(param, value);
    else if (param == "k")
        c.k = as_count(param, value);
    else if (param == "snr_db")
        c.snr_db = value;
    else
        throw ConfigError("cannot sweep over '" + param + "'");
    return c;
}

namespace
{

json to_json(const ExperimentConfig &c)
{
    json j;
    j["m"] = c.m;
    j["grid"] = {{"n1", c.grid.n1()}, {"n2", c.grid.n2()}, {"w1", c.grid.w1()}, {"w2", c.grid.w2()}};
    j["u"] = c.u;
    j["k"] = c.k;
    j["t"] = c.t;
    j["snr_db"] = c.snr_db;
    j["rice_factor"] = c.rice_factor;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["scheme"] = to_string(c.scheme);
    j["collision_policy"] = {{"kind", to_string(c.collision_policy.kind)},
                             {"keeper", to_string(c.collision_policy.keeper)}};
    if (c.sweep)
        j["sweep"] = {{"param", c.sweep->param}, {"values", c.sweep->values}};
    return j;
}

void reject_unknown(const json &obj, const std::set<std::string> &known, const std::string &where)
{
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("unknown field '" + where + it.key() + "'");
}

template <typename T>
T get_field(const json &obj, const char *key, T fallback, const std::string &where)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null())
        return fallback;
    try
    {
        if constexpr (std::is_unsigned_v<T>)
        {
            if (it->is_number_float())
            {
                double d = it->template get<double>();
                if (d < 0 || d != std::floor(d))
                    throw ConfigError("");
                return static_cast<T>(d);
            }
            if (it->is_number_integer() && it->template get<long long>() < 0)
                throw ConfigError("");
        }
        return it->template get<T>();
    }
    catch (const std::exception &)
    {
        throw ConfigError("field '" + where + key + "' has the wrong type or value: " + it->dump());
    }
}

ExperimentConfig from_json(const json &j)
{
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"m", "grid", "u", "k", "t", "snr_db", "rice_factor", "trials", "seed", "scheme",
                    "collision_policy", "sweep"},
                   "");
    ExperimentConfig c;
    c.m = get_field<std::size_t>(j, "m", c.m, "");
    if (auto g = j.find("grid"); g != j.end() && !g->is_null())
    {
        if (!g->is_object())
            throw ConfigError("field 'grid' must be an object");
        reject_unknown(*g, {"n1", "n2", "w1", "w2"}, "grid.");
        const auto n1 = get_field<std::size_t>(*g, "n1", c.grid.n1(), "grid.");
        const auto n2 = get_field<std::size_t>(*g, "n2", c.grid.n2(), "grid.");
        const auto w1 = get_field<double>(*g, "w1", c.grid.w1(), "grid.");
        const auto w2 = get_field<double>(*g, "w2", c.grid.w2(), "grid.");
        try
        {
            c.grid = PortGrid(n1, n2, w1, w2);
        }
        catch (const std::exception &e)
        {
            throw ConfigError(std::string("invalid grid: ") + e.what());
        }
    }
    c.u = get_field<std::size_t>(j, "u", c.u, "");
    c.k = get_field<std::size_t>(j, "k", c.k, "");
    c.t = get_field<std::size_t>(j, "t", c.t, "");
    c.snr_db = get_field<double>(j, "snr_db", c.snr_db, "");
    c.rice_factor = get_field<double>(j, "rice_factor", c.rice_factor, "");
    c.trials = get_field<std::size_t>(j, "trials", c.trials, "");
    c.seed = get_field<std::uint64_t>(j, "seed", c.seed, "");
    c.scheme = parse_scheme(get_field<std::string>(j, "scheme", to_string(c.scheme), ""));

    if (auto p = j.find("collision_policy"); p != j.end() && !p->is_null())
    {
        try
        {
            if (p->is_string())
                c.collision_policy.kind = parse_policy(p->get<std::string>());
            else if (p->is_object())
            {
                reject_unknown(*p, {"kind", "keeper"}, "collision_policy.");
                c.collision_policy.kind = parse_policy(
                    get_field<std::string>(*p, "kind", to_string(c.collision_policy.kind), "collision_policy."));
                c.collision_policy.keeper = parse_keeper_rule(get_field<std::string>(
                    *p, "keeper", to_string(c.collision_policy.keeper), "collision_policy."));
            }
            else
                throw ConfigError("field 'collision_policy' must be a string or an object");
        }
        catch (const InvalidArgument &e)
        {
            throw ConfigError(e.what());
        }
    }

    if (auto s = j.find("sweep"); s != j.end() && !s->is_null())
    {
        if (!s->is_object())
            throw ConfigError("field 'sweep' must be an object");
        reject_unknown(*s, {"param", "values"}, "sweep.");
        SweepSpec spec;
        spec.param = get_field<std::string>(*s, "param", "", "sweep.");
        spec.values = get_field<std::vector<double>>(*s, "values", {}, "sweep.");
        c.sweep = spec;
    }
    c.validate();
    return c;
}

} // namespace

ExperimentConfig config_from_json_text(const std::string &text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try
    {
        return config_from_json_text(buf.str());
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string config_to_json_text(const ExperimentConfig &config)
{
    return to_json(config).dump(2);
}

void apply_override(ExperimentConfig &config, const std::string &assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "' is not KEY=VALUE");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);

    json value;
    try
    {
        value = json::parse(text);
    }
    catch (const json::parse_error &)
    {
        value = text;
    }

    json j = to_json(config);
    std::string head = key;
    std::string tail;
    if (auto dot = key.find('.'); dot != std::string::npos)
    {
        head = key.substr(0, dot);
        tail = key.substr(dot + 1);
    }
    static const std::set<std::string> declared{"m", "grid", "u", "k", "t", "snr_db", "rice_factor",
                                                "trials", "seed", "scheme", "collision_policy", "sweep"};
    if (!declared.count(head))
        throw ConfigError("override targets undeclared field '" + key + "'");
    if (tail.empty())
        j[head] = value;
    else
    {
        static const std::set<std::string> nested{"grid.n1", "grid.n2", "grid.w1", "grid.w2",
                                                  "collision_policy.kind", "collision_policy.keeper",
                                                  "sweep.param", "sweep.values"};
        if (!nested.count(key))
            throw ConfigError("override targets undeclared field '" + key + "'");
        if (!j.contains(head))
            j[head] = json::object();
        j[head][tail] = value;
    }
    config = from_json(j);
}

} // namespace cpsc
