// SPDX-License-Identifier: Apache-2.0
//
// tcd - transmit-correlation diversity toolkit for multiuser MIMO capacity analysis
// Copyright (C) 2026 the tcd contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed
// under the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR
// CONDITIONS OF ANY KIND, either express or implied. See the License for the
// specific language governing permissions and limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "capacity.hpp"
#include "errors.hpp"
#include "one_ring.hpp"
#include "pilot.hpp"
#include "serialize.hpp"
#include "version.hpp"

namespace tcd
{

// A declarative description of one experiment run. Fields left at their
// defaults are filled from per-experiment presets; an explicit value always
// wins. Angles are in degrees, SNR in dB.
struct experiment_config
{
    std::string experiment = "custom";

    system_geometry geometry{};
    bool has_geometry = false;

    std::vector<double> snr_grid_db;
    std::vector<int> k_grid;
    int trials = 2000;
    std::uint64_t seed = 1;
    std::string out_path;

    // One-ring draw ranges for non-unitary user populations.
    double theta_lo_deg = std::numeric_limits<double>::quiet_NaN();
    double theta_hi_deg = std::numeric_limits<double>::quiet_NaN();
    double delta_lo_deg = std::numeric_limits<double>::quiet_NaN();
    double delta_hi_deg = std::numeric_limits<double>::quiet_NaN();
    double spacing = 0.5;

    // Per-group eigenvalue rows for unitary ensembles.
    std::vector<std::vector<double>> profiles;

    // Loading ratio and group count overrides for the pilot experiments.
    double mu = std::numeric_limits<double>::quiet_NaN();
    int g_override = 0;
};

inline void validate(const experiment_config& cfg)
{
    if (cfg.trials < 0)
        throw config_error("config: trials must be nonnegative");
    for (size_t i = 1; i < cfg.snr_grid_db.size(); ++i)
        if (!(cfg.snr_grid_db[i] > cfg.snr_grid_db[i - 1]))
            throw config_error("config: snr grid must be strictly ascending");
    for (size_t i = 1; i < cfg.k_grid.size(); ++i)
        if (cfg.k_grid[i] <= cfg.k_grid[i - 1])
            throw config_error("config: K grid must be strictly ascending");
    for (int k : cfg.k_grid)
        if (k < 1)
            throw config_error("config: K grid entries must be positive");
}

inline experiment_config config_from_json(const nlohmann::json& j)
{
    // A misspelled key would otherwise be ignored and silently leave its
    // setting at the default, so reject anything not in the schema.
    static const char* const known[] = {"experiment", "geometry", "snr_db", "k_grid",
                                        "trials",     "seed",     "out",    "theta_deg",
                                        "delta_deg",  "spacing",  "profiles", "mu", "g"};
    for (const auto& item : j.items())
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return item.key() == k; }) == std::end(known))
            throw config_error("config: unknown key \"" + item.key() + "\"");
    if (j.contains("geometry"))
        for (const auto& item : j.at("geometry").items())
            if (item.key() != "m" && item.key() != "k" && item.key() != "g" &&
                item.key() != "r" && item.key() != "tc" && item.key() != "t")
                throw config_error("config: unknown geometry key \"" + item.key() + "\"");

    experiment_config cfg;
    try
    {
        cfg.experiment = j.value("experiment", std::string("custom"));
        if (j.contains("geometry"))
        {
            const auto& g = j.at("geometry");
            cfg.geometry.m = g.value("m", 1);
            cfg.geometry.k = g.value("k", 1);
            cfg.geometry.g = g.value("g", 1);
            cfg.geometry.r = g.value("r", 1);
            cfg.geometry.tc = g.value("tc", 1);
            cfg.geometry.t = g.value("t", 1);
            cfg.has_geometry = true;
        }
        if (j.contains("snr_db"))
            cfg.snr_grid_db = j.at("snr_db").get<std::vector<double>>();
        if (j.contains("k_grid"))
            cfg.k_grid = j.at("k_grid").get<std::vector<int>>();
        cfg.trials = j.value("trials", cfg.trials);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.out_path = j.value("out", cfg.out_path);
        if (j.contains("theta_deg"))
        {
            const auto v = j.at("theta_deg").get<std::vector<double>>();
            if (v.size() != 2)
                throw config_error("config: theta_deg must be [lo, hi]");
            cfg.theta_lo_deg = v[0];
            cfg.theta_hi_deg = v[1];
        }
        if (j.contains("delta_deg"))
        {
            const auto v = j.at("delta_deg").get<std::vector<double>>();
            if (v.size() != 2)
                throw config_error("config: delta_deg must be [lo, hi]");
            cfg.delta_lo_deg = v[0];
            cfg.delta_hi_deg = v[1];
        }
        cfg.spacing = j.value("spacing", cfg.spacing);
        if (j.contains("profiles"))
            cfg.profiles = j.at("profiles").get<std::vector<std::vector<double>>>();
        cfg.mu = j.value("mu", cfg.mu);
        cfg.g_override = j.value("g", cfg.g_override);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw config_error(std::string("config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

inline nlohmann::json to_json(const experiment_config& cfg)
{
    nlohmann::json j;
    j["experiment"] = cfg.experiment;
    if (cfg.has_geometry)
        j["geometry"] = {{"m", cfg.geometry.m}, {"k", cfg.geometry.k}, {"g", cfg.geometry.g},
                         {"r", cfg.geometry.r}, {"tc", cfg.geometry.tc}, {"t", cfg.geometry.t}};
    if (!cfg.snr_grid_db.empty())
        j["snr_db"] = cfg.snr_grid_db;
    if (!cfg.k_grid.empty())
        j["k_grid"] = cfg.k_grid;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    if (!cfg.out_path.empty())
        j["out"] = cfg.out_path;
    if (!std::isnan(cfg.theta_lo_deg))
        j["theta_deg"] = {cfg.theta_lo_deg, cfg.theta_hi_deg};
    if (!std::isnan(cfg.delta_lo_deg))
        j["delta_deg"] = {cfg.delta_lo_deg, cfg.delta_hi_deg};
    j["spacing"] = cfg.spacing;
    if (!cfg.profiles.empty())
        j["profiles"] = cfg.profiles;
    if (!std::isnan(cfg.mu))
        j["mu"] = cfg.mu;
    if (cfg.g_override > 0)
        j["g"] = cfg.g_override;
    return j;
}

// One data point of an experiment: a named series, an abscissa, a value, and
// the Monte Carlo uncertainty when the point was simulated (0 for analytic
// rows, along with trials = 0).
struct result_row
{
    std::string series;
    std::string x_name;
    double x = 0.0;
    double value = 0.0;
    double std_error = 0.0;
    int trials = 0;
};

struct result_table
{
    std::string experiment;
    std::uint64_t seed = 0;
    std::string version = TCD_VERSION;
    std::vector<result_row> rows;

    void add(std::string series, std::string x_name, double x, double value,
             double std_error = 0.0, int trials = 0)
    {
        rows.push_back({std::move(series), std::move(x_name), x, value, std_error, trials});
    }

    // Every row repeats the experiment id, master seed, and code version so
    // the CSV is self-describing with no side channel.
    std::string to_csv() const
    {
        std::string out = "experiment,series,x_name,x,value,std_error,trials,seed,version\n";
        char buf[160];
        for (const auto& r : rows)
        {
            std::snprintf(buf, sizeof buf, ",%.12g,%.12g,%.12g,%d,", r.x, r.value, r.std_error,
                          r.trials);
            out += experiment + "," + r.series + "," + r.x_name + buf
                   + std::to_string(seed) + "," + version + "\n";
        }
        return out;
    }
};

// Writes the table as CSV plus a JSON manifest echoing the configuration,
// both atomically.
inline void write_result_csv(const result_table& table, const experiment_config& cfg,
                             const std::string& path)
{
    write_text_atomic(path, table.to_csv());
    nlohmann::json manifest;
    manifest["schema"] = "tcd-result/1";
    manifest["experiment"] = table.experiment;
    manifest["seed"] = table.seed;
    manifest["version"] = table.version;
    manifest["rows"] = table.rows.size();
    manifest["config"] = to_json(cfg);
    write_text_atomic(path + ".manifest.json", manifest.dump(2) + "\n");
}

namespace detail
{

inline constexpr double deg = 3.14159265358979323846 / 180.0;

// Structure draws must not share a Philox key with the fading trials, which
// consume streams (seed, 0..trials-1).
inline std::uint64_t structure_seed(std::uint64_t seed)
{
    return seed ^ 0x9E3779B97F4A7C15ull;
}

} // namespace detail

// Per-user one-ring covariances with independently drawn angle of departure
// and angular spread, decomposed to sampling form. User i draws from stream
// 2^32 + i so the draws never collide with fading trials, which use streams
// below 2^32.
inline std::vector<group_eigen_structure> draw_one_ring_users(int m, int k, double theta_lo_deg,
                                                              double theta_hi_deg,
                                                              double delta_lo_deg,
                                                              double delta_hi_deg, double spacing,
                                                              std::uint64_t seed)
{
    std::vector<group_eigen_structure> users;
    users.reserve(k);
    for (int i = 0; i < k; ++i)
    {
        philox_rng rng(seed, (1ull << 32) + static_cast<std::uint64_t>(i));
        one_ring_params p;
        p.theta = (theta_lo_deg + rng.uniform() * (theta_hi_deg - theta_lo_deg)) * detail::deg;
        p.delta = (delta_lo_deg + rng.uniform() * (delta_hi_deg - delta_lo_deg)) * detail::deg;
        p.spacing = spacing;
        users.push_back(eigen_decompose(one_ring_covariance(m, p)));
    }
    return users;
}

namespace detail
{

inline std::string profile_label(const std::vector<double>& row)
{
    std::string s = "(";
    char buf[32];
    for (size_t i = 0; i < row.size(); ++i)
    {
        std::snprintf(buf, sizeof buf, "%g", row[i]);
        s += buf;
        if (i + 1 < row.size())
            s += ",";
    }
    return s + ")";
}

inline eigenvalue_profile replicate_profile(const std::vector<double>& row, int g)
{
    eigenvalue_profile p;
    p.groups.assign(g, row);
    validate(p);
    return p;
}

} // namespace detail

// Sum capacity vs SNR for the unitary ensembles of the small-system study,
// with the high-SNR analytic sandwich overlaid. Geometry presets: (M=8, K=8,
// G=4, r=2), (M=16, K=8, G=4, r=2), (M=16, K=16, G=4, r=4), each with its two
// eigenvalue profiles; a zero-trial run emits the analytic rows only.
inline result_table run_fig2(const experiment_config& cfg)
{
    validate(cfg);
    system_geometry geo = cfg.has_geometry ? cfg.geometry : system_geometry{8, 8, 4, 2, 1, 1};
    geo.tc = 1;
    geo.t = 1;

    std::vector<std::vector<double>> profiles = cfg.profiles;
    if (profiles.empty())
    {
        if (geo.m == 8 && geo.k == 8 && geo.g == 4 && geo.r == 2)
            profiles = {{4, 4}, {7, 1}};
        else if (geo.m == 16 && geo.k == 8 && geo.g == 4 && geo.r == 2)
            profiles = {{8, 8}, {12, 4}};
        else if (geo.m == 16 && geo.k == 16 && geo.g == 4 && geo.r == 4)
            profiles = {{4, 4, 4, 4}, {7, 5, 3, 1}};
        else
            throw config_error("fig2: unknown geometry preset and no profiles given");
    }
    validate(geo);

    std::vector<double> snr = cfg.snr_grid_db;
    if (snr.empty())
        snr = {0, 5, 10, 15, 20, 25, 30};

    result_table table;
    table.experiment = "fig2";
    table.seed = cfg.seed;
    for (const auto& row : profiles)
    {
        const std::string label = detail::profile_label(row);
        const eigenvalue_profile profile = detail::replicate_profile(row, geo.g);
        for (double s : snr)
        {
            const bound_pair b = highsnr_bounds(geo, profile, snr_db_to_power(s));
            table.add("upper:lambda=" + label, "snr_db", s, b.upper);
            table.add("lower:lambda=" + label, "snr_db", s, b.lower);
        }
        if (cfg.trials >= 2)
        {
            const unitary_ensemble ens = synthesize_unitary_ensemble(
                geo.m, geo.g, geo.r, {row}, detail::structure_seed(cfg.seed));
            const channel_population pop = ensemble_population(ens, geo.kp());
            for (double s : snr)
            {
                const capacity_estimate est = ergodic_sum_capacity(
                    pop, s, cfg.trials, cfg.seed, capacity_mode::per_group);
                table.add("simul:lambda=" + label, "snr_db", s, est.mean, est.std_error,
                          est.trials);
            }
        }
    }
    return table;
}

// Sum capacity vs SNR at M=8 for K in {4, 32}: i.i.d. baseline, the unitary
// flat ensemble, and a non-unitary population of per-user one-ring draws.
inline result_table run_fig3(const experiment_config& cfg)
{
    validate(cfg);
    const int m = 8, g = 4, r = 2;
    std::vector<int> ks = cfg.k_grid.empty() ? std::vector<int>{4, 32} : cfg.k_grid;
    std::vector<double> snr = cfg.snr_grid_db;
    if (snr.empty())
        snr = {0, 5, 10, 15, 20, 25, 30};
    const double th_lo = std::isnan(cfg.theta_lo_deg) ? -60.0 : cfg.theta_lo_deg;
    const double th_hi = std::isnan(cfg.theta_hi_deg) ? 60.0 : cfg.theta_hi_deg;
    const double de_lo = std::isnan(cfg.delta_lo_deg) ? 5.0 : cfg.delta_lo_deg;
    const double de_hi = std::isnan(cfg.delta_hi_deg) ? 10.0 : cfg.delta_hi_deg;
    if (cfg.trials < 2)
        throw config_error("fig3: needs at least 2 trials");

    result_table table;
    table.experiment = "fig3";
    table.seed = cfg.seed;
    const unitary_ensemble ens =
        synthesize_unitary_ensemble(m, g, r, {{4, 4}}, detail::structure_seed(cfg.seed));
    for (int k : ks)
    {
        if (k % g != 0)
            throw config_error("fig3: K must be a multiple of the group count");
        const channel_population iid = iid_population(m, k);
        const channel_population uni = ensemble_population(ens, k / g);
        const channel_population ring = per_user_population(draw_one_ring_users(
            m, k, th_lo, th_hi, de_lo, de_hi, cfg.spacing, cfg.seed));
        const std::string suffix = ":K=" + std::to_string(k);
        for (double s : snr)
        {
            const auto ei = ergodic_sum_capacity(iid, s, cfg.trials, cfg.seed);
            table.add("iid" + suffix, "snr_db", s, ei.mean, ei.std_error, ei.trials);
            const auto eu =
                ergodic_sum_capacity(uni, s, cfg.trials, cfg.seed, capacity_mode::per_group);
            table.add("unitary" + suffix, "snr_db", s, eu.mean, eu.std_error, eu.trials);
            const auto er = ergodic_sum_capacity(ring, s, cfg.trials, cfg.seed);
            table.add("one_ring" + suffix, "snr_db", s, er.mean, er.std_error, er.trials);
        }
    }
    return table;
}

// Sum capacity vs user count at 10 dB for (M=4, G=2) and (M=8, G=4), with the
// large-K analytic overlay on the M=4 family.
inline result_table run_fig4(const experiment_config& cfg)
{
    validate(cfg);
    std::vector<int> ks = cfg.k_grid.empty() ? std::vector<int>{8, 32, 128, 512, 2048}
                                             : cfg.k_grid;
    const double snr = cfg.snr_grid_db.empty() ? 10.0 : cfg.snr_grid_db.front();
    const double th_lo = std::isnan(cfg.theta_lo_deg) ? -60.0 : cfg.theta_lo_deg;
    const double th_hi = std::isnan(cfg.theta_hi_deg) ? 60.0 : cfg.theta_hi_deg;
    const double de_lo = std::isnan(cfg.delta_lo_deg) ? 5.0 : cfg.delta_lo_deg;
    const double de_hi = std::isnan(cfg.delta_hi_deg) ? 20.0 : cfg.delta_hi_deg;
    if (cfg.trials < 2)
        throw config_error("fig4: needs at least 2 trials");

    result_table table;
    table.experiment = "fig4";
    table.seed = cfg.seed;
    const std::vector<std::pair<int, int>> families = {{4, 2}, {8, 4}};
    for (auto [m, g] : families)
    {
        const int r = m / g;
        const double flat = static_cast<double>(m) / r;
        const std::vector<double> row(static_cast<size_t>(r), flat);
        const unitary_ensemble ens =
            synthesize_unitary_ensemble(m, g, r, {row}, detail::structure_seed(cfg.seed));
        const std::string suffix = ":M=" + std::to_string(m);
        for (int k : ks)
        {
            if (k % g != 0)
                throw config_error("fig4: K grid entries must be multiples of every group count");
            const auto ei = ergodic_sum_capacity(iid_population(m, k), snr, cfg.trials, cfg.seed);
            table.add("iid" + suffix, "k", k, ei.mean, ei.std_error, ei.trials);
            const auto eu = ergodic_sum_capacity(ensemble_population(ens, k / g), snr, cfg.trials,
                                                 cfg.seed, capacity_mode::per_group);
            table.add("unitary" + suffix, "k", k, eu.mean, eu.std_error, eu.trials);
            const auto er = ergodic_sum_capacity(
                per_user_population(draw_one_ring_users(
                    m, k, th_lo, th_hi, de_lo, de_hi, cfg.spacing, cfg.seed)),
                snr, cfg.trials, cfg.seed);
            table.add("one_ring" + suffix, "k", k, er.mean, er.std_error, er.trials);

            if (m == 4 && r < k / g)
            {
                system_geometry geo{m, k, g, r, 1, 1};
                table.add("large_k_analytic" + suffix, "k", k,
                          largeK_capacity(geo, detail::replicate_profile(row, g),
                                          snr_db_to_power(snr), k));
            }
        }
    }
    return table;
}

// Pre-log ceilings vs min(M, K) for G in {1, 4, 8} and Tc in {32, 100}: the
// deterministic multiplexing-gain picture, no simulation involved.
inline result_table run_fig_mux(const experiment_config& cfg)
{
    validate(cfg);
    const std::vector<int> tcs = {32, 100};
    const std::vector<int> gs = {1, 4, 8};

    const auto grid = [&cfg](long long top) {
        std::vector<int> xs = cfg.k_grid;
        if (xs.empty())
        {
            for (int x = 1; x <= std::min<long long>(top, 256); ++x)
                xs.push_back(x);
            for (long long x = 512; x < top; x *= 2)
                xs.push_back(static_cast<int>(x));
            if (top > 256)
                xs.push_back(static_cast<int>(top));
        }
        return xs;
    };

    result_table table;
    table.experiment = "fig_mux";
    table.seed = cfg.seed;
    for (int tc : tcs)
    {
        for (int x : grid(4ll * tc))
            table.add("iid:Tc=" + std::to_string(tc), "min_mk", x,
                      prelog_iid(x, x, tc).prelog);
        for (int g : gs)
            for (int x : grid(4ll * tc * g))
                table.add("tcd:G=" + std::to_string(g) + ",Tc=" + std::to_string(tc), "min_mk",
                          x, prelog_tcd(x, x, g, tc).prelog);
    }
    return table;
}

namespace detail
{

// Geometry of the widened pilot-aided study at loading mu = M/K >= 1 with
// r = M/G modes per group.
inline system_geometry pilot_geometry(double mu, int k, int g, int tc)
{
    const double m_real = mu * k;
    const int m = static_cast<int>(std::llround(m_real));
    if (std::abs(m_real - m) > 1e-9)
        throw config_error("pilot experiments: mu * K must be an integer antenna count");
    if (m % g != 0 || k % g != 0)
        throw config_error("pilot experiments: M and K must be multiples of G");
    system_geometry geo{m, k, g, m / g, tc, 1};
    validate(geo);
    return geo;
}

} // namespace detail

// The system-II objective f(q) against the total eigenmode count qG, with the
// argmax and the conventional dimensioning M* marked, at M=200, Tc=64, G=10
// for loadings mu in {2, 5}.
inline result_table run_fig_fq(const experiment_config& cfg)
{
    validate(cfg);
    const int g = cfg.g_override > 0 ? cfg.g_override : 10;
    const int m = cfg.has_geometry ? cfg.geometry.m : 200;
    const int tc = cfg.has_geometry ? cfg.geometry.tc : 64;
    std::vector<double> mus = std::isnan(cfg.mu) ? std::vector<double>{2, 5}
                                                 : std::vector<double>{cfg.mu};
    std::vector<double> snr = cfg.snr_grid_db.empty() ? std::vector<double>{30.0}
                                                      : cfg.snr_grid_db;

    result_table table;
    table.experiment = "fig_fq";
    table.seed = cfg.seed;
    char mu_buf[32];
    for (double mu : mus)
    {
        if (!(mu > 1.0))
            throw config_error("fig_fq: the widened system is defined for mu > 1");
        const double k_real = m / mu;
        const int k = static_cast<int>(std::llround(k_real));
        if (std::abs(k_real - k) > 1e-9 || k % g != 0 || m % g != 0)
            throw config_error("fig_fq: M/mu must be a user count divisible by G");
        system_geometry geo{m, k, g, m / g, tc, 1};
        validate(geo);
        std::snprintf(mu_buf, sizeof mu_buf, "%g", mu);
        for (double s : snr)
        {
            const double p = snr_db_to_power(s);
            const system2_result res = system2_optimize(geo, p);
            const std::string tag = std::string(":mu=") + mu_buf + ",snr=" + std::to_string(
                static_cast<int>(s));
            for (const auto& [q, f] : res.f_values)
                table.add("f" + tag, "m_p2", static_cast<double>(q) * g, f);
            table.add("argmax" + tag, "m_p2", res.m_p2_star, res.f_opt);
            const long long tcg = static_cast<long long>(tc) * g;
            const int m_star = static_cast<int>(std::min<long long>(std::min(m, k), tcg / 2));
            table.add("m_star" + tag, "m_p2", m_star,
                      system2_objective(geo, p, static_cast<double>(m_star) / g));
        }
    }
    return table;
}

// Sum-rate upper bounds of pilot-aided systems I and II vs min(M, K) at
// loading mu (default 2) and G groups (default 10), for Tc in {32, 128}.
inline result_table run_fig_pilot(const experiment_config& cfg)
{
    validate(cfg);
    const double mu = std::isnan(cfg.mu) ? 2.0 : cfg.mu;
    const int g = cfg.g_override > 0 ? cfg.g_override : 10;
    std::vector<int> tcs = {32, 128};
    if (cfg.has_geometry && cfg.geometry.tc > 1)
        tcs = {cfg.geometry.tc};
    std::vector<int> ks = cfg.k_grid;
    if (ks.empty())
        for (int k = 20; k <= 200; k += 20)
            ks.push_back(k);
    const double snr = cfg.snr_grid_db.empty() ? 30.0 : cfg.snr_grid_db.front();
    const double p = snr_db_to_power(snr);

    result_table table;
    table.experiment = "fig_pilot";
    table.seed = cfg.seed;
    for (int tc : tcs)
    {
        const std::string tag = ":Tc=" + std::to_string(tc);
        for (int k : ks)
        {
            const system_geometry geo = detail::pilot_geometry(mu, k, g, tc);
            const eigenvalue_profile profile =
                flat_profile(g, geo.r, static_cast<double>(geo.m) / geo.r);
            const int qs = q_star(geo.r, geo.kp(), tc);
            const pilot_bound sys1 = pilot_bound_largeG(geo, profile, p);
            table.add("system1" + tag, "min_mk", std::min(geo.m, k),
                      static_cast<double>(qs) * g * sys1.bounds.center);
            if (geo.m > geo.k)
            {
                const system2_result res = system2_optimize(geo, p);
                if (res.mu_p2 > 1.0)
                {
                    const pilot_bound sys2 =
                        pilot_bound_system2(geo, profile, p, res.m_p2_star);
                    table.add("system2" + tag, "min_mk", std::min(geo.m, k),
                              k * sys2.bounds.center);
                }
            }
        }
    }
    return table;
}

// Dispatch by experiment id.
inline result_table run_experiment(const experiment_config& cfg)
{
    if (cfg.experiment == "fig2")
        return run_fig2(cfg);
    if (cfg.experiment == "fig3")
        return run_fig3(cfg);
    if (cfg.experiment == "fig4")
        return run_fig4(cfg);
    if (cfg.experiment == "fig_mux")
        return run_fig_mux(cfg);
    if (cfg.experiment == "fig_fq")
        return run_fig_fq(cfg);
    if (cfg.experiment == "fig_pilot")
        return run_fig_pilot(cfg);
    throw config_error("unknown experiment id: " + cfg.experiment);
}

} // namespace tcd
