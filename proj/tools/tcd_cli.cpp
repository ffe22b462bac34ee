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

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tcd.hpp>

namespace
{

// CSV or JSON text goes to --out (atomically) when given, stdout otherwise.
void emit(const std::string& text, const std::string& out_path)
{
    if (out_path.empty())
        std::cout << text;
    else
        tcd::write_text_atomic(out_path, text);
}

std::string format_params(const std::vector<std::pair<std::string, std::string>>& kv)
{
    std::string s;
    for (const auto& [k, v] : kv)
    {
        if (!s.empty())
            s += ";";
        s += k + "=" + v;
    }
    return s;
}

std::string num(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"tcd: capacity, bounds, and pilot dimensioning for transmit-correlated "
                 "multiuser MIMO"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::uint64_t seed = 1;
    int trials = 2000;
    std::string out_path;
    std::string config_path;
    auto* seed_opt = app.add_option("--seed", seed, "master RNG seed")->capture_default_str();
    auto* trials_opt =
        app.add_option("--trials", trials, "Monte Carlo trials")->capture_default_str();
    auto* out_opt = app.add_option("--out", out_path, "output file (stdout if omitted)");
    app.add_option("--config", config_path, "JSON experiment config file");

    // cov: one-ring covariance or synthesized unitary ensemble, as JSON.
    auto* cov = app.add_subcommand("cov", "generate a covariance matrix or unitary ensemble");
    std::string cov_model = "one_ring";
    int m = 8, g = 4, r = 2;
    double theta_deg = 30.0, delta_deg = 10.0, spacing = 0.5;
    std::vector<double> profile;
    bool spectrum = false;
    cov->add_option("--model", cov_model, "one_ring | unitary")
        ->check(CLI::IsMember({"one_ring", "unitary"}));
    cov->add_option("--m", m, "transmit antennas");
    cov->add_option("--g", g, "groups (unitary model)");
    cov->add_option("--r", r, "eigenmodes per group (unitary model)");
    cov->add_option("--theta-deg", theta_deg, "angle of departure (one-ring)");
    cov->add_option("--delta-deg", delta_deg, "angular spread (one-ring)");
    cov->add_option("--spacing", spacing, "antenna spacing in wavelengths");
    cov->add_option("--profile", profile, "per-group eigenvalues, comma separated")
        ->delimiter(',');
    cov->add_flag("--spectrum", spectrum,
                  "also print the asymptotic eigenvalue spectrum summary (one-ring)");

    // capacity: ergodic DPC sum capacity of a channel population.
    auto* cap = app.add_subcommand("capacity", "Monte Carlo ergodic sum capacity");
    std::string population = "iid";
    int k = 8;
    std::vector<double> snr_db = {10.0};
    std::string mode = "full";
    std::vector<double> theta_range = {-60.0, 60.0};
    std::vector<double> delta_range = {5.0, 10.0};
    cap->add_option("--population", population, "iid | unitary | one_ring")
        ->check(CLI::IsMember({"iid", "unitary", "one_ring"}));
    cap->add_option("--m", m, "transmit antennas");
    cap->add_option("--k", k, "users");
    cap->add_option("--g", g, "groups");
    cap->add_option("--r", r, "eigenmodes per group");
    cap->add_option("--profile", profile, "per-group eigenvalues (unitary)")->delimiter(',');
    cap->add_option("--snr", snr_db, "SNR points in dB, comma separated")->delimiter(',');
    cap->add_option("--mode", mode, "full | per_group")
        ->check(CLI::IsMember({"full", "per_group"}));
    cap->add_option("--theta-range", theta_range, "one-ring AoD range in degrees")
        ->delimiter(',')
        ->expected(2);
    cap->add_option("--delta-range", delta_range, "one-ring spread range in degrees")
        ->delimiter(',')
        ->expected(2);
    cap->add_option("--spacing", spacing, "antenna spacing in wavelengths");

    // bounds: analytic asymptotes.
    auto* bnd = app.add_subcommand("bounds", "closed-form capacity bounds");
    std::string regime = "highsnr";
    int tc = 1;
    double mu = 1.0, lambda_min = 1.0;
    std::string bpop = "correlated";
    bnd->add_option("--regime", regime, "highsnr | iid | large_system | large_k | coop")
        ->check(CLI::IsMember({"highsnr", "iid", "large_system", "large_k", "coop"}));
    bnd->add_option("--m", m, "transmit antennas");
    bnd->add_option("--k", k, "users");
    bnd->add_option("--g", g, "groups");
    bnd->add_option("--r", r, "eigenmodes per group");
    bnd->add_option("--profile", profile, "per-group eigenvalues")->delimiter(',');
    bnd->add_option("--snr", snr_db, "SNR points in dB")->delimiter(',');
    bnd->add_option("--mu", mu, "loading ratio M/K (large_system)");
    bnd->add_option("--lambda-min", lambda_min, "smallest eigenvalue (large_system)");
    bnd->add_option("--population", bpop, "iid | correlated (large_system)")
        ->check(CLI::IsMember({"iid", "correlated"}));

    // pilot: dimensioning table and training simulation.
    auto* pil = app.add_subcommand("pilot", "pilot dimensioning and training simulation");
    int t_classes = 1;
    std::string train;
    double rho_tr = 10.0;
    pil->add_option("--m", m, "transmit antennas");
    pil->add_option("--k", k, "users");
    pil->add_option("--g", g, "groups");
    pil->add_option("--t", t_classes, "user classes");
    pil->add_option("--tc", tc, "coherence block length in symbols");
    pil->add_option("--r", r, "eigenmodes per group (training / system2)");
    pil->add_option("--snr", snr_db, "SNR points in dB (system2 search)")->delimiter(',');
    pil->add_option("--train", train, "simulate training rounds: fdd | tdd")
        ->check(CLI::IsMember({"fdd", "tdd"}));
    pil->add_option("--rho-tr", rho_tr, "training power (linear)");
    pil->add_option("--profile", profile, "per-group eigenvalues (training)")->delimiter(',');

    // figure: preset experiment runner.
    auto* fig = app.add_subcommand("figure", "run a preset experiment");
    std::string fig_id;
    fig->add_option("id", fig_id, "fig2 | fig3 | fig4 | fig_mux | fig_fq | fig_pilot");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        tcd::experiment_config cfg;
        if (!config_path.empty())
            cfg = tcd::config_from_json(tcd::load_json_file(config_path));
        if (seed_opt->count())
            cfg.seed = seed;
        if (trials_opt->count())
            cfg.trials = trials;
        if (out_opt->count())
            cfg.out_path = out_path;
        seed = cfg.seed;
        trials = cfg.trials;
        out_path = cfg.out_path;

        if (*cov)
        {
            if (cov_model == "one_ring")
            {
                tcd::one_ring_params p{theta_deg * tcd::detail::deg,
                                       delta_deg * tcd::detail::deg, spacing};
                const tcd::covariance_matrix c = tcd::one_ring_covariance(m, p);
                emit(tcd::to_json(c).dump(2) + "\n", out_path);
                if (spectrum)
                {
                    const tcd::eigenvalue_spectrum spec = tcd::one_ring_spectrum(p);
                    const tcd::szego_rate rate = tcd::szego_logdet_rate(spec);
                    std::cout << "support_measure," << num(spec.measure) << "\n"
                              << "szego_rate_raw," << num(rate.raw) << "\n"
                              << "szego_rate_normalized," << num(rate.normalized) << "\n";
                }
            }
            else
            {
                std::vector<double> row = profile;
                if (row.empty())
                    row.assign(static_cast<size_t>(r), static_cast<double>(m) / r);
                const tcd::unitary_ensemble ens =
                    tcd::synthesize_unitary_ensemble(m, g, r, {row}, seed);
                emit(tcd::to_json(ens).dump(2) + "\n", out_path);
            }
        }
        else if (*cap)
        {
            tcd::channel_population pop;
            if (population == "iid")
                pop = tcd::iid_population(m, k);
            else if (population == "unitary")
            {
                std::vector<double> row = profile;
                if (row.empty())
                    row.assign(static_cast<size_t>(r), static_cast<double>(m) / r);
                if (g < 1 || k % g != 0)
                    throw tcd::config_error("capacity: K must be a multiple of G");
                pop = tcd::ensemble_population(
                    tcd::synthesize_unitary_ensemble(m, g, r, {row},
                                                     tcd::detail::structure_seed(seed)),
                    k / g);
            }
            else
                pop = tcd::per_user_population(tcd::draw_one_ring_users(
                    m, k, theta_range[0], theta_range[1], delta_range[0], delta_range[1],
                    spacing, seed));
            const tcd::capacity_mode cm = mode == "per_group" ? tcd::capacity_mode::per_group
                                                              : tcd::capacity_mode::full;
            std::string csv = "snr_db,K,M,G,r,mode,mean_bps_hz,std_error,trials,seed\n";
            for (double s : snr_db)
            {
                const tcd::capacity_estimate est =
                    tcd::ergodic_sum_capacity(pop, s, trials, seed, cm);
                csv += num(s) + "," + std::to_string(k) + "," + std::to_string(m) + ","
                       + std::to_string(population == "iid" ? 1 : g) + ","
                       + std::to_string(population == "iid" ? m : r) + "," + mode + ","
                       + num(est.mean) + "," + num(est.std_error) + ","
                       + std::to_string(est.trials) + "," + std::to_string(seed) + "\n";
            }
            emit(csv, out_path);
        }
        else if (*bnd)
        {
            std::string csv = "regime,params,lower,upper,center\n";
            const auto add_row = [&csv](const std::string& reg, const std::string& params,
                                        double lo, double up, double center) {
                csv += reg + "," + params + "," + num(lo) + "," + num(up) + "," + num(center)
                       + "\n";
            };
            std::vector<double> row = profile;
            if (row.empty())
                row.assign(static_cast<size_t>(r), static_cast<double>(m) / r);
            for (double s : snr_db)
            {
                const double p = tcd::snr_db_to_power(s);
                const std::string base = format_params({{"m", std::to_string(m)},
                                                        {"k", std::to_string(k)},
                                                        {"g", std::to_string(g)},
                                                        {"r", std::to_string(r)},
                                                        {"snr_db", num(s)}});
                if (regime == "highsnr")
                {
                    tcd::system_geometry geo{m, k, g, r, 1, 1};
                    tcd::eigenvalue_profile prof;
                    prof.groups.assign(static_cast<size_t>(g), row);
                    const tcd::bound_pair b = tcd::highsnr_bounds(geo, prof, p);
                    add_row(b.regime, base, b.lower, b.upper, b.center);
                }
                else if (regime == "iid")
                {
                    const double v = tcd::iid_highsnr(m, k, p);
                    add_row("iid_highsnr", base, v, v, v);
                }
                else if (regime == "large_system")
                {
                    const tcd::bound_pair b = tcd::large_system_ratio(
                        mu, g, lambda_min, p,
                        bpop == "iid" ? tcd::fading_population::iid
                                      : tcd::fading_population::correlated);
                    add_row(b.regime,
                            format_params({{"mu", num(mu)},
                                           {"g", std::to_string(g)},
                                           {"lambda_min", num(lambda_min)},
                                           {"snr_db", num(s)}}),
                            b.lower, b.upper, b.center);
                }
                else if (regime == "large_k")
                {
                    tcd::system_geometry geo{m, k, g, r, 1, 1};
                    tcd::eigenvalue_profile prof;
                    prof.groups.assign(static_cast<size_t>(g), row);
                    const double v = tcd::largeK_capacity(geo, prof, p, k);
                    add_row("large_k", base, v, v, v);
                }
                else
                {
                    tcd::system_geometry geo{m, k, g, r, 1, 1};
                    tcd::eigenvalue_profile prof;
                    prof.groups.assign(static_cast<size_t>(g), row);
                    const double v = tcd::intra_group_coop_capacity(geo, prof, p);
                    add_row("intra_group_coop", base, v, v, v);
                }
            }
            emit(csv, out_path);
        }
        else if (*pil)
        {
            tcd::system_geometry geo{m, k, g, r, tc, t_classes};
            validate(geo);
            if (!train.empty())
            {
                const tcd::training_scheme scheme = train == "fdd"
                                                        ? tcd::training_scheme::fdd_prebeamformed
                                                        : tcd::training_scheme::tdd_reciprocal;
                std::vector<double> row = profile;
                if (row.empty())
                    row.assign(static_cast<size_t>(r), static_cast<double>(m) / r);
                const tcd::unitary_ensemble ens = tcd::synthesize_unitary_ensemble(
                    m, g, r, {row}, tcd::detail::structure_seed(seed));
                std::string csv =
                    "trial,scheme,symbols,rho_tr,mse_empirical,mse_theoretical,leakage\n";
                for (int i = 0; i < trials; ++i)
                {
                    const tcd::training_result res = tcd::simulate_training(
                        ens, geo, rho_tr, seed + static_cast<std::uint64_t>(i), scheme);
                    csv += std::to_string(i) + "," + train + ","
                           + std::to_string(res.symbols) + "," + num(rho_tr) + ","
                           + num(res.mse_empirical) + "," + num(res.mse_theoretical) + ","
                           + num(res.leakage) + "\n";
                }
                emit(csv, out_path);
            }
            else
            {
                std::string csv = "M,K,G,T,Tc,q_star,m_star,prelog,regime\n";
                const int qs = tcd::q_star(r, geo.kp(), tc);
                const auto add_row = [&](const tcd::prelog_result& pr) {
                    csv += std::to_string(m) + "," + std::to_string(k) + ","
                           + std::to_string(g) + "," + std::to_string(t_classes) + ","
                           + std::to_string(tc) + "," + std::to_string(qs) + ","
                           + std::to_string(pr.m_star) + "," + num(pr.prelog) + ","
                           + tcd::to_string(pr.regime) + "\n";
                };
                add_row(tcd::prelog_iid(m, k, tc));
                add_row(tcd::prelog_tcd(m, k, g, tc));
                add_row(tcd::prelog_multiclass(m, k, g, t_classes, tc));
                if (m > k)
                {
                    const double p = tcd::snr_db_to_power(snr_db.front());
                    const tcd::system2_result res = tcd::system2_optimize(geo, p);
                    tcd::prelog_result pr;
                    pr.regime = tcd::prelog_regime::system2;
                    pr.m_star = res.m_p2_star;
                    pr.prelog = res.m_p2_star
                                * (1.0
                                   - static_cast<double>(res.m_p2_star)
                                         / (static_cast<double>(tc) * g));
                    add_row(pr);
                }
                emit(csv, out_path);
            }
        }
        else if (*fig)
        {
            if (!fig_id.empty())
                cfg.experiment = fig_id;
            if (cfg.experiment.empty() || cfg.experiment == "custom")
                throw tcd::config_error("figure: give an experiment id or a config file");
            const tcd::result_table table = tcd::run_experiment(cfg);
            const std::string path =
                out_path.empty() ? cfg.experiment + ".csv" : out_path;
            tcd::write_result_csv(table, cfg, path);
            std::cout << "wrote " << table.rows.size() << " rows to " << path << "\n";
        }
        else
        {
            std::cout << app.help();
        }
    }
    catch (const tcd::convergence_error& e)
    {
        std::cerr << "numerical convergence failure: " << e.what() << "\n";
        return 3;
    }
    catch (const tcd::numerical_error& e)
    {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    catch (const tcd::error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
