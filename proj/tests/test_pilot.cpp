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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include <tcd/pilot.hpp>

TEST_CASE("q_star maximizes the training payoff on small grids")
{
    REQUIRE(tcd::q_star(4, 8, 32) == 4);
    REQUIRE(tcd::q_star(8, 4, 32) == 4);
    REQUIRE(tcd::q_star(8, 8, 6) == 3);
    REQUIRE_THROWS_AS(tcd::q_star(0, 1, 1), tcd::invalid_input);

    // Value optimality: min{q, K'}(Tc - q) at q = q_star beats every feasible
    // training size.
    for (int r = 1; r <= 10; ++r)
        for (int kp = 1; kp <= 10; ++kp)
            for (int tc = 2; tc <= 30; ++tc)
            {
                const int qs = tcd::q_star(r, kp, tc);
                const auto payoff = [&](int q) {
                    return static_cast<long long>(std::min(q, kp)) * (tc - q);
                };
                for (int q = 1; q <= std::min(r, tc); ++q)
                    REQUIRE(payoff(qs) >= payoff(q));
            }
}

TEST_CASE("pre-log ceilings carry exact integer ratios")
{
    const tcd::prelog_result flat = tcd::prelog_iid(16, 16, 32);
    REQUIRE(flat.m_star == 16);
    REQUIRE(flat.num == 16ll * 16);
    REQUIRE(flat.den == 32);
    REQUIRE(flat.prelog == 8.0);

    const tcd::prelog_result grouped = tcd::prelog_tcd(64, 64, 4, 32);
    REQUIRE(grouped.m_star == 64);
    REQUIRE(grouped.num == 64ll * 64);
    REQUIRE(grouped.den == 128);
    REQUIRE(grouped.prelog == 32.0);

    // Saturation: once min(M, K) passes half the (stretched) block, the
    // ceiling locks at Tc/4 and Tc G/4.
    for (int tc : {32, 100})
    {
        const tcd::prelog_result a = tcd::prelog_iid(4 * tc, 4 * tc, tc);
        REQUIRE(4 * a.num == static_cast<long long>(tc) * tc);
        REQUIRE(a.den == tc);
        REQUIRE(a.prelog == tc / 4.0);
        for (int g : {2, 8})
        {
            const tcd::prelog_result b = tcd::prelog_tcd(4 * tc * g, 4 * tc * g, g, tc);
            REQUIRE(b.prelog == tc * g / 4.0);
            // The stretched-to-flat ratio is exactly G at saturation.
            REQUIRE(b.num * a.den == static_cast<long long>(g) * a.num * b.den);
        }
    }
}

TEST_CASE("multiclass pre-log accounts for per-class training rounds")
{
    const tcd::prelog_result r = tcd::prelog_multiclass(32, 32, 4, 2, 16);
    // M* = min{32, 32, floor(64/4)} = 16; prelog = 16 (1 - 32/64) = 8.
    REQUIRE(r.m_star == 16);
    REQUIRE(r.prelog == 8.0);
    REQUIRE_FALSE(r.advisory);

    // T = G degenerates to the flat layout, flagged as pointless.
    const tcd::prelog_result same = tcd::prelog_multiclass(32, 32, 4, 4, 16);
    REQUIRE(same.advisory);
    const tcd::prelog_result flat = tcd::prelog_iid(32, 32, 16);
    REQUIRE(same.prelog == flat.prelog);
}

TEST_CASE("widened-system objective and its eigenmode search")
{
    // Reference point: M = 200, K = 100 (mu = 2), G = 10, r = 20, Tc = 64 at
    // 30 dB. The integer search lands on q = 15.
    const tcd::system_geometry geo{200, 100, 10, 20, 64, 1};
    const tcd::system2_result res = tcd::system2_optimize(geo, 1000.0);
    REQUIRE(res.q_opt == 15);
    REQUIRE(res.m_p2_star == 150);
    REQUIRE(res.mu_p2 == Catch::Approx(1.5).epsilon(1e-14));
    REQUIRE(res.f_opt == Catch::Approx(776.6).margin(0.5));

    // The profile covers the whole feasible range [max(q*, K'), r].
    REQUIRE(res.f_values.front().first == 10);
    REQUIRE(res.f_values.back().first == 20);
    for (const auto& [q, f] : res.f_values)
        REQUIRE(f <= res.f_opt);

    // At the left edge q = K' the power-sharing factor vanishes by its limit.
    const long long tcg = 64ll * 10;
    const int m_star = static_cast<int>(std::min<long long>(std::min(200, 100), tcg / 2));
    const double edge = tcd::system2_objective(geo, 1000.0, 10.0);
    const double expect = m_star * (1.0 - 10.0 / 64.0) * std::log2(1000.0 / std::exp(1.0));
    REQUIRE(edge == Catch::Approx(expect).epsilon(1e-12));

    // Training costs dominate as power grows: the search retreats to the
    // smallest feasible q.
    const tcd::system2_result rich = tcd::system2_optimize(geo, 1e12);
    REQUIRE(rich.q_opt == 10);

    REQUIRE_THROWS_AS(tcd::system2_objective(geo, 1000.0, 5.0), tcd::domain_error);
    const tcd::system_geometry under{100, 200, 10, 10, 64, 1};
    REQUIRE_THROWS_AS(tcd::system2_optimize(under, 1000.0), tcd::domain_error);
    // K' above r leaves no feasible training size.
    const tcd::system_geometry narrow{60, 50, 10, 4, 64, 1};
    REQUIRE_THROWS_AS(tcd::system2_optimize(narrow, 1000.0), tcd::domain_error);
}

TEST_CASE("system I bound: exact harmonic form at many groups")
{
    const tcd::system_geometry geo{40, 40, 10, 4, 32, 1};
    const tcd::eigenvalue_profile prof = tcd::flat_profile(10, 4, 10.0);
    const tcd::pilot_bound pb = tcd::pilot_bound_largeG(geo, prof, 1000.0);
    // q* = min{4, 4, 16} = 4, mu = 1, discount = 1 - 4/32.
    REQUIRE(pb.mu == 1.0);
    REQUIRE(pb.discount == Catch::Approx(0.875).epsilon(1e-14));
    REQUIRE_FALSE(pb.harmonic_index_floored);
    const double body = -tcd::euler_gamma + tcd::harmonic_sum(4) - 1.0;
    const double expect = 0.875 * (std::log2(1000.0 / 4.0) + tcd::log2e * body);
    REQUIRE(pb.bounds.center == Catch::Approx(expect).epsilon(1e-12));
    // Flat profile: lower = center + discount log2(mu * 1).
    REQUIRE(pb.bounds.lower == Catch::Approx(pb.bounds.center).margin(1e-12));
}

TEST_CASE("system I bounds: harmonic and limiting forms agree at large rank")
{
    // kp = 400, q* = 200, mu = 1/2: the exact harmonic sums must approach the
    // closed-form limit.
    const tcd::system_geometry geo{400, 400, 1, 200, 1000, 1};
    const tcd::eigenvalue_profile prof = tcd::flat_profile(1, 200, 2.0);
    const tcd::pilot_bound exact = tcd::pilot_bound_largeG(geo, prof, 1000.0);
    const tcd::pilot_bound limit = tcd::pilot_bound_largeR(geo, prof, 1000.0);
    REQUIRE(exact.mu == 0.5);
    REQUIRE(limit.mu == 0.5);
    REQUIRE(exact.bounds.center == Catch::Approx(limit.bounds.center).margin(1e-3));

    // mu = 1 limiting value: discount * log2(P/e).
    const tcd::system_geometry tight{8, 8, 4, 2, 100, 1};
    const tcd::pilot_bound unit =
        tcd::pilot_bound_largeR(tight, tcd::flat_profile(4, 2, 4.0), 1000.0);
    REQUIRE(unit.mu == 1.0);
    REQUIRE(unit.bounds.center
            == Catch::Approx(0.98 * std::log2(1000.0 / std::exp(1.0))).epsilon(1e-12));
}

TEST_CASE("system II bound: per-user sandwich with default constant")
{
    const tcd::system_geometry geo{200, 100, 10, 20, 64, 1};
    const tcd::eigenvalue_profile prof = tcd::flat_profile(10, 20, 10.0);
    const tcd::pilot_bound pb = tcd::pilot_bound_system2(geo, prof, 1000.0, 150);
    REQUIRE(pb.mu == Catch::Approx(1.5).epsilon(1e-14));
    REQUIRE(pb.discount == Catch::Approx(1.0 - 150.0 / 640.0).epsilon(1e-14));
    REQUIRE(pb.uses_default_c2);
    REQUIRE(pb.bounds.upper == pb.bounds.center);
    REQUIRE(pb.bounds.lower == pb.bounds.center + pb.discount * std::log2(10.0 / 10.0));

    // lambda_min = G collapses the sandwich.
    REQUIRE(pb.bounds.lower == pb.bounds.center);

    // G = 1 with unit eigenvalues: the sanity case where lower = upper.
    const tcd::system_geometry single{8, 4, 1, 8, 64, 1};
    const tcd::pilot_bound s1 =
        tcd::pilot_bound_system2(single, tcd::flat_profile(1, 8, 1.0), 100.0, 8);
    REQUIRE(s1.bounds.lower == s1.bounds.upper);

    // mu_p2 <= 1 is out of scope.
    REQUIRE_THROWS_AS(tcd::pilot_bound_system2(geo, prof, 1000.0, 100), tcd::domain_error);
    // Training that eats the whole block is rejected: M_p2* = Tc G needs
    // q = Tc per group.
    const tcd::system_geometry slim{64, 8, 1, 64, 32, 1};
    REQUIRE_THROWS_AS(
        tcd::pilot_bound_system2(slim, tcd::flat_profile(1, 64, 1.0), 100.0, 32),
        tcd::domain_error);
}

TEST_CASE("training round length depends on the scheme")
{
    const tcd::system_geometry geo{16, 8, 4, 2, 32, 1};
    tcd::pilot_design d;
    d.q = 2;
    d.scheme = tcd::training_scheme::fdd_prebeamformed;
    REQUIRE(tcd::training_symbols(d, geo) == 2);
    d.scheme = tcd::training_scheme::tdd_reciprocal;
    REQUIRE(tcd::training_symbols(d, geo) == 2); // K' = 2 here as well
    d.q = 5;
    d.scheme = tcd::training_scheme::fdd_prebeamformed;
    REQUIRE_THROWS_AS(tcd::training_symbols(d, geo), tcd::invalid_input);
}

TEST_CASE("noiseless training recovers effective channels exactly")
{
    const tcd::unitary_ensemble ens = tcd::synthesize_unitary_ensemble(16, 4, 4, {{4, 4, 4, 4}},
                                                                       19);
    const tcd::system_geometry geo{16, 8, 4, 4, 32, 1};
    const double inf = std::numeric_limits<double>::infinity();

    for (auto scheme :
         {tcd::training_scheme::fdd_prebeamformed, tcd::training_scheme::tdd_reciprocal})
    {
        const tcd::training_result res = tcd::simulate_training(ens, geo, inf, 5, scheme);
        REQUIRE(res.mse_theoretical == 0.0);
        REQUIRE(res.mse_empirical < 1e-24);
        REQUIRE(res.leakage < 1e-12);
        for (size_t i = 0; i < res.estimates.size(); ++i)
            REQUIRE((res.estimates[i] - res.truth[i]).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("noisy training hits the predicted error floor")
{
    const tcd::unitary_ensemble ens = tcd::synthesize_unitary_ensemble(32, 4, 8,
                                                                       {{4, 4, 4, 4, 4, 4, 4, 4}},
                                                                       23);
    const tcd::system_geometry geo{32, 64, 4, 8, 64, 1};
    const double rho = 10.0;

    for (auto scheme :
         {tcd::training_scheme::fdd_prebeamformed, tcd::training_scheme::tdd_reciprocal})
    {
        const tcd::training_result res = tcd::simulate_training(ens, geo, rho, 40, scheme);
        REQUIRE(res.mse_theoretical == Catch::Approx(0.01).epsilon(1e-14));
        // 4 * 8 * 16 = 512 error entries per round: the empirical mean of
        // |CN(0, 0.01)|^2 lands within ~20% of 0.01 with high margin.
        REQUIRE(res.mse_empirical == Catch::Approx(0.01).epsilon(0.25));
        REQUIRE(res.symbols
                == (scheme == tcd::training_scheme::fdd_prebeamformed ? 8 : 16));
    }

    // Reproducibility in the noise seed.
    const tcd::training_result a = tcd::simulate_training(
        ens, geo, rho, 3, tcd::training_scheme::fdd_prebeamformed);
    const tcd::training_result b = tcd::simulate_training(
        ens, geo, rho, 3, tcd::training_scheme::fdd_prebeamformed);
    REQUIRE(a.mse_empirical == b.mse_empirical);
}

TEST_CASE("training rejects ensembles with cross-group leakage")
{
    tcd::unitary_ensemble ens = tcd::synthesize_unitary_ensemble(8, 2, 2, {{4, 4}}, 2);
    // Corrupt the second group so it shares a direction with the first.
    ens.groups[1].basis.col(0) = ens.groups[0].basis.col(0);
    const tcd::system_geometry geo{8, 4, 2, 2, 32, 1};
    REQUIRE_THROWS_AS(
        tcd::simulate_training(ens, geo, 10.0, 1, tcd::training_scheme::fdd_prebeamformed),
        tcd::structure_error);

    // Geometry mismatch is caught before anything runs.
    const tcd::unitary_ensemble ok = tcd::synthesize_unitary_ensemble(8, 2, 2, {{4, 4}}, 2);
    const tcd::system_geometry wrong{8, 4, 4, 2, 32, 1};
    REQUIRE_THROWS_AS(
        tcd::simulate_training(ok, wrong, 10.0, 1, tcd::training_scheme::tdd_reciprocal),
        tcd::invalid_input);
}
