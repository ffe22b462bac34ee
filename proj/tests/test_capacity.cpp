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
#include <vector>

#include <tcd/capacity.hpp>

namespace
{

tcd::cmat column(std::initializer_list<std::complex<double>> vals)
{
    tcd::cmat h(static_cast<Eigen::Index>(vals.size()), 1);
    Eigen::Index i = 0;
    for (const auto& v : vals)
        h(i++, 0) = v;
    return h;
}

} // namespace

TEST_CASE("snr conversion and geometry validation")
{
    REQUIRE(tcd::snr_db_to_power(0.0) == 1.0);
    REQUIRE(tcd::snr_db_to_power(30.0) == Catch::Approx(1000.0).epsilon(1e-14));

    tcd::system_geometry ok{8, 8, 4, 2, 10, 1};
    REQUIRE_NOTHROW(tcd::validate(ok));
    REQUIRE(ok.kp() == 2);

    tcd::system_geometry uneven{8, 9, 4, 2, 10, 1};
    REQUIRE_THROWS_AS(tcd::validate(uneven), tcd::invalid_input);
    tcd::system_geometry crowded{6, 8, 4, 2, 10, 1};
    REQUIRE_THROWS_AS(tcd::validate(crowded), tcd::invalid_input);
}

TEST_CASE("dual MAC sum rate reduces to the scalar log for one user")
{
    const tcd::cmat h = column({{0.6, 0.8}, {-0.3, 0.1}});
    const double gain = h.squaredNorm();
    const double rate = tcd::dual_mac_sum_rate({h}, {2.5});
    REQUIRE(rate == Catch::Approx(std::log2(1.0 + 2.5 * gain)).epsilon(1e-12));
}

TEST_CASE("dual MAC sum rate is additive across blocks")
{
    const tcd::cmat h1 = column({{1.0, 0.0}, {0.5, -0.5}});
    const tcd::cmat h2 = column({{0.2, 0.9}});
    const double joint = tcd::dual_mac_sum_rate({h1, h2}, {1.0, 3.0});
    const double split =
        tcd::dual_mac_sum_rate({h1}, {1.0}) + tcd::dual_mac_sum_rate({h2}, {3.0});
    REQUIRE(joint == Catch::Approx(split).epsilon(1e-13));

    REQUIRE_THROWS_AS(tcd::dual_mac_sum_rate({h1}, {1.0, 2.0}), tcd::invalid_input);
    REQUIRE_THROWS_AS(tcd::dual_mac_sum_rate({}, {}), tcd::invalid_input);
}

TEST_CASE("waterfilling gives one user everything")
{
    const tcd::cmat h = column({{1.2, 0.0}, {0.0, -0.7}});
    const tcd::power_allocation a = tcd::sum_power_waterfill({h}, 5.0);
    REQUIRE(a.converged);
    REQUIRE(a.powers.size() == 1);
    REQUIRE(a.powers[0] == Catch::Approx(5.0).epsilon(1e-9));
    REQUIRE(a.sum_rate == Catch::Approx(std::log2(1.0 + 5.0 * h.squaredNorm())).epsilon(1e-9));
}

TEST_CASE("waterfilling splits power across symmetric orthogonal users")
{
    tcd::cmat h(2, 2);
    h << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 0.0),
        std::complex<double>(0.0, 0.0), std::complex<double>(1.0, 0.0);
    const tcd::power_allocation a = tcd::sum_power_waterfill({h}, 4.0);
    REQUIRE(a.converged);
    REQUIRE(a.powers[0] == Catch::Approx(2.0).margin(1e-5));
    REQUIRE(a.powers[1] == Catch::Approx(2.0).margin(1e-5));
    REQUIRE(a.sum_rate == Catch::Approx(2.0 * std::log2(3.0)).margin(1e-6));
}

TEST_CASE("waterfilling shuts off a hopeless user at low power")
{
    // One strong and one very weak orthogonal user: at small total power the
    // optimum leaves the weak user silent.
    tcd::cmat h(2, 2);
    h << std::complex<double>(2.0, 0.0), std::complex<double>(0.0, 0.0),
        std::complex<double>(0.0, 0.0), std::complex<double>(0.05, 0.0);
    const tcd::power_allocation a = tcd::sum_power_waterfill({h}, 0.5);
    REQUIRE(a.converged);
    REQUIRE(a.powers[0] == Catch::Approx(0.5).margin(1e-6));
    REQUIRE(a.powers[1] == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("waterfilling matches an exhaustive grid search")
{
    // Three coupled users on two antennas, fixed channel. The grid scans the
    // power simplex at three refinement levels around the incumbent.
    tcd::cmat h(2, 3);
    h << std::complex<double>(0.9, 0.2), std::complex<double>(-0.4, 0.6),
        std::complex<double>(0.1, -0.3), std::complex<double>(0.3, -0.8),
        std::complex<double>(0.7, 0.1), std::complex<double>(-0.5, 0.4);
    const double total = 10.0;
    const tcd::power_allocation a = tcd::sum_power_waterfill({h}, total);
    REQUIRE(a.converged);

    double best = 0.0;
    double c1 = total / 3, c2 = total / 3;
    double span = total;
    for (int level = 0; level < 4; ++level)
    {
        const int steps = 40;
        double best1 = c1, best2 = c2;
        for (int i = 0; i <= steps; ++i)
            for (int j = 0; j <= steps; ++j)
            {
                const double p1 = c1 + span * (static_cast<double>(i) / steps - 0.5);
                const double p2 = c2 + span * (static_cast<double>(j) / steps - 0.5);
                const double p3 = total - p1 - p2;
                if (p1 < 0 || p2 < 0 || p3 < 0)
                    continue;
                const double rate = tcd::dual_mac_sum_rate({h}, {p1, p2, p3});
                if (rate > best)
                {
                    best = rate;
                    best1 = p1;
                    best2 = p2;
                }
            }
        c1 = best1;
        c2 = best2;
        span /= 10.0;
    }
    REQUIRE(a.sum_rate >= best - 1e-4);
    REQUIRE(a.sum_rate <= best + 1e-4);
}

TEST_CASE("waterfilling honors degenerate totals and bad input")
{
    const tcd::cmat h = column({{1.0, 0.0}});
    const tcd::power_allocation zero = tcd::sum_power_waterfill({h}, 0.0);
    REQUIRE(zero.converged);
    REQUIRE(zero.sum_rate == 0.0);

    REQUIRE_THROWS_AS(tcd::sum_power_waterfill({h}, -1.0), tcd::invalid_input);
    REQUIRE_THROWS_AS(tcd::sum_power_waterfill({}, 1.0), tcd::invalid_input);
    REQUIRE_THROWS_AS(tcd::sum_power_waterfill({h}, 1.0, -1e-6), tcd::invalid_input);
}

TEST_CASE("scalar ergodic capacity matches the exponential-integral value")
{
    // M = K = 1 at P = 3: E[log2(1 + 3|h|^2)] = exp(1/3) E1(1/3) log2 e.
    const tcd::channel_population pop = tcd::iid_population(1, 1);
    const tcd::capacity_estimate est =
        tcd::ergodic_sum_capacity(pop, 10.0 * std::log10(3.0), 4000, 11);
    REQUIRE(est.trials == 4000);
    REQUIRE(est.failed_trials == 0);
    REQUIRE(std::abs(est.mean - 1.668918331999) < 5.0 * est.std_error + 1e-9);
}

TEST_CASE("ergodic capacity estimates are deterministic in the seed")
{
    const tcd::channel_population pop = tcd::iid_population(4, 4);
    const tcd::capacity_estimate a = tcd::ergodic_sum_capacity(pop, 10.0, 50, 7);
    const tcd::capacity_estimate b = tcd::ergodic_sum_capacity(pop, 10.0, 50, 7);
    REQUIRE(a.mean == b.mean);
    REQUIRE(a.std_error == b.std_error);

    const tcd::capacity_estimate c = tcd::ergodic_sum_capacity(pop, 10.0, 50, 8);
    REQUIRE(a.mean != c.mean);
}

TEST_CASE("per-group and full evaluation agree on unitary ensembles")
{
    const tcd::unitary_ensemble ens = tcd::synthesize_unitary_ensemble(4, 2, 2, {{2, 2}}, 13);
    const tcd::channel_population pop = tcd::ensemble_population(ens, 2);
    const tcd::capacity_estimate full =
        tcd::ergodic_sum_capacity(pop, 10.0, 60, 5, tcd::capacity_mode::full);
    const tcd::capacity_estimate grouped =
        tcd::ergodic_sum_capacity(pop, 10.0, 60, 5, tcd::capacity_mode::per_group);
    // Identical channel draws, mathematically identical objective; only solver
    // paths differ.
    REQUIRE(full.mean == Catch::Approx(grouped.mean).margin(1e-3));
}

TEST_CASE("per-group mode refuses populations without orthogonal structure")
{
    const tcd::channel_population pop = tcd::iid_population(4, 4);
    REQUIRE_THROWS_AS(
        tcd::ergodic_sum_capacity(pop, 10.0, 10, 1, tcd::capacity_mode::per_group),
        tcd::invalid_input);
    REQUIRE_THROWS_AS(tcd::ergodic_sum_capacity(pop, 10.0, 1, 1), tcd::invalid_input);
}

TEST_CASE("capacity grows with the user count under opportunistic scheduling")
{
    const tcd::channel_population small = tcd::iid_population(2, 2);
    const tcd::channel_population large = tcd::iid_population(2, 16);
    const tcd::capacity_estimate cs = tcd::ergodic_sum_capacity(small, 10.0, 200, 3);
    const tcd::capacity_estimate cl = tcd::ergodic_sum_capacity(large, 10.0, 200, 3);
    REQUIRE(cl.mean > cs.mean);
}

TEST_CASE("capacity curve over user counts tracks single-point estimates")
{
    const tcd::channel_population pop = tcd::iid_population(2, 1);
    const std::vector<tcd::capacity_estimate> curve =
        tcd::capacity_vs_users_curve(pop, {2, 4}, 10.0, 40, 9);
    REQUIRE(curve.size() == 2);
    tcd::channel_population two = tcd::iid_population(2, 2);
    const tcd::capacity_estimate ref = tcd::ergodic_sum_capacity(two, 10.0, 40, 9);
    REQUIRE(curve[0].mean == ref.mean);

    const tcd::channel_population ring = tcd::per_user_population(
        {tcd::synthesize_unitary_ensemble(4, 1, 2, {{2, 2}}, 1).groups[0]});
    REQUIRE_THROWS_AS(tcd::capacity_vs_users_curve(ring, {2}, 10.0, 10, 1),
                      tcd::invalid_input);
}
