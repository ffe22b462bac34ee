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

// Walks through the basic capacity workflow: build a correlated ensemble,
// estimate the ergodic downlink sum capacity by Monte Carlo, and compare the
// estimate against the closed-form high-SNR bracket.

#include <cstdio>

#include <tcd.hpp>

int main()
{
    const int m = 8;    // transmit antennas
    const int k = 8;    // single-antenna users
    const int g = 4;    // correlation groups
    const int r = 2;    // eigenmodes per group
    const std::uint64_t seed = 7;

    // A unitary ensemble with a flat eigenvalue profile: every group spans r
    // orthogonal directions carrying eigenvalue m/r each (trace m per user).
    const tcd::unitary_ensemble ens =
        tcd::synthesize_unitary_ensemble(m, g, r, {{4.0, 4.0}}, seed);
    const tcd::channel_population pop = tcd::ensemble_population(ens, k / g);

    const tcd::system_geometry geo{m, k, g, r, 1, 1};
    const tcd::eigenvalue_profile prof = tcd::profile_from_ensemble(ens);

    std::printf("%8s %12s %12s %12s %12s\n", "snr_db", "monte_carlo", "std_err", "lower",
                "upper");
    for (double snr_db : {10.0, 20.0, 30.0})
    {
        const tcd::capacity_estimate est =
            tcd::ergodic_sum_capacity(pop, snr_db, 500, seed);
        const tcd::bound_pair bracket =
            tcd::highsnr_bounds(geo, prof, tcd::snr_db_to_power(snr_db));
        std::printf("%8.1f %12.4f %12.4f %12.4f %12.4f\n", snr_db, est.mean, est.std_error,
                    bracket.lower, bracket.upper);
    }

    // The block-diagonal shortcut gives the same answer for unitary ensembles
    // at a fraction of the cost; the estimator checks the structure first.
    const tcd::capacity_estimate grouped =
        tcd::ergodic_sum_capacity(pop, 30.0, 500, seed, tcd::capacity_mode::per_group);
    std::printf("\nper-group evaluation at 30 dB: %.4f (+/- %.4f)\n", grouped.mean,
                grouped.std_error);
    return 0;
}
