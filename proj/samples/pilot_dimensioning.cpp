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

// Dimensions the downlink training phase for a short coherence block and
// shows how grouping stretches the effective pilot budget, then runs one
// noisy training round to check the estimator error against its prediction.

#include <cstdio>

#include <tcd.hpp>

int main()
{
    const int tc = 32; // coherence block, in symbols

    // How many streams can be served once pilots are paid for, with and
    // without correlation structure.
    std::printf("%6s %6s %4s %8s %10s  %s\n", "M", "K", "G", "m_star", "prelog", "regime");
    for (int users : {16, 64, 256})
    {
        const tcd::prelog_result flat = tcd::prelog_iid(users, users, tc);
        const tcd::prelog_result grouped = tcd::prelog_tcd(users, users, 8, tc);
        std::printf("%6d %6d %4d %8d %10.3f  %s\n", users, users, 1, flat.m_star, flat.prelog,
                    tcd::to_string(flat.regime));
        std::printf("%6d %6d %4d %8d %10.3f  %s\n", users, users, 8, grouped.m_star,
                    grouped.prelog, tcd::to_string(grouped.regime));
    }

    // Pilot budget for a single group set: q_star common pilot symbols cover
    // every eigendirection that fits in half the block.
    std::printf("\nq_star(r=4, K'=8, Tc=%d) = %d symbols\n", tc, tcd::q_star(4, 8, tc));

    // One training round over a synthesized ensemble. The least-squares
    // estimate of each effective channel entry carries noise variance
    // 1/rho_tr^2 regardless of the scheme.
    const int m = 16, k = 8, g = 4, r = 2;
    const tcd::unitary_ensemble ens =
        tcd::synthesize_unitary_ensemble(m, g, r, {{8.0, 8.0}}, 11);
    const tcd::system_geometry geo{m, k, g, r, tc, 1};
    const double rho_tr = 31.6; // 15 dB

    const tcd::training_result fdd = tcd::simulate_training(
        ens, geo, rho_tr, 3, tcd::training_scheme::fdd_prebeamformed);
    const tcd::training_result tdd =
        tcd::simulate_training(ens, geo, rho_tr, 3, tcd::training_scheme::tdd_reciprocal);

    std::printf("\nfdd: %d pilot symbols, mse %.3e (theory %.3e), leakage %.1e\n",
                fdd.symbols, fdd.mse_empirical, fdd.mse_theoretical, fdd.leakage);
    std::printf("tdd: %d pilot symbols, mse %.3e (theory %.3e), leakage %.1e\n",
                tdd.symbols, tdd.mse_empirical, tdd.mse_theoretical, tdd.leakage);
    return 0;
}
