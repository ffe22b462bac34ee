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

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "asymptotics.hpp"
#include "capacity.hpp"
#include "ensemble.hpp"
#include "errors.hpp"
#include "linalg.hpp"

namespace tcd
{

// Optimal number of eigenmodes to train per group when a fraction of each
// coherence block of tc symbols is spent on a common pre-beamformed pilot:
// min{r, K', floor(tc/2)}, the argmax of min{q, K'} (tc - q) over integers.
inline int q_star(int r, int k_prime, int tc)
{
    if (r < 1 || k_prime < 1 || tc < 1)
        throw invalid_input("q_star: all arguments must be at least 1");
    return std::min(std::min(r, k_prime), tc / 2);
}

// Which dimensioning rule produced a pre-log value.
enum class prelog_regime
{
    iid,
    tcd,
    multiclass,
    system2
};

inline const char* to_string(prelog_regime r)
{
    switch (r)
    {
    case prelog_regime::iid: return "iid";
    case prelog_regime::tcd: return "tcd";
    case prelog_regime::multiclass: return "multiclass";
    case prelog_regime::system2: return "system2";
    }
    return "unknown";
}

// Degrees of freedom per symbol after training overhead. num/den carry the
// value as an exact integer ratio so dimensioning identities can be checked
// without floating-point slack.
struct prelog_result
{
    int m_star = 0;
    double prelog = 0.0;
    long long num = 0;
    long long den = 1;
    prelog_regime regime = prelog_regime::iid;

    // Set when the class count makes the multi-pilot layout pointless (T >= G).
    bool advisory = false;
};

// Pre-log ceiling of a pilot-aided system with a conventional (ungrouped)
// pilot: M*(1 - M*/Tc) with M* = min{M, K, floor(Tc/2)}.
inline prelog_result prelog_iid(int m, int k, int tc)
{
    if (m < 1 || k < 1 || tc < 1)
        throw invalid_input("prelog_iid: all arguments must be at least 1");
    prelog_result res;
    res.regime = prelog_regime::iid;
    res.m_star = std::min(std::min(m, k), tc / 2);
    res.num = static_cast<long long>(res.m_star) * (tc - res.m_star);
    res.den = tc;
    res.prelog = static_cast<double>(res.num) / res.den;
    return res;
}

// Pre-log ceiling when G groups share one pre-beamformed pilot, which
// stretches the training budget by a factor of G: M*(1 - M*/(Tc G)) with
// M* = min{M, K, floor(Tc G/2)}.
inline prelog_result prelog_tcd(int m, int k, int g, int tc)
{
    if (m < 1 || k < 1 || g < 1 || tc < 1)
        throw invalid_input("prelog_tcd: all arguments must be at least 1");
    prelog_result res;
    res.regime = prelog_regime::tcd;
    const long long tcg = static_cast<long long>(tc) * g;
    res.m_star = static_cast<int>(std::min<long long>(std::min(m, k), tcg / 2));
    res.num = static_cast<long long>(res.m_star) * (tcg - res.m_star);
    res.den = tcg;
    res.prelog = static_cast<double>(res.num) / res.den;
    return res;
}

// Pre-log ceiling with T user classes sharing the block, each class needing
// its own pilot round: M*(1 - M* T/(Tc G)) with M* = min{M, K,
// floor(Tc G/(2T))}. When T >= G the grouped pilot no longer buys anything,
// reported through the advisory flag rather than an error.
inline prelog_result prelog_multiclass(int m, int k, int g, int t, int tc)
{
    if (m < 1 || k < 1 || g < 1 || t < 1 || tc < 1)
        throw invalid_input("prelog_multiclass: all arguments must be at least 1");
    prelog_result res;
    res.regime = prelog_regime::multiclass;
    res.advisory = t >= g;
    const long long tcg = static_cast<long long>(tc) * g;
    res.m_star = static_cast<int>(std::min<long long>(std::min(m, k), tcg / (2 * t)));
    res.num = static_cast<long long>(res.m_star) * (tcg - static_cast<long long>(res.m_star) * t);
    res.den = tcg;
    res.prelog = static_cast<double>(res.num) / res.den;
    return res;
}

// Net rate objective of the widened pilot-aided system that may train q >= K'
// eigenmodes per group: f(q) = M*{(1 - q/Tc) log2((P/e)(q/K')) +
// (q/K' - 1) log2(q/(q - K'))}. Accepts real q so the q -> K' limit can be
// probed; the singular factor at q = K' evaluates to 0 by its limit.
inline double system2_objective(const system_geometry& geo, double p_linear, double q)
{
    validate(geo);
    if (!(p_linear > 0.0))
        throw domain_error("system2_objective: power must be positive");
    const int kp = geo.kp();
    if (!(q >= static_cast<double>(kp)))
        throw domain_error("system2_objective: objective is defined for q >= K'");

    const long long tcg = static_cast<long long>(geo.tc) * geo.g;
    const int m_star =
        static_cast<int>(std::min<long long>(std::min(geo.m, geo.k), tcg / 2));
    const double e = std::exp(1.0);
    const double x = q / kp;
    double power_gain = 0.0;
    if (x > 1.0)
        power_gain = (x - 1.0) * std::log2(x / (x - 1.0));
    return m_star
           * ((1.0 - q / geo.tc) * std::log2((p_linear / e) * x) + power_gain);
}

// Outcome of the system-II eigenmode search: the winning per-group mode count
// q_opt, the corresponding total eigenmode count M_p2* = q_opt G, and the
// objective profile over the whole feasible range.
struct system2_result
{
    int q_opt = 0;
    int m_p2_star = 0;
    double mu_p2 = 0.0;
    double f_opt = 0.0;
    std::vector<std::pair<int, double>> f_values;
};

// Brute-force integer maximization of the system-II objective over the
// feasible training sizes q in [max(q*, K'), r]; the objective is undefined
// below K'. Ties break toward the smaller q (less training overhead). Only
// meaningful in the overloaded regime mu = M/K > 1.
inline system2_result system2_optimize(const system_geometry& geo, double p_linear)
{
    validate(geo);
    if (!(p_linear > 0.0))
        throw domain_error("system2_optimize: power must be positive");
    if (geo.m <= geo.k)
        throw domain_error("system2_optimize: stated for mu = M/K > 1");

    const int kp = geo.kp();
    const int q_low = std::max(q_star(geo.r, kp, geo.tc), kp);
    if (q_low > geo.r)
        throw domain_error("system2_optimize: no feasible training size (K' exceeds r)");

    system2_result res;
    for (int q = q_low; q <= geo.r; ++q)
    {
        const double f = system2_objective(geo, p_linear, static_cast<double>(q));
        res.f_values.emplace_back(q, f);
        if (res.f_values.size() == 1 || f > res.f_opt)
        {
            res.q_opt = q;
            res.f_opt = f;
        }
    }
    res.m_p2_star = res.q_opt * geo.g;
    res.mu_p2 = static_cast<double>(res.m_p2_star) / geo.k;
    return res;
}

// A capacity sandwich for a pilot-aided system, together with the training
// discount and loading ratio it was evaluated at.
struct pilot_bound
{
    bound_pair bounds;
    double discount = 1.0;
    double mu = 0.0;

    // A harmonic summation limit was fractional and got floored.
    bool harmonic_index_floored = false;

    // The undetermined additive constant in the system-II bound was left at
    // its default of zero.
    bool uses_default_c2 = false;
};

// Per-eigenmode capacity sandwich of pilot-aided system I in the many-groups
// regime, with exact harmonic sums at finite K':
// center = (1 - q*/Tc){log2(P/q*) + log2(e)(-gamma + sum_{l=2}^{K'} 1/l +
// ((1-mu)/mu) sum 1/l over the top mu-fraction of [1, K'])}, mu = q*/K'.
// The lower endpoint subtracts the discounted eigenvalue-spread penalty
// log2(mu epsilon).
inline pilot_bound pilot_bound_largeG(const system_geometry& geo,
                                      const eigenvalue_profile& profile, double p_linear)
{
    validate(geo);
    validate(profile);
    if (!(p_linear > 0.0))
        throw domain_error("pilot_bound_largeG: power must be positive");

    const int kp = geo.kp();
    const int qs = q_star(geo.r, kp, geo.tc);
    if (qs < 1)
        throw domain_error("pilot_bound_largeG: coherence block too short to train anything");
    const double mu = static_cast<double>(qs) / kp;
    const double discount = 1.0 - static_cast<double>(qs) / geo.tc;

    const double low_real = (1.0 - mu) * kp;
    const long long low_floor = static_cast<long long>(std::floor(low_real + 1e-9));
    const bool floored = std::abs(low_real - static_cast<double>(low_floor)) > 1e-9;

    double body = -euler_gamma + detail::harmonic_range(2, kp);
    if (mu < 1.0)
        body += ((1.0 - mu) / mu) * detail::harmonic_range(low_floor + 1, kp);

    pilot_bound pb;
    pb.discount = discount;
    pb.mu = mu;
    pb.harmonic_index_floored = floored;
    pb.bounds.regime = "pilot";
    pb.bounds.center = discount * (std::log2(p_linear / qs) + log2e * body);
    pb.bounds.upper = pb.bounds.center;
    pb.bounds.lower = pb.bounds.center + discount * std::log2(mu * profile.epsilon());
    return pb;
}

// Per-eigenmode capacity sandwich of pilot-aided system I in the large-rank
// regime (G fixed, r and K' large at fixed loading mu = q*/K' <= 1):
// center = (1 - q*/Tc){log2(P/(e mu)) + ((1-mu)/mu) log2(1/(1-mu))}, the
// mu = 1 singularity evaluated by its limit.
inline pilot_bound pilot_bound_largeR(const system_geometry& geo,
                                      const eigenvalue_profile& profile, double p_linear)
{
    validate(geo);
    validate(profile);
    if (!(p_linear > 0.0))
        throw domain_error("pilot_bound_largeR: power must be positive");

    const int kp = geo.kp();
    const int qs = q_star(geo.r, kp, geo.tc);
    if (qs < 1)
        throw domain_error("pilot_bound_largeR: coherence block too short to train anything");
    const double mu = static_cast<double>(qs) / kp;
    if (mu > 1.0)
        throw domain_error("pilot_bound_largeR: loading mu above 1 cannot arise in system I");
    const double discount = 1.0 - static_cast<double>(qs) / geo.tc;
    const double e = std::exp(1.0);

    double center;
    if (mu == 1.0)
        center = discount * std::log2(p_linear / e);
    else
        center = discount
                 * (std::log2(p_linear / (e * mu))
                    + ((1.0 - mu) / mu) * std::log2(1.0 / (1.0 - mu)));

    pilot_bound pb;
    pb.discount = discount;
    pb.mu = mu;
    pb.bounds.regime = "pilot";
    pb.bounds.center = center;
    pb.bounds.upper = center;
    pb.bounds.lower = center + discount * std::log2(mu * profile.epsilon());
    return pb;
}

// Per-user capacity sandwich of pilot-aided system II at loading
// mu_p2 = M_p2*/K > 1, with pre-log discount (1 - M_p2*/(Tc G)):
// center = discount {log2(mu P/e) + (mu - 1) log2(mu/(mu - 1)) + c2}. The
// additive constant c2 has no closed form and defaults to 0; the flag records
// when the default was used.
inline pilot_bound pilot_bound_system2(const system_geometry& geo,
                                       const eigenvalue_profile& profile, double p_linear,
                                       int m_p2_star, double c2 = 0.0)
{
    validate(geo);
    validate(profile);
    if (!(p_linear > 0.0))
        throw domain_error("pilot_bound_system2: power must be positive");
    if (m_p2_star < 1 || m_p2_star % geo.g != 0 || m_p2_star / geo.g > geo.r)
        throw domain_error("pilot_bound_system2: M_p2* must be a per-group mode count times G, "
                           "at most r per group");
    const double mu = static_cast<double>(m_p2_star) / geo.k;
    if (!(mu > 1.0))
        throw domain_error("pilot_bound_system2: requires mu_p2 = M_p2*/K > 1");
    const double discount =
        1.0 - static_cast<double>(m_p2_star) / (static_cast<double>(geo.tc) * geo.g);
    if (!(discount > 0.0))
        throw domain_error("pilot_bound_system2: training would consume the whole block");

    const double e = std::exp(1.0);
    pilot_bound pb;
    pb.discount = discount;
    pb.mu = mu;
    pb.uses_default_c2 = c2 == 0.0;
    pb.bounds.regime = "pilot";
    pb.bounds.center =
        discount * (std::log2(mu * p_linear / e) + (mu - 1.0) * std::log2(mu / (mu - 1.0)) + c2);
    pb.bounds.upper = pb.bounds.center;
    pb.bounds.lower = pb.bounds.center + discount * std::log2(profile.lambda_min() / geo.g);
    return pb;
}

// Training signal layouts: a common downlink pilot beamformed through the
// group eigenbases, or uplink pilots combined with per-group receive
// beamformers under channel reciprocity.
enum class training_scheme
{
    fdd_prebeamformed,
    tdd_reciprocal
};

// Dimensioning of one training round.
struct pilot_design
{
    int q = 1;
    double rho_tr = 1.0;
    training_scheme scheme = training_scheme::fdd_prebeamformed;
};

// Symbols one training round consumes: q for the common pre-beamformed
// downlink pilot (q modes trained at once across all groups), K' for uplink
// pilots (one symbol per user of a group, groups in parallel).
inline int training_symbols(const pilot_design& design, const system_geometry& geo)
{
    validate(geo);
    if (design.q < 1 || design.q > geo.r)
        throw invalid_input("training_symbols: need 1 <= q <= r");
    return design.scheme == training_scheme::fdd_prebeamformed ? design.q : geo.kp();
}

// One training round: per-group effective-channel estimates plus error and
// leakage statistics.
struct training_result
{
    std::vector<cmat> estimates;
    std::vector<cmat> truth;
    double mse_empirical = 0.0;
    double mse_theoretical = 0.0;
    double leakage = 0.0;
    int symbols = 0;
    training_scheme scheme = training_scheme::fdd_prebeamformed;
};

// Simulates one least-squares training round over the given ensemble. FDD
// sends the pre-beamformed common pilot sum over all group bases for r
// symbols and each user estimates its own r-dimensional effective channel;
// TDD has each group's K' users send orthogonal uplink pilots and the
// receiver beamforms with the group basis. Group orthogonality makes the
// inter-group pilot interference vanish; a measurably non-orthogonal
// ensemble is rejected. Per-entry estimation MSE is 1/rho_tr^2 at unit noise
// variance; rho_tr may be infinite for a noiseless round.
inline training_result simulate_training(const unitary_ensemble& ens, const system_geometry& geo,
                                         double rho_tr, std::uint64_t noise_seed,
                                         training_scheme scheme)
{
    validate(geo);
    if (ens.m != geo.m || ens.g() != geo.g || ens.r != geo.r)
        throw invalid_input("simulate_training: ensemble does not match geometry");
    if (!(rho_tr > 0.0))
        throw invalid_input("simulate_training: training power must be positive");

    const double leakage = ensemble_cross_coherence(ens);
    if (leakage > 1e-8)
        throw structure_error("simulate_training: group eigenspaces are not orthogonal, "
                              "pre-beamformed pilots would leak across groups");

    const int kp = geo.kp();
    const int g = geo.g;
    philox_rng rng(noise_seed, 0);

    training_result out;
    out.scheme = scheme;
    out.leakage = leakage;
    out.mse_theoretical = std::isinf(rho_tr) ? 0.0 : 1.0 / (rho_tr * rho_tr);
    out.symbols = scheme == training_scheme::fdd_prebeamformed ? geo.r : kp;
    out.truth = sample_effective_channels(ens, kp, rng);

    // Antenna-domain channels H_g = U_g (effective channel of group g).
    std::vector<cmat> antenna(g);
    for (int i = 0; i < g; ++i)
        antenna[i] = ens.groups[static_cast<size_t>(i)].basis * out.truth[static_cast<size_t>(i)];

    // Everything is simulated at unit pilot amplitude with the noise already
    // divided by rho_tr, so an infinite training power cleanly degenerates to
    // the noiseless round.
    const double noise_scale = std::isinf(rho_tr) ? 0.0 : 1.0 / rho_tr;
    const auto noise = [&](Eigen::Index rows, Eigen::Index cols) {
        cmat z(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index i = 0; i < rows; ++i)
                z(i, c) = noise_scale * rng.cgaussian();
        return z;
    };

    double err_sq = 0.0;
    long long entries = 0;
    if (scheme == training_scheme::fdd_prebeamformed)
    {
        // Common downlink pilot X = rho_tr sum_g U_g over r symbols; user k of
        // group g observes y_k = h_k^H X + z_k and the least-squares recovery
        // under the orthogonal design is X^H h_k / rho_tr.
        cmat pilot = cmat::Zero(geo.m, geo.r);
        for (int i = 0; i < g; ++i)
            pilot += ens.groups[static_cast<size_t>(i)].basis;
        for (int i = 0; i < g; ++i)
        {
            cmat est = pilot.adjoint() * antenna[static_cast<size_t>(i)]
                       + noise(geo.r, kp);
            err_sq += (est - out.truth[static_cast<size_t>(i)]).squaredNorm();
            entries += est.size();
            out.estimates.push_back(std::move(est));
        }
    }
    else
    {
        // Uplink pilots: every group's K' users send the same orthogonal
        // K'-symbol sequences at once; the receiver separates groups purely
        // by beamforming with U_g^H, whose orthonormal rows keep the
        // projected noise white.
        cmat received = noise(geo.m, kp);
        for (int i = 0; i < g; ++i)
            received += antenna[static_cast<size_t>(i)];
        for (int i = 0; i < g; ++i)
        {
            cmat est = ens.groups[static_cast<size_t>(i)].basis.adjoint() * received;
            err_sq += (est - out.truth[static_cast<size_t>(i)]).squaredNorm();
            entries += est.size();
            out.estimates.push_back(std::move(est));
        }
    }
    out.mse_empirical = err_sq / static_cast<double>(entries);
    return out;
}

} // namespace tcd
