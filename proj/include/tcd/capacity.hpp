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
#include <limits>
#include <numeric>
#include <vector>

#include "ensemble.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace tcd
{

// Converts an SNR given in dB to a linear total transmit power. All public
// interfaces take SNR in dB; linear powers appear only internally.
inline double snr_db_to_power(double snr_db)
{
    return std::pow(10.0, snr_db / 10.0);
}

// Downlink system dimensions: m transmit antennas serving k single-antenna
// users split evenly into g groups, each group's channel covariance having
// rank r. tc is the coherence block length in symbols and t the number of
// user classes sharing it (both only matter for pilot dimensioning).
struct system_geometry
{
    int m = 1;
    int k = 1;
    int g = 1;
    int r = 1;
    int tc = 1;
    int t = 1;

    // Users per group.
    int kp() const { return k / g; }
};

inline void validate(const system_geometry& geo)
{
    if (geo.m < 1 || geo.k < 1 || geo.g < 1 || geo.r < 1 || geo.tc < 1 || geo.t < 1)
        throw invalid_input("system geometry: all dimensions must be positive");
    if (geo.k % geo.g != 0)
        throw invalid_input("system geometry: user count must divide evenly into groups");
    if (static_cast<long long>(geo.r) * geo.g > geo.m)
        throw invalid_input("system geometry: total eigenmode count r*g exceeds antenna count");
}

// Result of a sum-power optimization over the uplink dual of the broadcast
// channel. powers are per-user transmit powers in block-concatenation order,
// sum_rate in bits/s/Hz.
struct power_allocation
{
    std::vector<double> powers;
    double sum_rate = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Monte Carlo estimate of an ergodic sum rate at one SNR point.
struct capacity_estimate
{
    double snr_db = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    int trials = 0;
    int failed_trials = 0;
};

namespace detail
{

inline int total_users(const std::vector<cmat>& blocks)
{
    long long k = 0;
    for (const auto& h : blocks)
        k += h.cols();
    return static_cast<int>(k);
}

// Gram matrix I + H diag(p) H^H for one block, with p the slice of the global
// power vector belonging to that block.
inline cmat block_gram(const cmat& h, const double* p)
{
    const Eigen::Index dim = h.rows();
    const Eigen::Index users = h.cols();
    cmat a = cmat::Identity(dim, dim);
    for (Eigen::Index k = 0; k < users; ++k)
        a.noalias() += p[k] * h.col(k) * h.col(k).adjoint();
    return a;
}

// Water-filling refill against a common level: p_k = max(0, level - u_k) with
// the level chosen so the powers sum to total. u_k is the inverse effective
// channel gain of user k.
inline std::vector<double> water_refill(const std::vector<double>& u, double total)
{
    const size_t k = u.size();
    std::vector<size_t> order(k);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return u[a] < u[b]; });

    double cumsum = 0.0;
    double level = 0.0;
    size_t active = 0;
    for (size_t n = 1; n <= k; ++n)
    {
        const double un = u[order[n - 1]];
        if (!std::isfinite(un))
            break;
        cumsum += un;
        const double cand = (total + cumsum) / static_cast<double>(n);
        if (cand > un)
        {
            level = cand;
            active = n;
        }
    }

    std::vector<double> p(k, 0.0);
    for (size_t i = 0; i < active; ++i)
        p[order[i]] = std::max(0.0, level - u[order[i]]);
    return p;
}

} // namespace detail

// Sum rate of the dual multiple-access channel, sum_b log2 |I + H_b diag(p_b)
// H_b^H|, where each block holds the channel columns of the users it couples.
// Groups with orthogonal eigenspaces may be passed as separate blocks; a
// single block covers the general case. powers is the concatenation of the
// per-block slices, in block order.
inline double dual_mac_sum_rate(const std::vector<cmat>& blocks, const std::vector<double>& powers)
{
    if (blocks.empty())
        throw invalid_input("dual_mac_sum_rate: no channel blocks");
    if (static_cast<int>(powers.size()) != detail::total_users(blocks))
        throw invalid_input("dual_mac_sum_rate: power vector length does not match user count");
    double rate = 0.0;
    size_t off = 0;
    for (const auto& h : blocks)
    {
        rate += logdet2_hpd(detail::block_gram(h, powers.data() + off));
        off += static_cast<size_t>(h.cols());
    }
    return rate;
}

// Maximizes the dual MAC sum rate over per-user powers under a total power
// constraint. Each sweep recomputes every user's effective channel gain with
// that user's own contribution removed, refills all powers against a common
// water level, then backtracks toward the refill until the objective
// improves; a sweep whose full backtracking ladder yields no improvement is a
// numerical fixed point and terminates the search. Throws convergence_error
// (carrying the best allocation found) if tolerance is not reached within
// max_iter sweeps.
inline power_allocation sum_power_waterfill(const std::vector<cmat>& blocks, double total_power,
                                            double tol = 1e-6, int max_iter = 500)
{
    if (blocks.empty())
        throw invalid_input("sum_power_waterfill: no channel blocks");
    for (const auto& h : blocks)
        if (h.rows() < 1 || h.cols() < 1)
            throw invalid_input("sum_power_waterfill: empty channel block");
    if (!(total_power >= 0.0) || !std::isfinite(total_power))
        throw invalid_input("sum_power_waterfill: total power must be finite and nonnegative");
    if (tol <= 0.0 || max_iter < 1)
        throw invalid_input("sum_power_waterfill: bad tolerance or iteration limit");

    const int k = detail::total_users(blocks);
    power_allocation best;
    best.powers.assign(k, total_power / k);
    if (total_power == 0.0)
    {
        best.sum_rate = 0.0;
        best.converged = true;
        return best;
    }
    best.sum_rate = dual_mac_sum_rate(blocks, best.powers);

    std::vector<double> u(k);
    for (int iter = 1; iter <= max_iter; ++iter)
    {
        // Effective inverse gains u_k = 1/z_k, z_k = y_k / (1 - p_k y_k) with
        // y_k = h_k^H A^{-1} h_k, one factorization per block and sweep.
        size_t off = 0;
        for (const auto& h : blocks)
        {
            const cmat a = detail::block_gram(h, best.powers.data() + off);
            Eigen::LLT<cmat> llt(a);
            if (llt.info() != Eigen::Success)
                throw numerical_error("sum_power_waterfill: block Gram matrix lost positive definiteness");
            const cmat y = llt.solve(h);
            for (Eigen::Index c = 0; c < h.cols(); ++c)
            {
                const double yk = std::real(h.col(c).dot(y.col(c)));
                const double denom = std::max(1.0 - best.powers[off + c] * yk, 1e-14);
                const double zk = yk / denom;
                u[off + c] = zk > 0.0 ? 1.0 / zk : std::numeric_limits<double>::infinity();
            }
            off += static_cast<size_t>(h.cols());
        }

        const std::vector<double> target = detail::water_refill(u, total_power);

        // Backtracking line search toward the refill point. The plain refill
        // can overshoot and cycle when groups couple, so only accept steps
        // that increase the objective.
        bool accepted = false;
        double gain = 0.0;
        std::vector<double> trial(k);
        for (double t = 1.0; t >= 1e-4; t *= 0.5)
        {
            for (int i = 0; i < k; ++i)
                trial[i] = best.powers[i] + t * (target[i] - best.powers[i]);
            const double rate = dual_mac_sum_rate(blocks, trial);
            if (rate > best.sum_rate)
            {
                gain = rate - best.sum_rate;
                best.powers = trial;
                best.sum_rate = rate;
                accepted = true;
                break;
            }
        }

        best.iterations = iter;
        if (!accepted || gain <= tol)
        {
            best.converged = true;
            return best;
        }
    }

    throw convergence_error("sum_power_waterfill: no convergence within iteration limit",
                            best.powers, best.sum_rate, best.iterations);
}

// How channels are organized for the sum-rate optimization. per_group splits
// users into one block per group, exact when group eigenspaces are mutually
// orthogonal; full couples all users through one block.
enum class capacity_mode
{
    full,
    per_group
};

// A distribution over user channels that the ergodic capacity estimator can
// draw from.
struct channel_population
{
    enum class kind_t
    {
        iid,
        unitary,
        per_user
    };

    kind_t kind = kind_t::iid;
    int m = 0;
    int k = 0;
    unitary_ensemble ensemble;
    std::vector<group_eigen_structure> user_structures;
};

// K users with i.i.d. CN(0,1) channels to m antennas (no correlation).
inline channel_population iid_population(int m, int k)
{
    if (m < 1 || k < 1)
        throw invalid_input("iid_population: dimensions must be positive");
    channel_population pop;
    pop.kind = channel_population::kind_t::iid;
    pop.m = m;
    pop.k = k;
    return pop;
}

// users_per_group users on each group of the given ensemble.
inline channel_population ensemble_population(const unitary_ensemble& ens, int users_per_group)
{
    if (users_per_group < 1)
        throw invalid_input("ensemble_population: need at least one user per group");
    channel_population pop;
    pop.kind = channel_population::kind_t::unitary;
    pop.ensemble = ens;
    pop.m = ens.m;
    pop.k = users_per_group * ens.g();
    return pop;
}

// One covariance eigenstructure per user (arbitrary, possibly overlapping
// eigenspaces, e.g. drawn from scattering-ring geometry).
inline channel_population per_user_population(std::vector<group_eigen_structure> users)
{
    if (users.empty())
        throw invalid_input("per_user_population: no users");
    channel_population pop;
    pop.kind = channel_population::kind_t::per_user;
    pop.m = users.front().m();
    pop.k = static_cast<int>(users.size());
    for (const auto& s : users)
        if (s.m() != pop.m)
            throw invalid_input("per_user_population: users disagree on antenna count");
    pop.user_structures = std::move(users);
    return pop;
}

namespace detail
{

inline std::vector<cmat> draw_blocks(const channel_population& pop, capacity_mode mode,
                                     philox_rng& rng)
{
    switch (pop.kind)
    {
    case channel_population::kind_t::iid:
    {
        cmat h(pop.m, pop.k);
        for (int u = 0; u < pop.k; ++u)
            for (int a = 0; a < pop.m; ++a)
                h(a, u) = rng.cgaussian();
        return {std::move(h)};
    }
    case channel_population::kind_t::unitary:
    {
        const int kp = pop.k / pop.ensemble.g();
        if (mode == capacity_mode::per_group)
            return sample_effective_channels(pop.ensemble, kp, rng);
        std::vector<cmat> per_group = sample_group_channels(pop.ensemble, kp, rng);
        cmat h(pop.m, pop.k);
        int col = 0;
        for (const auto& hg : per_group)
        {
            h.block(0, col, pop.m, hg.cols()) = hg;
            col += static_cast<int>(hg.cols());
        }
        return {std::move(h)};
    }
    case channel_population::kind_t::per_user:
        return {sample_user_channels(pop.user_structures, rng)};
    }
    throw invalid_input("draw_blocks: unknown population kind");
}

} // namespace detail

// Monte Carlo estimate of the ergodic sum capacity E[max sum rate] at one SNR.
// Trial i draws its channels from the stream (seed, i), so estimates are
// reproducible and independent of trial scheduling. Trials whose power
// optimization fails to converge are dropped and counted; more than 1% of
// them aborts the estimate.
inline capacity_estimate ergodic_sum_capacity(const channel_population& pop, double snr_db,
                                              int trials, std::uint64_t seed,
                                              capacity_mode mode = capacity_mode::full)
{
    if (trials < 2)
        throw invalid_input("ergodic_sum_capacity: need at least two trials");
    if (mode == capacity_mode::per_group && pop.kind != channel_population::kind_t::unitary)
        throw invalid_input("ergodic_sum_capacity: per-group mode requires mutually orthogonal "
                            "group eigenspaces, which only the unitary population guarantees");

    const double power = snr_db_to_power(snr_db);
    std::vector<double> rates;
    rates.reserve(trials);
    int failed = 0;
    for (int t = 0; t < trials; ++t)
    {
        philox_rng rng(seed, static_cast<std::uint64_t>(t));
        const std::vector<cmat> blocks = detail::draw_blocks(pop, mode, rng);
        try
        {
            rates.push_back(sum_power_waterfill(blocks, power).sum_rate);
        }
        catch (const convergence_error&)
        {
            ++failed;
        }
    }
    if (failed * 100 > trials)
        throw numerical_error("ergodic_sum_capacity: more than 1% of trials failed to converge");

    const int n = static_cast<int>(rates.size());
    const double mean = quad::pairwise_sum(rates) / n;
    std::vector<double> sq(rates.size());
    for (size_t i = 0; i < rates.size(); ++i)
        sq[i] = (rates[i] - mean) * (rates[i] - mean);
    const double var = quad::pairwise_sum(sq) / (n - 1);

    capacity_estimate est;
    est.snr_db = snr_db;
    est.mean = mean;
    est.std_error = std::sqrt(var / n);
    est.trials = n;
    est.failed_trials = failed;
    return est;
}

// Ergodic sum capacity across a range of user counts over a fixed population
// shape. Only populations whose user count is a free parameter (i.i.d. and
// unitary) are supported; per-user populations tie their structures to a
// fixed K.
inline std::vector<capacity_estimate> capacity_vs_users_curve(const channel_population& pop,
                                                              const std::vector<int>& user_counts,
                                                              double snr_db, int trials,
                                                              std::uint64_t seed,
                                                              capacity_mode mode = capacity_mode::full)
{
    if (pop.kind == channel_population::kind_t::per_user)
        throw invalid_input("capacity_vs_users_curve: per-user populations fix K");
    std::vector<capacity_estimate> out;
    out.reserve(user_counts.size());
    for (int k : user_counts)
    {
        channel_population p = pop;
        if (p.kind == channel_population::kind_t::unitary)
        {
            const int g = p.ensemble.g();
            if (k % g != 0)
                throw invalid_input("capacity_vs_users_curve: user count must divide into groups");
            p.k = k;
        }
        else
        {
            p.k = k;
        }
        if (p.k < 1)
            throw invalid_input("capacity_vs_users_curve: user counts must be positive");
        out.push_back(ergodic_sum_capacity(p, snr_db, trials, seed, mode));
    }
    return out;
}

} // namespace tcd
