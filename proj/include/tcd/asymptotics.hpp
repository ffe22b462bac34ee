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
#include <string>
#include <utility>
#include <vector>

#include "capacity.hpp"
#include "ensemble.hpp"
#include "errors.hpp"
#include "linalg.hpp"

namespace tcd
{

namespace detail
{

// Sum of 1/l for l in [first, last], compensated. Empty when first > last.
inline double harmonic_range(long long first, long long last)
{
    double sum = 0.0;
    double c = 0.0;
    for (long long l = first; l <= last; ++l)
    {
        const double term = 1.0 / static_cast<double>(l);
        const double y = term - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace detail

// H_n = sum of 1/l for l = 1..n, by direct compensated summation.
inline double harmonic_sum(long long n)
{
    if (n < 0)
        throw domain_error("harmonic_sum: n must be nonnegative");
    return detail::harmonic_range(1, n);
}

// Digamma at a positive integer: psi(n) = -gamma + H_{n-1}, in natural-log
// units.
inline double harmonic_psi(long long n)
{
    if (n < 1)
        throw domain_error("harmonic_psi: n must be at least 1");
    return -euler_gamma + detail::harmonic_range(1, n - 1);
}

// Asymptotic expansion of H_n, truncated after the 1/n^2 term so the error is
// O(n^-4). Useful for very large arguments and for the flat-profile offset
// bound derivation.
inline double harmonic_asymptotic(long long n)
{
    if (n < 1)
        throw domain_error("harmonic_asymptotic: n must be at least 1");
    const double x = static_cast<double>(n);
    return std::log(x) + euler_gamma + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x);
}

// E[ln |W W^H|] for an m-by-n matrix W of i.i.d. CN(0,1) entries with n >= m:
// the sum of psi(n - l) over l = 0..m-1, in nats.
inline double wishart_logdet_mean(int m, int n)
{
    if (m < 1 || n < m)
        throw domain_error("wishart_logdet_mean: need n >= m >= 1");
    double sum = 0.0;
    for (int l = 0; l < m; ++l)
        sum += harmonic_psi(n - l);
    return sum;
}

// kappa(x, y) = y G (-gamma + sum_{l=2}^x 1/l + ((x-y)/y) sum_{l=x-y+1}^x 1/l)
// log2 e, the constant term collecting the Wishart log-determinant means of G
// groups. Requires 1 <= y <= x. Algebraically equal to
// G * log2(e) * wishart_logdet_mean(y, x).
inline double kappa(int x, int y, int g)
{
    if (y < 1 || g < 1)
        throw domain_error("kappa: need y >= 1 and G >= 1");
    if (y > x)
        throw domain_error("kappa: requires y <= x");
    const double body = -euler_gamma + detail::harmonic_range(2, x)
                        + (static_cast<double>(x - y) / y) * detail::harmonic_range(x - y + 1, x);
    return y * g * body * log2e;
}

// Per-group covariance eigenvalues, each row nonincreasing and positive. The
// rows share a common length r (the covariance rank).
struct eigenvalue_profile
{
    std::vector<std::vector<double>> groups;

    int g() const { return static_cast<int>(groups.size()); }
    int r() const { return groups.empty() ? 0 : static_cast<int>(groups.front().size()); }

    double lambda_min() const
    {
        double v = groups.at(0).back();
        for (const auto& row : groups)
            v = std::min(v, row.back());
        return v;
    }

    double lambda_max() const
    {
        double v = groups.at(0).front();
        for (const auto& row : groups)
            v = std::max(v, row.front());
        return v;
    }

    // Uniform-boundedness ratio lambda_min / lambda_max, in (0, 1].
    double epsilon() const { return lambda_min() / lambda_max(); }

    // sum_g log2 |Lambda_g| over all retained eigenvalues.
    double log2_det_sum() const
    {
        double s = 0.0;
        for (const auto& row : groups)
            for (double v : row)
                s += std::log2(v);
        return s;
    }
};

inline void validate(const eigenvalue_profile& profile)
{
    if (profile.groups.empty())
        throw invalid_input("eigenvalue profile: no groups");
    const size_t r = profile.groups.front().size();
    if (r == 0)
        throw invalid_input("eigenvalue profile: empty group row");
    for (const auto& row : profile.groups)
    {
        if (row.size() != r)
            throw invalid_input("eigenvalue profile: groups disagree on rank");
        for (size_t i = 0; i < row.size(); ++i)
        {
            if (!(row[i] > 0.0))
                throw invalid_input("eigenvalue profile: eigenvalues must be positive");
            if (i > 0 && row[i] > row[i - 1] + 1e-12)
                throw invalid_input("eigenvalue profile: rows must be nonincreasing");
        }
    }
}

// All groups share one constant eigenvalue.
inline eigenvalue_profile flat_profile(int g, int r, double value)
{
    if (g < 1 || r < 1 || !(value > 0.0))
        throw invalid_input("flat_profile: bad shape or value");
    eigenvalue_profile p;
    p.groups.assign(g, std::vector<double>(r, value));
    return p;
}

inline eigenvalue_profile profile_from_ensemble(const unitary_ensemble& ens)
{
    eigenvalue_profile p;
    for (const auto& grp : ens.groups)
        p.groups.emplace_back(grp.eigenvalues.begin(), grp.eigenvalues.end());
    validate(p);
    return p;
}

// Sandwich endpoints of an asymptotic capacity expression, o(1) terms
// dropped. regime tags which expression produced it so values from different
// normalizations are never compared silently.
struct bound_pair
{
    double lower = 0.0;
    double upper = 0.0;
    double center = 0.0;
    std::string regime;
};

// High-SNR sum-capacity sandwich for the grouped correlated broadcast
// channel. With r < K' every eigenmode is loaded and the bounds need the full
// eigenmode budget r g = m; with r >= K' the user count limits the prelog.
// p_linear is the total transmit power (linear scale, not dB).
inline bound_pair highsnr_bounds(const system_geometry& geo, const eigenvalue_profile& profile,
                                 double p_linear)
{
    validate(geo);
    validate(profile);
    if (profile.g() != geo.g || profile.r() != geo.r)
        throw domain_error("highsnr_bounds: profile shape does not match geometry");
    if (!(p_linear > 0.0))
        throw domain_error("highsnr_bounds: power must be positive");

    const int kp = geo.kp();
    bound_pair b;
    if (geo.r < kp)
    {
        if (geo.r * geo.g != geo.m)
            throw domain_error("highsnr_bounds: the r < K' regime needs the eigenmode budget "
                               "r*g to equal the antenna count");
        b.regime = "r_lt_Kprime";
        b.center = geo.m * std::log2(p_linear / geo.m) + profile.log2_det_sum()
                   + kappa(kp, geo.r, geo.g);
        b.upper = b.center;
        b.lower = b.center + geo.m * std::log2(static_cast<double>(geo.r) / kp);
    }
    else
    {
        b.regime = "r_ge_Kprime";
        b.center = geo.k * std::log2(p_linear / kp) + kappa(geo.r, kp, geo.g);
        b.upper = b.center;
        double offset = 0.0;
        for (const auto& row : profile.groups)
            for (int i = 1; i <= kp; ++i)
                offset += std::log2(row[static_cast<size_t>(geo.r - i)] / geo.g);
        b.lower = b.center + offset;
    }
    return b;
}

// High-SNR sum capacity of the i.i.d. Rayleigh broadcast channel with m >= k:
// k log2(P/k) + kappa(m, k) at G = 1.
inline double iid_highsnr(int m, int k, double p_linear)
{
    if (k < 1 || m < k)
        throw domain_error("iid_highsnr: stated for m >= k >= 1");
    if (!(p_linear > 0.0))
        throw domain_error("iid_highsnr: power must be positive");
    return k * std::log2(p_linear / k) + kappa(m, k, 1);
}

// Affine high-SNR capacity approximation C ~ S_inf (log2 P - L_inf).
struct affine_approx
{
    double s_infinity = 0.0;
    double l_infinity = 0.0;
    int points_used = 0;
};

// Least-squares line through the high-SNR tail of a (snr_db, bits) curve,
// against log2 P. Uses the top third of the grid, at least 3 points.
inline affine_approx affine_fit(std::vector<std::pair<double, double>> curve)
{
    if (curve.size() < 3)
        throw invalid_input("affine_fit: need at least 3 points");
    std::sort(curve.begin(), curve.end());
    const size_t n = curve.size();
    const size_t tail = std::max<size_t>(3, (n + 2) / 3);
    const size_t first = n - tail;

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = first; i < n; ++i)
    {
        const double x = curve[i].first * (std::log2(10.0) / 10.0);
        const double y = curve[i].second;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(tail);
    const double denom = m * sxx - sx * sx;
    if (!(denom > 0.0))
        throw numerical_error("affine_fit: tail SNR points are not distinct");
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;
    if (!(slope > 0.0))
        throw numerical_error("affine_fit: degenerate tail, slope is not positive");

    affine_approx a;
    a.s_infinity = slope;
    a.l_infinity = -intercept / slope;
    a.points_used = static_cast<int>(tail);
    return a;
}

// The two components of the power-offset difference between the correlated
// channel and the i.i.d. baseline, in dB (3 dB per bit of log2).
struct offset_split
{
    double eigen_beamforming_gain_db = 0.0;
    double dimension_loss_db = 0.0;

    double net_db() const { return eigen_beamforming_gain_db + dimension_loss_db; }
};

inline offset_split offset_decomposition(const system_geometry& geo,
                                         const eigenvalue_profile& profile)
{
    validate(geo);
    validate(profile);
    if (profile.g() != geo.g || profile.r() != geo.r)
        throw domain_error("offset_decomposition: profile shape does not match geometry");
    const int kp = geo.kp();
    if (geo.r < kp)
        throw domain_error("offset_decomposition: requires r >= K'");
    if (geo.m < geo.k)
        throw domain_error("offset_decomposition: the i.i.d. reference needs m >= k");

    offset_split s;
    double gain = 0.0;
    for (const auto& row : profile.groups)
        for (int i = 0; i < kp; ++i)
            gain += std::log2(row[static_cast<size_t>(i)]);
    s.eigen_beamforming_gain_db = 3.0 * gain / geo.k;
    s.dimension_loss_db = 3.0 * (kappa(geo.r, kp, geo.g) - kappa(geo.m, geo.k, 1)) / geo.k;
    return s;
}

// Ceiling on the net offset (gain plus loss) for a flat profile at r = K',
// where the harmonic expansion truncates to (3/(2r)) log2 e dB.
inline double flat_offset_bound_db(int r)
{
    if (r < 1)
        throw domain_error("flat_offset_bound_db: r must be at least 1");
    return 3.0 / (2.0 * r) * log2e;
}

// Large-user-count sum capacity of the grouped correlated channel:
// M log2(P/M) + M log2 log2 K + sum_g log2 |Lambda_g|. Valid in the r < K'
// regime where every eigenmode stays loaded as K grows.
inline double largeK_capacity(const system_geometry& geo, const eigenvalue_profile& profile,
                              double p_linear, long long k_users)
{
    validate(geo);
    validate(profile);
    if (profile.g() != geo.g || profile.r() != geo.r)
        throw domain_error("largeK_capacity: profile shape does not match geometry");
    if (k_users < 2)
        throw domain_error("largeK_capacity: needs K >= 2 for log log K");
    if (static_cast<double>(geo.r) >= static_cast<double>(k_users) / geo.g)
        throw domain_error("largeK_capacity: stated for r < K'");
    if (!(p_linear > 0.0))
        throw domain_error("largeK_capacity: power must be positive");
    return geo.m * std::log2(p_linear / geo.m)
           + geo.m * std::log2(std::log2(static_cast<double>(k_users)))
           + profile.log2_det_sum();
}

// Sum capacity when the K' users of each group cooperate, replacing the
// multiuser log log K scheduling gain with log K':
// M log2(P/M) + M log2 K' + sum_g log2 |Lambda_g|. Asymptotic in K'.
inline double intra_group_coop_capacity(const system_geometry& geo,
                                        const eigenvalue_profile& profile, double p_linear)
{
    validate(geo);
    validate(profile);
    if (profile.g() != geo.g || profile.r() != geo.r)
        throw domain_error("intra_group_coop_capacity: profile shape does not match geometry");
    if (!(p_linear > 0.0))
        throw domain_error("intra_group_coop_capacity: power must be positive");
    return geo.m * std::log2(p_linear / geo.m) + geo.m * std::log2(static_cast<double>(geo.kp()))
           + profile.log2_det_sum();
}

enum class fading_population
{
    iid,
    correlated
};

// Large-system limit of the sum capacity per dimension at loading mu = M/K:
// per antenna when mu < 1, per user when mu >= 1. For i.i.d. fading the limit
// is exact (lower = upper); for correlated fading the center is an upper
// bound and the lower endpoint subtracts the worst-case eigenvalue spread.
// The removable singularity at mu = 1 evaluates by its limit.
inline bound_pair large_system_ratio(double mu, int g, double lambda_min, double p_linear,
                                     fading_population population)
{
    if (!(mu > 0.0))
        throw domain_error("large_system_ratio: loading mu must be positive");
    if (!(p_linear > 0.0))
        throw domain_error("large_system_ratio: power must be positive");
    if (population == fading_population::correlated && (g < 1 || !(lambda_min > 0.0)))
        throw domain_error("large_system_ratio: correlated case needs G >= 1 and lambda_min > 0");

    const double e = std::exp(1.0);
    bound_pair b;
    if (mu == 1.0)
    {
        b.center = std::log2(p_linear / e);
        b.regime = "large_system_per_user";
    }
    else if (mu < 1.0)
    {
        b.center = std::log2(p_linear / (e * mu))
                   + ((1.0 - mu) / mu) * std::log2(1.0 / (1.0 - mu));
        b.regime = "large_system_per_antenna";
    }
    else
    {
        b.center = std::log2(mu * p_linear / e) + (mu - 1.0) * std::log2(mu / (mu - 1.0));
        b.regime = "large_system_per_user";
    }
    b.upper = b.center;
    if (population == fading_population::iid)
        b.lower = b.center;
    else
        b.lower = b.center
                  + (mu < 1.0 ? std::log2(mu * lambda_min / g) : std::log2(lambda_min / g));
    return b;
}

// Determinant sandwich for a sum of Hermitian matrices: with both spectra
// sorted in the same order, prod(lambda_i(A) + lambda_i(B)) <= |A + B| <=
// prod(lambda_i(A) + lambda_{n-i+1}(B)). Requires lambda_min(A) +
// lambda_min(B) >= 0.
inline std::pair<double, double> fiedler_det_bounds(const cmat& a, const cmat& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
        throw domain_error("fiedler_det_bounds: matrices must be square and the same size");
    if (!is_hermitian(a) || !is_hermitian(b))
        throw domain_error("fiedler_det_bounds: matrices must be Hermitian");
    const rvec la = eigh_descending(a).first;
    const rvec lb = eigh_descending(b).first;
    const Eigen::Index n = la.size();
    const double scale = std::max(std::abs(la(0)), std::abs(lb(0)));
    if (la(n - 1) + lb(n - 1) < -1e-12 * std::max(scale, 1.0))
        throw domain_error("fiedler_det_bounds: requires lambda_min(A) + lambda_min(B) >= 0");

    double lower = 1.0;
    double upper = 1.0;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        lower *= std::max(la(i) + lb(i), 0.0);
        upper *= std::max(la(i) + lb(n - 1 - i), 0.0);
    }
    return {lower, upper};
}

} // namespace tcd
