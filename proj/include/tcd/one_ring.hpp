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
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "quadrature.hpp"

namespace tcd
{

// Scattering-ring geometry seen from a uniform linear array:
// azimuth center theta, angular half-spread delta (radians), antenna spacing
// in carrier wavelengths. theta in [-pi/2, pi/2], delta in [0, pi/2],
// spacing > 0. A spread below 1e-9 rad is treated as a pure line-of-sight
// steering direction (rank-one covariance).
struct one_ring_params
{
    double theta = 0.0;
    double delta = 0.0;
    double spacing = 0.5;
};

inline void validate(const one_ring_params& p)
{
    const double pi_half = 1.5707963267948966;
    if (!(p.delta >= 0.0) || p.delta > pi_half + 1e-12)
        throw invalid_input("one_ring_params: angular spread must lie in [0, pi/2]");
    if (!(std::abs(p.theta) <= pi_half + 1e-12))
        throw invalid_input("one_ring_params: azimuth must lie in [-pi/2, pi/2]");
    if (!(p.spacing > 0.0))
        throw invalid_input("one_ring_params: spacing must be positive");
}

// Transmit covariance of one user, normalized so that trace(R) = m
// (unit diagonal). Hermitian Toeplitz by construction.
struct covariance_matrix
{
    cmat r;

    int m() const
    {
        return static_cast<int>(r.rows());
    }
};

// Antenna-pair correlation: average of the array phase response over the
// arrival window. Entries depend on the antenna index difference only, so
// one column of integrals determines the whole matrix. Each integral is
// evaluated with a Gauss-Legendre ladder (64 up to 4096 nodes, doubling);
// a level is accepted once it agrees with the previous one to 1e-9 on every
// lag. The integrand oscillates roughly as many times as the largest lag, so
// large arrays need the deep rungs; if even the deepest two disagree, a
// numerical error is raised.
inline covariance_matrix one_ring_covariance(int m, const one_ring_params& p)
{
    validate(p);
    if (m < 1)
        throw invalid_input("one_ring_covariance: need at least one antenna");

    std::vector<std::complex<double>> lag(m);
    lag[0] = 1.0;

    if (p.delta < 1e-9)
    {
        // Rank-one limit: pure steering vector toward theta.
        const double c = 6.283185307179586 * p.spacing * std::sin(p.theta);
        for (int k = 1; k < m; ++k)
            lag[k] = std::polar(1.0, c * k);
    }
    else
    {
        auto eval_all = [&](const quad::gl_rule& rule, std::vector<std::complex<double>>& out) {
            out.assign(m, std::complex<double>(0.0, 0.0));
            const int n = static_cast<int>(rule.x.size());
            std::vector<double> sines(n);
            for (int i = 0; i < n; ++i)
                sines[i] = std::sin(p.delta * rule.x[i] + p.theta);
            const double c = 6.283185307179586 * p.spacing;
            for (int k = 1; k < m; ++k)
            {
                std::complex<double> acc(0.0, 0.0);
                for (int i = 0; i < n; ++i)
                {
                    double phase = c * k * sines[i];
                    acc += rule.w[i] * std::complex<double>(std::cos(phase), std::sin(phase));
                }
                out[k] = acc * 0.5; // (delta / (2 delta)) from the window normalization
            }
            out[0] = 1.0;
        };

        static const int orders[] = {64, 128, 256, 512, 1024, 2048, 4096};
        std::vector<std::complex<double>> prev, cur;
        eval_all(quad::gauss_legendre(orders[0]), prev);
        bool settled = false;
        for (std::size_t lvl = 1; lvl < std::size(orders); ++lvl)
        {
            eval_all(quad::gauss_legendre(orders[lvl]), cur);
            double worst = 0.0;
            for (int k = 0; k < m; ++k)
                worst = std::max(worst, std::abs(cur[k] - prev[k]));
            if (worst <= 1e-9)
            {
                lag = cur;
                settled = true;
                break;
            }
            prev.swap(cur);
        }
        if (!settled)
            throw numerical_error("one_ring_covariance: quadrature ladder exhausted");
    }

    covariance_matrix cov;
    cov.r.resize(m, m);
    for (int p_i = 0; p_i < m; ++p_i)
        for (int q_i = 0; q_i < m; ++q_i)
        {
            int k = p_i - q_i;
            cov.r(p_i, q_i) = (k >= 0) ? lag[k] : std::conj(lag[-k]);
        }
    return cov;
}

// Asymptotic eigenvalue density of the one-ring covariance family on the
// normalized spatial-frequency interval [-1/2, 1/2]. The density is a sum of
// circular-arc terms indexed by the integer aliases of the arrival window;
// its support is a finite union of intervals whose total measure equals
// spacing * (sin(theta + delta) - sin(theta - delta)) when that window stays
// inside the visible region.
struct eigenvalue_spectrum
{
    std::function<double(double)> density;              // S(xi); zero off support
    std::vector<std::pair<double, double>> support;     // merged intervals, ascending
    std::vector<std::pair<double, double>> pieces;      // fine partition, smooth interior
    double measure = 0.0;                               // total support length
};

inline eigenvalue_spectrum one_ring_spectrum(const one_ring_params& p)
{
    validate(p);
    if (p.delta < 1e-15)
        throw degenerate_error("one_ring_spectrum: zero angular spread");
    if (std::abs(p.theta) + p.delta > 1.5707963267948966 + 1e-12)
        throw invalid_input("one_ring_spectrum: arrival window exceeds the visible region");

    const double d = p.spacing;
    const double a = d * std::sin(p.theta - p.delta);
    const double b = d * std::sin(p.theta + p.delta);
    const double two_delta = 2.0 * p.delta;

    auto density = [a, b, d, two_delta](double xi) -> double {
        if (xi < -0.5 || xi > 0.5)
            return 0.0;
        double s = 0.0;
        const int k_lo = static_cast<int>(std::floor(xi + a));
        const int k_hi = static_cast<int>(std::ceil(xi + b));
        for (int k = k_lo; k <= k_hi; ++k)
        {
            const double u = k - xi;
            if (u < a || u > b)
                continue;
            const double rad = d * d - u * u;
            if (rad <= 0.0)
                continue;
            s += 1.0 / std::sqrt(rad);
        }
        return s / two_delta;
    };

    // Candidate breakpoints: window edges and arc edges of every alias,
    // clipped to the fundamental interval.
    std::vector<double> cuts{-0.5, 0.5};
    const int k_min = static_cast<int>(std::floor(-0.5 + a)) - 1;
    const int k_max = static_cast<int>(std::ceil(0.5 + b)) + 1;
    for (int k = k_min; k <= k_max; ++k)
        for (double cut : {k - a, k - b, k - d, k + d})
            if (cut > -0.5 && cut < 0.5)
                cuts.push_back(cut);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-14; }),
               cuts.end());

    eigenvalue_spectrum spec;
    spec.density = density;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi - lo < 1e-14)
            continue;
        if (density(0.5 * (lo + hi)) > 0.0)
        {
            spec.pieces.emplace_back(lo, hi);
            spec.measure += hi - lo;
            if (!spec.support.empty() && std::abs(spec.support.back().second - lo) < 1e-13)
                spec.support.back().second = hi;
            else
                spec.support.emplace_back(lo, hi);
        }
    }
    if (spec.pieces.empty() || spec.measure <= 0.0)
        throw degenerate_error("one_ring_spectrum: empty support");
    return spec;
}

// Limit of (1/m) log2 det(R) along the covariance family, computed as the
// integral of log2 S over the support. `raw` integrates over the support
// only (a rank-deficient family has raw -> -inf as the support shrinks);
// `normalized` divides by the support measure, giving the mean log-eigenvalue
// of the nonzero part of the spectrum.
struct szego_rate
{
    double raw = 0.0;
    double normalized = 0.0;
};

inline szego_rate szego_logdet_rate(const eigenvalue_spectrum& spec)
{
    if (spec.pieces.empty() || spec.measure <= 0.0)
        throw degenerate_error("szego_logdet_rate: spectrum has empty support");
    double raw = 0.0;
    for (const auto& [lo, hi] : spec.pieces)
        raw += quad::tanh_sinh([&](double x) { return std::log2(spec.density(x)); }, lo, hi, 1e-11);
    return {raw, raw / spec.measure};
}

} // namespace tcd
