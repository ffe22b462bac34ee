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
#include <vector>

#include "errors.hpp"

namespace tcd::quad
{

struct gl_rule
{
    std::vector<double> x; // nodes on [-1, 1], ascending
    std::vector<double> w; // matching weights
};

// Gauss-Legendre nodes and weights by Newton iteration on the Legendre
// polynomial, seeded with the Chebyshev-angle approximation. Exactness for
// polynomials up to degree 2n-1; nodes are symmetric about zero.
inline gl_rule gauss_legendre(int n)
{
    if (n < 1)
        throw invalid_input("gauss_legendre: order must be positive");
    gl_rule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i)
    {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it)
        {
            // Evaluate P_n and its derivative by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k)
            {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    return rule;
}

template <class F>
double integrate_gl(F&& f, double a, double b, const gl_rule& rule)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        acc += rule.w[i] * f(c + h * rule.x[i]);
    return acc * h;
}

// Double-exponential (tanh-sinh) quadrature over [a, b]. Robust to integrable
// endpoint singularities (inverse square roots, logarithms). Abscissas are
// placed by their offset from the nearer endpoint, computed without
// cancellation, so a singularity at a representable endpoint is sampled all
// the way into the subnormal range; points that still round onto an endpoint
// are skipped.
template <class F>
double tanh_sinh(F&& f, double a, double b, double tol = 1e-12, int max_level = 12)
{
    if (!(b > a))
        throw invalid_input("tanh_sinh: empty interval");
    const double pi_half = 1.5707963267948966;
    const double h0 = 0.5 * (b - a);
    const double t_max = 6.5; // exp(-pi/2 sinh 6.5) underflows double

    auto eval_at = [&](double t, double& weight) -> double {
        double u = pi_half * std::sinh(t);
        double ch = std::cosh(u);
        weight = pi_half * std::cosh(t) / (ch * ch);
        // h0 (1 - tanh|u|) without cancellation; zero once exp overflows.
        double au = std::abs(u);
        double off = au < 350.0 ? h0 * 2.0 / (std::exp(2.0 * au) + 1.0) : 0.0;
        double x = t >= 0.0 ? b - off : a + off;
        if (x <= a || x >= b)
            return std::numeric_limits<double>::quiet_NaN();
        return x;
    };

    double step = 1.0;
    double wt0;
    double x0 = eval_at(0.0, wt0);
    double sum = wt0 * f(x0);
    // level 0: integer abscissas
    for (int k = 1; k <= static_cast<int>(t_max); ++k)
    {
        for (double s : {+1.0, -1.0})
        {
            double wt;
            double x = eval_at(s * k, wt);
            if (x == x && wt > 0.0)
                sum += wt * f(x);
        }
    }
    double prev = sum * step * h0;
    for (int level = 1; level <= max_level; ++level)
    {
        step *= 0.5;
        // add the new midpoints only
        double t = step;
        while (t <= t_max)
        {
            for (double s : {+1.0, -1.0})
            {
                double wt;
                double x = eval_at(s * t, wt);
                if (x == x && wt > 0.0)
                    sum += wt * f(x);
            }
            t += 2.0 * step;
        }
        double cur = sum * step * h0;
        if (level >= 3 && std::abs(cur - prev) <= tol * (1.0 + std::abs(cur)))
            return cur;
        prev = cur;
    }
    return prev;
}

// Deterministic pairwise summation: the reduction tree depends only on the
// element count, so results are bit-stable for a fixed input ordering.
inline double pairwise_sum(const double* v, std::size_t n)
{
    if (n == 0)
        return 0.0;
    if (n <= 8)
    {
        double s = v[0];
        for (std::size_t i = 1; i < n; ++i)
            s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v)
{
    return pairwise_sum(v.data(), v.size());
}

} // namespace tcd::quad
