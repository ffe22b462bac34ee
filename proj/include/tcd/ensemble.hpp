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
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "one_ring.hpp"
#include "rng.hpp"

namespace tcd
{

// Reduced description of one user's (or one group's) transmit covariance:
// an m x r orthonormal eigenbasis and the r retained eigenvalues in
// nonincreasing order. Channels are synthesized as h = basis * diag(sqrt(ev)) * w
// with w a complex standard normal vector.
struct group_eigen_structure
{
    cmat basis;       // m x r, orthonormal columns
    rvec eigenvalues; // length r, positive, nonincreasing

    int m() const
    {
        return static_cast<int>(basis.rows());
    }
    int rank() const
    {
        return static_cast<int>(basis.cols());
    }
};

// Eigendecomposition with small-eigenvalue truncation. Eigenvalues below
// threshold_ratio times the largest are dropped; the retained basis keeps
// Eigen's orthonormality. Rejects matrices that are not Hermitian within
// 1e-10 or not positive semidefinite within a matching slack.
inline group_eigen_structure eigen_decompose(const covariance_matrix& cov,
                                             double threshold_ratio = 1e-4)
{
    if (!is_hermitian(cov.r, 1e-10))
        throw invalid_input("eigen_decompose: matrix is not Hermitian within tolerance");
    if (!(threshold_ratio > 0.0) || threshold_ratio >= 1.0)
        throw invalid_input("eigen_decompose: threshold ratio must lie in (0, 1)");
    auto [vals, vecs] = eigh_descending(cov.r);
    const double lam_max = vals(0);
    if (!(lam_max > 0.0))
        throw invalid_input("eigen_decompose: matrix has no positive eigenvalue");
    if (vals(vals.size() - 1) < -1e-8 * lam_max)
        throw invalid_input("eigen_decompose: matrix is not positive semidefinite");
    int r = 0;
    while (r < vals.size() && vals(r) >= threshold_ratio * lam_max)
        ++r;
    group_eigen_structure out;
    out.basis = vecs.leftCols(r);
    out.eigenvalues = vals.head(r).cwiseMax(0.0);
    return out;
}

// A family of g groups whose eigenbases are mutually orthogonal columns of a
// common unitary matrix: the concatenation [basis_1 ... basis_g] has
// orthonormal columns (square when r*g = m, tall when r*g < m). Per-group
// eigenvalue profiles each sum to m.
struct unitary_ensemble
{
    int m = 0;
    int r = 0;
    std::vector<group_eigen_structure> groups;

    int g() const
    {
        return static_cast<int>(groups.size());
    }
};

namespace detail
{

inline rvec checked_profile(const std::vector<double>& profile, int r, int m)
{
    if (static_cast<int>(profile.size()) != r)
        throw invalid_input("unitary ensemble: profile length must equal the group rank");
    double sum = 0.0;
    for (double v : profile)
    {
        if (!(v > 0.0))
            throw invalid_input("unitary ensemble: eigenvalues must be positive");
        sum += v;
    }
    if (std::abs(sum - m) > 1e-8 * m)
        throw invalid_input("unitary ensemble: profile must sum to the antenna count");
    rvec out(r);
    for (int i = 0; i < r; ++i)
        out(i) = profile[i];
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

// Haar-distributed unitary: QR of a complex Gaussian matrix with the phase
// convention that makes the R diagonal real positive.
inline cmat haar_unitary(int m, philox_rng& rng)
{
    cmat a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            a(i, j) = rng.cgaussian();
    Eigen::HouseholderQR<cmat> qr(a);
    cmat q = qr.householderQ();
    for (int j = 0; j < m; ++j)
    {
        std::complex<double> d = qr.matrixQR()(j, j);
        double mag = std::abs(d);
        if (mag > 0.0)
            q.col(j) *= d / mag;
    }
    return q;
}

} // namespace detail

// Draws a Haar-random unitary and slices consecutive r-column blocks as the
// group eigenbases, attaching the given per-group eigenvalue profiles
// (profiles may contain one entry, reused for every group). Deterministic in
// the seed.
inline unitary_ensemble synthesize_unitary_ensemble(int m, int g, int r,
                                                    const std::vector<std::vector<double>>& profiles,
                                                    std::uint64_t seed)
{
    if (m < 1 || g < 1 || r < 1)
        throw invalid_input("synthesize_unitary_ensemble: m, g, r must be positive");
    if (static_cast<long long>(r) * g > m)
        throw invalid_input("synthesize_unitary_ensemble: r*g exceeds the antenna count");
    if (profiles.size() != static_cast<std::size_t>(g) && profiles.size() != 1)
        throw invalid_input("synthesize_unitary_ensemble: need one profile or one per group");

    philox_rng rng(seed, 0);
    cmat q = detail::haar_unitary(m, rng);

    unitary_ensemble ens;
    ens.m = m;
    ens.r = r;
    ens.groups.reserve(g);
    for (int i = 0; i < g; ++i)
    {
        const auto& prof = profiles.size() == 1 ? profiles[0] : profiles[i];
        group_eigen_structure grp;
        grp.basis = q.middleCols(static_cast<Eigen::Index>(i) * r, r);
        grp.eigenvalues = detail::checked_profile(prof, r, m);
        ens.groups.push_back(std::move(grp));
    }
    return ens;
}

// Largest |<u_i, u_j>| between eigenvectors of different groups; exact
// ensembles give values at rounding level.
inline double ensemble_cross_coherence(const unitary_ensemble& ens)
{
    double worst = 0.0;
    for (int i = 0; i < ens.g(); ++i)
        for (int j = i + 1; j < ens.g(); ++j)
        {
            cmat cross = ens.groups[i].basis.adjoint() * ens.groups[j].basis;
            worst = std::max(worst, cross.cwiseAbs().maxCoeff());
        }
    return worst;
}

// One channel vector per user, arranged column-wise per group: each group
// yields an m x users matrix with columns basis * diag(sqrt(ev)) * w. Draw
// order is fixed (group-major, user-major, antenna-major) so results depend
// only on the generator state.
inline std::vector<cmat> sample_group_channels(const unitary_ensemble& ens, int users_per_group,
                                               philox_rng& rng)
{
    if (users_per_group < 1)
        throw invalid_input("sample_group_channels: need at least one user per group");
    std::vector<cmat> out;
    out.reserve(ens.groups.size());
    for (const auto& grp : ens.groups)
    {
        const int r = grp.rank();
        cmat w(r, users_per_group);
        for (int u = 0; u < users_per_group; ++u)
            for (int i = 0; i < r; ++i)
                w(i, u) = rng.cgaussian();
        cmat scaled = grp.eigenvalues.cwiseSqrt().asDiagonal() * w;
        out.push_back(grp.basis * scaled);
    }
    return out;
}

// Reduced-dimension equivalent of sample_group_channels: r x users matrices
// diag(sqrt(ev)) * w per group, skipping the common eigenbasis rotation.
// With the same generator state the draws match sample_group_channels
// entry-for-entry before rotation.
inline std::vector<cmat> sample_effective_channels(const unitary_ensemble& ens, int users_per_group,
                                                   philox_rng& rng)
{
    if (users_per_group < 1)
        throw invalid_input("sample_effective_channels: need at least one user per group");
    std::vector<cmat> out;
    out.reserve(ens.groups.size());
    for (const auto& grp : ens.groups)
    {
        const int r = grp.rank();
        cmat w(r, users_per_group);
        for (int u = 0; u < users_per_group; ++u)
            for (int i = 0; i < r; ++i)
                w(i, u) = rng.cgaussian();
        out.push_back(grp.eigenvalues.cwiseSqrt().asDiagonal() * w);
    }
    return out;
}

// Channels for users with individual covariance structures (columns in user
// order). Used for populations without any shared eigenbasis.
inline cmat sample_user_channels(const std::vector<group_eigen_structure>& users, philox_rng& rng)
{
    if (users.empty())
        throw invalid_input("sample_user_channels: empty user list");
    const int m = users.front().m();
    cmat h(m, static_cast<int>(users.size()));
    for (std::size_t u = 0; u < users.size(); ++u)
    {
        if (users[u].m() != m)
            throw invalid_input("sample_user_channels: inconsistent antenna counts");
        const int r = users[u].rank();
        cvec w(r);
        for (int i = 0; i < r; ++i)
            w(i) = rng.cgaussian();
        h.col(static_cast<Eigen::Index>(u)) =
            users[u].basis * (users[u].eigenvalues.cwiseSqrt().asDiagonal() * w);
    }
    return h;
}

// Seeded convenience wrappers: stream index = trial, draws consumed
// sequentially inside the trial.
inline std::vector<cmat> sample_group_channels(const unitary_ensemble& ens, int users_per_group,
                                               std::uint64_t seed, std::uint64_t trial)
{
    philox_rng rng(seed, trial);
    return sample_group_channels(ens, users_per_group, rng);
}

inline std::vector<cmat> sample_effective_channels(const unitary_ensemble& ens, int users_per_group,
                                                   std::uint64_t seed, std::uint64_t trial)
{
    philox_rng rng(seed, trial);
    return sample_effective_channels(ens, users_per_group, rng);
}

} // namespace tcd
