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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <utility>

#include "errors.hpp"

namespace tcd
{

using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;

inline constexpr double ln2 = 0.69314718055994530942;
inline constexpr double log2e = 1.44269504088896340736;
inline constexpr double euler_gamma = 0.57721566490153286061; // 20 digits

inline bool is_hermitian(const cmat& a, double tol = 1e-10)
{
    if (a.rows() != a.cols())
        return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// log2 det(A) for Hermitian positive definite A, via Cholesky.
inline double logdet2_hpd(const cmat& a)
{
    Eigen::LLT<cmat> llt(a);
    if (llt.info() != Eigen::Success)
        throw numerical_error("logdet2_hpd: Cholesky factorization failed");
    double acc = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        acc += std::log(l(i, i).real());
    return 2.0 * acc / ln2;
}

// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
// nonincreasing order and eigenvectors matching column-for-column.
inline std::pair<rvec, cmat> eigh_descending(const cmat& a)
{
    Eigen::SelfAdjointEigenSolver<cmat> es(a);
    if (es.info() != Eigen::Success)
        throw numerical_error("eigh_descending: eigensolver failed");
    const Eigen::Index n = a.rows();
    rvec vals(n);
    cmat vecs(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        vals(i) = es.eigenvalues()(n - 1 - i);
        vecs.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return {std::move(vals), std::move(vecs)};
}

} // namespace tcd
