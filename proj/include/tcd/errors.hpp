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

#include <stdexcept>
#include <string>
#include <vector>

namespace tcd
{

// Base class for everything thrown by this library.
struct error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Malformed caller input: bad dimensions, non-Hermitian matrices, parameter
// values outside their documented ranges, inconsistent geometry.
struct invalid_input : error
{
    using error::error;
};

// A closed-form expression was requested outside the region where it is
// defined (e.g. a Wishart mean with fewer columns than rows).
struct domain_error : error
{
    using error::error;
};

// Experiment-configuration problems (unknown keys, unreadable files,
// out-of-range values). The CLI maps this to exit code 2.
struct config_error : error
{
    using error::error;
};

// An iterative solver ran out of iterations. Carries the best point found so
// a caller may still inspect or use it. The CLI maps this to exit code 3.
struct convergence_error : error
{
    convergence_error(const std::string& msg, std::vector<double> powers, double rate, int iters)
        : error(msg), best_powers(std::move(powers)), best_rate(rate), iterations(iters)
    {
    }

    std::vector<double> best_powers;
    double best_rate;
    int iterations;
};

// Numerical-integration failure (quadrature order ladder exhausted) or other
// unrecoverable floating-point trouble. The CLI maps this to exit code 3.
struct numerical_error : error
{
    using error::error;
};

// An ensemble violated the orthogonality it was declared to have.
struct structure_error : error
{
    using error::error;
};

// A spectral density with (numerically) empty support.
struct degenerate_error : error
{
    using error::error;
};

} // namespace tcd
