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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace tcd
{

// Counter-based pseudo-random generator (Philox 4x32, 10 rounds) keyed by
// (seed, stream). Any (seed, stream) pair yields an independent sequence, so
// Monte Carlo trials can draw from stream = trial index and produce identical
// results no matter how work is scheduled. All derived draws (uniform,
// Gaussian, complex Gaussian) are built from the raw counters with fixed
// arithmetic, so sequences are reproducible across platforms.
class philox_rng
{
  public:
    philox_rng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)}
    {
    }

    std::uint32_t next_u32() noexcept
    {
        if (idx_ == 4)
        {
            out_ = block(ctr_, key_);
            advance();
            idx_ = 0;
        }
        return out_[idx_++];
    }

    std::uint64_t next_u64() noexcept
    {
        std::uint64_t lo = next_u32();
        std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    // Uniform on the open interval (0, 1).
    double uniform() noexcept
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    // Standard normal via Box-Muller; the second variate of each pair is cached.
    double gaussian() noexcept
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] keeps the log finite; u2 in [0, 1).
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 6.283185307179586476925286766559 * u2;
        spare_ = rad * std::sin(ang);
        has_spare_ = true;
        return rad * std::cos(ang);
    }

    // Circularly-symmetric complex normal with unit variance: E|w|^2 = 1.
    std::complex<double> cgaussian() noexcept
    {
        double re = gaussian();
        double im = gaussian();
        return {re * 0.70710678118654752440, im * 0.70710678118654752440};
    }

  private:
    static std::uint32_t mulhi(std::uint32_t a, std::uint32_t b, std::uint32_t& lo) noexcept
    {
        std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        lo = static_cast<std::uint32_t>(p);
        return static_cast<std::uint32_t>(p >> 32);
    }

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> c,
                                              std::array<std::uint32_t, 2> k) noexcept
    {
        constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round)
        {
            std::uint32_t lo0, lo1;
            std::uint32_t hi0 = mulhi(M0, c[0], lo0);
            std::uint32_t hi1 = mulhi(M1, c[2], lo1);
            c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
            k[0] += W0;
            k[1] += W1;
        }
        return c;
    }

    void advance() noexcept
    {
        if (++ctr_[0] == 0)
            ++ctr_[1];
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> out_{};
    int idx_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace tcd
