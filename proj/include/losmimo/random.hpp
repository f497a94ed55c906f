// SPDX-License-Identifier: Apache-2.0
//
// losmimo - line-of-sight MIMO workbench for randomly oriented antenna arrays
// Copyright (C) 2026 The losmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef LOSMIMO_RANDOM_HPP
#define LOSMIMO_RANDOM_HPP

#include "vec3.hpp"

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

namespace losmimo
{
    using Engine = std::mt19937_64;

    // Independent random stream for a (master seed, stream id...) tuple. Streams
    // for different ids do not overlap in practice and are reproducible across
    // runs and thread schedules.
    inline Engine make_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> ids = {})
    {
        std::vector<std::uint32_t> words{static_cast<std::uint32_t>(master_seed),
                                         static_cast<std::uint32_t>(master_seed >> 32),
                                         0x6c6f736dU}; // domain tag
        for (auto id : ids)
        {
            words.push_back(static_cast<std::uint32_t>(id));
            words.push_back(static_cast<std::uint32_t>(id >> 32));
        }
        std::seed_seq seq(words.begin(), words.end());
        return Engine(seq);
    }

    // Uniform on [0, 1) with 53 random bits
    inline double uniform01(Engine &rng)
    {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }

    inline double uniform(Engine &rng, double lo, double hi)
    {
        return lo + (hi - lo) * uniform01(rng);
    }

    // Standard normal via Box-Muller. Stateless so that draws do not depend on
    // previous calls beyond the engine state.
    inline std::pair<double, double> normal_pair(Engine &rng)
    {
        constexpr double two_pi = 6.283185307179586476925286766559;
        double u1 = uniform01(rng);
        while (u1 == 0.0)
            u1 = uniform01(rng);
        const double u2 = uniform01(rng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
    }

    // Circularly-symmetric complex Gaussian with E|w|^2 = variance
    inline std::complex<double> complex_normal(Engine &rng, double variance = 1.0)
    {
        const auto [a, b] = normal_pair(rng);
        const double s = std::sqrt(0.5 * variance);
        return {s * a, s * b};
    }

    // Haar-uniform rotation: an isotropic Gaussian 4-vector normalized onto S^3
    // is a uniform unit quaternion, which maps to a uniform element of SO(3).
    inline Rotation uniform_rotation(Engine &rng)
    {
        for (;;)
        {
            const auto [a, b] = normal_pair(rng);
            const auto [c, d] = normal_pair(rng);
            const double n2 = a * a + b * b + c * c + d * d;
            if (n2 > 1e-300)
                return Rotation::from_quaternion(a, b, c, d);
        }
    }

    // Uniform direction on the unit sphere
    inline Vec3 uniform_direction(Engine &rng)
    {
        for (;;)
        {
            const auto [a, b] = normal_pair(rng);
            const auto [c, d] = normal_pair(rng);
            (void)d;
            const Vec3 v{a, b, c};
            const double n = norm(v);
            if (n > 1e-150)
                return (1.0 / n) * v;
        }
    }
}

#endif
