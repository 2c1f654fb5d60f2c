// SPDX-License-Identifier: Apache-2.0
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

#ifndef SIMSWIPT_RNG_HPP
#define SIMSWIPT_RNG_HPP

#include "simswipt/types.hpp"

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>

namespace simswipt
{
    using Rng = std::mt19937_64;

    // Stream labels for counter-based splitting of the master seed.
    enum class Stream : std::uint64_t
    {
        layout = 1,
        shadowing = 2,
        phases = 3,
        heuristic = 4,
        pilots = 5,
        monte_carlo = 6,
        test = 99,
    };

    constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Independent generator for (master, stream, counters...). The result
    // depends only on the arguments, never on call order.
    inline Rng make_stream(std::uint64_t master, Stream stream, std::initializer_list<std::uint64_t> counters = {})
    {
        std::uint64_t h = splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(stream)));
        for (auto c : counters)
            h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
        std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
        return Rng(seq);
    }

    // Circularly-symmetric complex Gaussian vector with per-entry variance `variance`.
    inline CVector complex_gaussian(Index n, Rng &rng, double variance = 1.0)
    {
        std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
        CVector out(n);
        for (Index i = 0; i < n; ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            out(i) = {re, im};
        }
        return out;
    }

    // Runs fn(i) for i in [0, n) on `workers` threads. Each index is owned by
    // exactly one call, so results written per-index are worker-count independent.
    void parallel_for(Index n, int workers, const std::function<void(Index)> &fn);
}

#endif // SIMSWIPT_RNG_HPP
