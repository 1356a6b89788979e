// SPDX-License-Identifier: Apache-2.0
//
// guardbeam - mmWave guard-beam blockage prediction toolkit
// Copyright (C) 2026 The guardbeam authors
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

#ifndef GUARDBEAM_RNG_HPP
#define GUARDBEAM_RNG_HPP

#include <complex>
#include <cstdint>

namespace guardbeam
{

// Stateless counter-based generator: every draw is a pure function of (key, stream, counter),
// so noise for (seed, beam, sample) can be produced in any order or on any thread.
class CounterRng
{
public:
    static std::uint64_t mix(std::uint64_t x) noexcept
    {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t bits(std::uint64_t key, std::uint64_t stream, std::uint64_t counter) noexcept
    {
        return mix(mix(mix(key) ^ stream) ^ counter);
    }

    // Uniform on [0, 1) with 53 random bits
    static double uniform(std::uint64_t key, std::uint64_t stream, std::uint64_t counter) noexcept
    {
        return static_cast<double>(bits(key, stream, counter) >> 11) * 0x1.0p-53;
    }

    // Standard complex Gaussian pair (Box-Muller): real and imaginary parts are independent N(0, 1)
    static std::complex<double> gaussian_pair(std::uint64_t key, std::uint64_t stream,
                                              std::uint64_t counter) noexcept;
};

// Derive an independent 64-bit seed for sub-experiment `index` of a parent seed
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept
{
    return CounterRng::bits(parent, 0x5eedULL, index);
}

} // namespace guardbeam

#endif
