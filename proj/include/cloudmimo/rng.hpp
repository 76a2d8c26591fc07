// SPDX-License-Identifier: Apache-2.0
//
// cloudmimo: air-to-ground LoS MIMO through a stochastic cloud layer
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


#ifndef CLOUDMIMO_RNG_HPP
#define CLOUDMIMO_RNG_HPP

#include <cstdint>
#include <random>

#include "cloudmimo/mac_counter.hpp"

namespace cloudmimo
{

// SplitMix64 finalizer, used to decorrelate derived seeds
std::uint64_t splitmix64(std::uint64_t x);

// Seed of the independent stream for work item `index` under `master_seed`.
// Streams for distinct indices are statistically independent.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index);

// Random source with portable, fully specified samplers.
//
// The std:: distribution classes are implementation-defined, so the same seed
// can produce different draws under libstdc++ and libc++. Every sampler here
// consumes a fixed number of raw engine outputs per call (except Poisson,
// whose consumption depends only on the drawn values). Uniform and Poisson
// draws use only IEEE basic arithmetic plus one exp() per chunk; normal and
// Laplace draws additionally go through log/cos from the platform libm.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1) with 53 random bits
    double uniform01(MacCounter *mac = nullptr);

    // (0, 1) open interval, safe for log()
    double uniform_open01(MacCounter *mac = nullptr);

    // [lo, hi)
    double uniform(double lo, double hi, MacCounter *mac = nullptr);

    // Poisson(mean) by chunked inversion
    std::uint64_t poisson(double mean, MacCounter *mac = nullptr);

    // Standard normal (Box-Muller, cosine branch only; two uniforms per draw)
    double normal();

    // Laplace with location `loc` and scale `b` (variance 2 b^2), inverse CDF
    double laplace(double loc, double b);

  private:
    std::uint64_t poisson_inversion(double mean, MacCounter *mac);

    std::mt19937_64 engine_;
};

} // namespace cloudmimo

#endif
