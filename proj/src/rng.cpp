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


#include "cloudmimo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cloudmimo
{

namespace
{
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
constexpr double kPoissonChunk = 500.0;
} // namespace

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index)
{
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

double Rng::uniform01(MacCounter *mac)
{
    tally(mac, 1);
    return static_cast<double>(engine_() >> 11) * kTwoPow53Inv;
}

double Rng::uniform_open01(MacCounter *mac)
{
    tally(mac, 1);
    return (static_cast<double>(engine_() >> 11) + 0.5) * kTwoPow53Inv;
}

double Rng::uniform(double lo, double hi, MacCounter *mac)
{
    const double u = uniform01(mac);
    tally(mac, 1);
    return lo + (hi - lo) * u;
}

std::uint64_t Rng::poisson_inversion(double mean, MacCounter *mac)
{
    // Sequential search of the CDF. The cap only matters when rounding keeps
    // the accumulated CDF below u; it sits far in the tail.
    const double u = uniform01(mac);
    const auto cap = static_cast<std::uint64_t>(mean + 60.0 * std::sqrt(mean) + 100.0);
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf && k < cap)
    {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
        tally(mac, 2);
    }
    return k;
}

std::uint64_t Rng::poisson(double mean, MacCounter *mac)
{
    if (!(mean > 0.0))
        return 0;
    std::uint64_t total = 0;
    double remaining = mean;
    while (remaining > 0.0)
    {
        const double chunk = std::min(remaining, kPoissonChunk);
        remaining -= chunk;
        total += poisson_inversion(chunk, mac);
    }
    return total;
}

double Rng::normal()
{
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::laplace(double loc, double b)
{
    const double u = uniform_open01() - 0.5;
    const double mag = -b * std::log1p(-2.0 * std::abs(u));
    return u < 0.0 ? loc - mag : loc + mag;
}

} // namespace cloudmimo
