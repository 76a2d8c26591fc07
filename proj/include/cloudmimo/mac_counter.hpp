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


#ifndef CLOUDMIMO_MAC_COUNTER_HPP
#define CLOUDMIMO_MAC_COUNTER_HPP

#include <cstdint>

namespace cloudmimo
{

// Tally of multiply-accumulate operations.
//
// One MAC is one floating-point multiply or divide, with or without a fused
// add. Additions, comparisons, square roots and transcendental calls are not
// counted. Instrumented functions take a nullable pointer and tally next to
// the arithmetic they perform.
struct MacCounter
{
    std::uint64_t count = 0;

    void add(std::uint64_t n) { count += n; }
};

inline void tally(MacCounter *mac, std::uint64_t n)
{
    if (mac != nullptr)
        mac->add(n);
}

} // namespace cloudmimo

#endif
