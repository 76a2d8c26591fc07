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


#ifndef CLOUDMIMO_NUMFMT_HPP
#define CLOUDMIMO_NUMFMT_HPP

#include <string>
#include <string_view>

namespace cloudmimo
{

// Shortest decimal text that parses back to exactly `v`
std::string format_double(double v);

// Strict full-string parse; throws ConfigError naming `what` on failure
double parse_double(std::string_view text, std::string_view what);

} // namespace cloudmimo

#endif
