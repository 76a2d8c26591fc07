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


#ifndef CLOUDMIMO_CLI_HPP
#define CLOUDMIMO_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cloudmimo
{

inline constexpr const char *kToolName = "cloudmimo";
inline constexpr const char *kToolVersion = "0.1.0";
inline constexpr int kConfigSchemaVersion = 1;

// Entry point of the command-line tool. `args` excludes the program name.
// Returns 0 on success, 1 on configuration or usage errors, 2 on runtime
// errors. Messages go to `err`, --help / --version text to `out`.
int run_cli(const std::vector<std::string> &args, char **envp, std::ostream &out, std::ostream &err);

} // namespace cloudmimo

#endif
