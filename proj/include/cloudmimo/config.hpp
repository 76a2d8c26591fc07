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


#ifndef CLOUDMIMO_CONFIG_HPP
#define CLOUDMIMO_CONFIG_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cloudmimo/experiment.hpp"

namespace cloudmimo
{

// CLI subcommands. The experiment modes map onto Mode; `field` and
// `phase_dist` are standalone.
enum class Command
{
    field,
    phase_dist,
    capacity_cdf,
    correlation,
    compensated,
    phase_compare,
    mac_count
};

const char *command_name(Command cmd);
std::optional<Command> command_from_name(const std::string &name);

// Configuration is a flat map of dotted keys (`cloud.lambda_s`) to plain
// decimal values in the units documented per key. Lists are comma-separated
// or `start:stop:step` ranges. Length keys (suffix `_m`) also accept a `km`
// or `m` suffix.
struct KeyInfo
{
    std::string name;
    std::string description;
};

const std::vector<KeyInfo> &known_keys();

// Names of the built-in parameter profiles: table1, table3, table4
std::vector<std::string> profile_names();

struct ConfigSources
{
    std::string profile;                                       // empty: none
    std::optional<std::string> file;                           // JSON or `key = value` text
    std::vector<std::pair<std::string, std::string>> env;      // CLOUDMIMO_* variables
    std::vector<std::pair<std::string, std::string>> overrides; // CLI flags, applied last
};

struct PhaseGrid
{
    std::optional<double> min_rad;
    std::optional<double> max_rad;
    int points = 401;
};

struct ResolvedConfig
{
    Command command = Command::capacity_cdf;
    std::map<std::string, std::string> values; // every key that has a value
    std::set<std::string> assumed;             // keys whose value is an unconfirmed default
    std::string profile;
    ExperimentSpec spec;
    PhaseGrid grid;

    // Flat typed config, suitable for re-reading with --config
    nlohmann::json config_json() const;
};

// Merge profile < file < env < overrides, check every key, and build the
// spec. Throws ConfigError whose message lists all problems, one per line.
ResolvedConfig resolve_config(Command command, const ConfigSources &sources);

// Read a config file into key/value pairs (JSON flat object, manifest with a
// `config` member, or `key = value` lines). `assumed` receives markers
// carried by a manifest.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string &path,
                                                                  std::set<std::string> *assumed = nullptr);

// Environment variables CLOUDMIMO_<GROUP>__<KEY> -> group.key
std::vector<std::pair<std::string, std::string>> config_from_environment(char **envp);

// "40km" -> 40000, "500m" -> 500, "12.5" -> 12.5
double parse_length(const std::string &text, const std::string &what);

// Comma list and/or start:stop:step ranges
std::vector<double> parse_list(const std::string &text, const std::string &what, bool lengths);

} // namespace cloudmimo

#endif
