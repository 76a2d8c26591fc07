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


#include "cloudmimo/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cloudmimo/errors.hpp"
#include "cloudmimo/numfmt.hpp"

namespace cloudmimo
{

namespace
{

enum class Kind
{
    real,
    integer,
    seed,
    boolean,
    list
};

struct KeyDef
{
    const char *name;
    Kind kind;
    bool length; // accepts km / m suffix
    const char *description;
};

// clang-format off
const KeyDef kKeys[] = {
    {"cloud.width_m",            Kind::real,    true,  "cloud region width W, m"},
    {"cloud.thickness_m",        Kind::real,    true,  "cloud layer thickness D, m"},
    {"cloud.max_thickness_m",    Kind::real,    true,  "maximum cloud thickness D_max, m"},
    {"cloud.lambda_s",           Kind::real,    false, "Poisson density lambda_s, cloudlets per m^2"},
    {"cloud.alpha",              Kind::real,    false, "smoothness factor alpha in (0, 1]"},
    {"cloud.max_iwc_g_m3",       Kind::real,    false, "maximum ice/water content C, g/m^3"},
    {"cloud.speed_m_s",          Kind::real,    false, "cloudlet drift speed V_b, m/s"},
    {"cloud.max_expected_count", Kind::real,    false, "safety cap on the expected cloudlet count"},
    {"physics.n_per_m3",         Kind::real,    false, "mixture sphere density n, 1/m^3"},
    {"physics.v_ice_m3",         Kind::real,    false, "ice sphere volume V_ice, m^3"},
    {"physics.eps_ice",          Kind::real,    false, "real relative permittivity of ice"},
    {"physics.frequency_hz",     Kind::real,    false, "carrier frequency, Hz"},
    {"mimo.num_tx",              Kind::integer, false, "number of transmit antennas (airborne)"},
    {"mimo.num_rx",              Kind::integer, false, "number of receive antennas (ground)"},
    {"mimo.tx_spacing_m",        Kind::real,    true,  "transmit element spacing, m"},
    {"mimo.rx_spacing_m",        Kind::real,    true,  "receive element spacing, m"},
    {"mimo.snr_db",              Kind::real,    false, "average receive SNR, dB"},
    {"mimo.distance_m",          Kind::real,    true,  "link distance, m"},
    {"mimo.compensated",         Kind::boolean, false, "identical received power on every entry (true/false)"},
    {"link.elevation_deg",       Kind::real,    false, "link elevation, degrees in (0, 90]"},
    {"link.cloud_upper_m",       Kind::real,    true,  "altitude of the top of the cloud layer, m"},
    {"run.trials",               Kind::integer, false, "Monte Carlo trials per sweep point"},
    {"run.seed",                 Kind::seed,    false, "master seed (unsigned 64-bit)"},
    {"run.dt_s",                 Kind::real,    false, "time step for the time-varying phase, s"},
    {"analytic.k_max",           Kind::integer, false, "truncation of the k-sums, 0 = automatic"},
    {"sweep.rwc",                Kind::list,    false, "relative water content values (IWC / 0.6 g/m^3)"},
    {"sweep.thickness_m",        Kind::list,    true,  "cloud thickness values, m"},
    {"sweep.distance_m",         Kind::list,    true,  "link distance grid, m"},
    {"phase.grid_min_rad",       Kind::real,    false, "phase-dist grid start, rad"},
    {"phase.grid_max_rad",       Kind::real,    false, "phase-dist grid end, rad"},
    {"phase.grid_points",        Kind::integer, false, "phase-dist grid size"},
};
// clang-format on

const KeyDef *find_key(const std::string &name)
{
    for (const auto &k : kKeys)
        if (name == k.name)
            return &k;
    return nullptr;
}

using Layer = std::vector<std::pair<std::string, std::string>>;

const std::string kVIceDefault = format_double(4.0 / 3.0 * std::numbers::pi * 1.0e-12);

// Physics-critical defaults without a reference value; always flagged
const Layer kAssumedDefaults = {
    {"cloud.alpha", "0.5"},
    {"physics.n_per_m3", "30000"},
    {"physics.v_ice_m3", kVIceDefault},
    {"physics.eps_ice", "3.15"},
};

const Layer kRunDefaults = {
    {"cloud.max_expected_count", "10000000"},
    {"mimo.compensated", "false"},
    {"run.seed", "1"},
    {"run.dt_s", "0"},
    {"analytic.k_max", "0"},
    {"phase.grid_points", "401"},
};

struct Profile
{
    const char *name;
    Layer given;   // values from the reference parameter tables
    Layer assumed;   // values the tables leave open
};

const std::vector<Profile> &profiles()
{
    static const std::vector<Profile> p = {
        {"table1",
         {{"cloud.lambda_s", "0.002"},
          {"physics.n_per_m3", "30000"},
          {"cloud.max_iwc_g_m3", "0.4"},
          {"cloud.speed_m_s", "1000"},
          {"link.elevation_deg", "85.14"},
          {"cloud.thickness_m", "1000"},
          {"physics.frequency_hz", "73.5e9"}},
         {{"cloud.width_m", "20"}, {"cloud.max_thickness_m", "1000"}}},
        {"table3",
         {{"cloud.lambda_s", "0.002"},
          {"physics.n_per_m3", "30000"},
          {"cloud.max_iwc_g_m3", "0.4"},
          {"cloud.speed_m_s", "1000"},
          {"cloud.thickness_m", "1000"},
          {"mimo.num_tx", "2"},
          {"mimo.num_rx", "2"},
          {"mimo.snr_db", "20"},
          {"physics.frequency_hz", "73.5e9"},
          {"mimo.tx_spacing_m", "1"},
          {"mimo.rx_spacing_m", "6.0827"},
          {"mimo.distance_m", "10000"},
          {"link.cloud_upper_m", "8000"}},
         {{"cloud.width_m", "20"}, {"cloud.max_thickness_m", "1000"}, {"link.elevation_deg", "90"}}},
        {"table4",
         {{"cloud.lambda_s", "0.002"},
          {"physics.n_per_m3", "30000"},
          {"cloud.max_iwc_g_m3", "0.4"},
          {"cloud.speed_m_s", "1000"},
          {"cloud.thickness_m", "1000"},
          {"mimo.num_tx", "2"},
          {"mimo.num_rx", "2"},
          {"mimo.snr_db", "20"},
          {"physics.frequency_hz", "73.5e9"},
          {"mimo.tx_spacing_m", "1"},
          {"mimo.rx_spacing_m", "5"},
          {"link.cloud_upper_m", "8000"}},
         {{"cloud.width_m", "20"},
          {"cloud.max_thickness_m", "1000"},
          {"link.elevation_deg", "90"},
          {"mimo.distance_m", "30000"},
          {"sweep.distance_m", "500:30000:500"}}},
    };
    return p;
}

std::vector<std::string> required_keys(Command cmd)
{
    std::vector<std::string> req = {"cloud.width_m",     "cloud.thickness_m",   "cloud.max_thickness_m",
                                    "cloud.lambda_s",    "cloud.max_iwc_g_m3",  "cloud.speed_m_s"};
    if (cmd != Command::field)
        req.push_back("physics.frequency_hz");
    if (cmd == Command::capacity_cdf || cmd == Command::correlation || cmd == Command::compensated)
    {
        for (const char *k : {"mimo.num_tx", "mimo.num_rx", "mimo.tx_spacing_m", "mimo.rx_spacing_m", "mimo.snr_db",
                              "mimo.distance_m", "link.elevation_deg", "link.cloud_upper_m"})
            req.emplace_back(k);
    }
    if (cmd == Command::correlation || cmd == Command::compensated)
        req.emplace_back("sweep.distance_m");
    return req;
}

std::string default_trials(Command cmd)
{
    switch (cmd)
    {
    case Command::phase_compare:
        return "100000";
    case Command::mac_count:
        return std::to_string(kMacRounds);
    default:
        return "10000";
    }
}

std::string trim(std::string s)
{
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string json_scalar_text(const nlohmann::json &v)
{
    if (v.is_boolean())
        return v.get<bool>() ? "true" : "false";
    if (v.is_number_unsigned())
        return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer())
        return std::to_string(v.get<std::int64_t>());
    if (v.is_number_float())
        return format_double(v.get<double>());
    if (v.is_string())
        return v.get<std::string>();
    throw ConfigError("config value " + v.dump() + " is not a scalar");
}

std::string json_value_text(const nlohmann::json &v)
{
    if (!v.is_array())
        return json_scalar_text(v);
    std::string out;
    for (const auto &e : v)
        out += (out.empty() ? "" : ",") + json_scalar_text(e);
    return out;
}

// Typed view of the merged values
struct Typed
{
    std::map<std::string, double> real;
    std::map<std::string, long long> integer;
    std::map<std::string, std::uint64_t> seed;
    std::map<std::string, bool> boolean;
    std::map<std::string, std::vector<double>> list;
};

bool parse_bool(const std::string &text, bool &out)
{
    std::string t = trim(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "yes" || t == "on")
        out = true;
    else if (t == "false" || t == "0" || t == "no" || t == "off")
        out = false;
    else
        return false;
    return true;
}

} // namespace

const char *command_name(Command cmd)
{
    switch (cmd)
    {
    case Command::field:
        return "field";
    case Command::phase_dist:
        return "phase-dist";
    case Command::capacity_cdf:
        return "capacity-cdf";
    case Command::correlation:
        return "correlation";
    case Command::compensated:
        return "compensated";
    case Command::phase_compare:
        return "phase-compare";
    case Command::mac_count:
        return "mac-count";
    }
    return "unknown";
}

std::optional<Command> command_from_name(const std::string &name)
{
    for (Command c : {Command::field, Command::phase_dist, Command::capacity_cdf, Command::correlation,
                      Command::compensated, Command::phase_compare, Command::mac_count})
        if (name == command_name(c))
            return c;
    return std::nullopt;
}

const std::vector<KeyInfo> &known_keys()
{
    static const std::vector<KeyInfo> keys = [] {
        std::vector<KeyInfo> out;
        for (const auto &k : kKeys)
            out.push_back({k.name, k.description});
        return out;
    }();
    return keys;
}

std::vector<std::string> profile_names()
{
    std::vector<std::string> out;
    for (const auto &p : profiles())
        out.emplace_back(p.name);
    return out;
}

double parse_length(const std::string &text, const std::string &what)
{
    std::string t = trim(text);
    double scale = 1.0;
    if (t.size() > 2 && (t.ends_with("km") || t.ends_with("KM")))
    {
        scale = 1000.0;
        t.resize(t.size() - 2);
    }
    else if (t.size() > 1 && (t.ends_with('m') || t.ends_with('M')))
        t.resize(t.size() - 1);
    return parse_double(t, what) * scale;
}

std::vector<double> parse_list(const std::string &text, const std::string &what, bool lengths)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    auto num = [&](const std::string &s) { return lengths ? parse_length(s, what) : parse_double(s, what); };
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (item.empty())
            continue;
        const auto c1 = item.find(':');
        if (c1 == std::string::npos)
        {
            out.push_back(num(item));
            continue;
        }
        const auto c2 = item.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw ConfigError(what + ": range '" + item + "' must be start:stop:step");
        const double start = num(item.substr(0, c1));
        const double stop = num(item.substr(c1 + 1, c2 - c1 - 1));
        const double step = num(item.substr(c2 + 1));
        if (!(step > 0.0) || stop < start)
            throw ConfigError(what + ": range '" + item + "' needs step > 0 and stop >= start");
        const auto n = static_cast<long long>(std::floor((stop - start) / step * (1.0 + 1e-12))) + 1;
        if (n > 1000000)
            throw ConfigError(what + ": range '" + item + "' expands to more than 10^6 values");
        for (long long i = 0; i < n; ++i)
            out.push_back(start + static_cast<double>(i) * step);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string &path, std::set<std::string> *assumed)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    Layer out;
    const std::string head = trim(text);
    if (!head.empty() && head.front() == '{')
    {
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(head);
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
        }
        const nlohmann::json *obj = &j;
        if (j.contains("config") && j["config"].is_object())
        {
            obj = &j["config"];
            if (assumed != nullptr && j.contains("assumed") && j["assumed"].is_array())
                for (const auto &a : j["assumed"])
                    assumed->insert(a.get<std::string>());
        }
        for (const auto &[k, v] : obj->items())
            out.emplace_back(k, json_value_text(v));
        return out;
    }

    std::stringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> config_from_environment(char **envp)
{
    Layer out;
    if (envp == nullptr)
        return out;
    const std::string prefix = "CLOUDMIMO_";
    for (char **e = envp; *e != nullptr; ++e)
    {
        const std::string entry(*e);
        if (entry.rfind(prefix, 0) != 0)
            continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            continue;
        std::string key = entry.substr(prefix.size(), eq - prefix.size());
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
        std::string dotted;
        for (std::size_t i = 0; i < key.size(); ++i)
        {
            if (key[i] == '_' && i + 1 < key.size() && key[i + 1] == '_')
            {
                dotted += '.';
                ++i;
            }
            else
                dotted += key[i];
        }
        out.emplace_back(dotted, entry.substr(eq + 1));
    }
    return out;
}

nlohmann::json ResolvedConfig::config_json() const
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto &[name, text] : values)
    {
        const KeyDef *def = find_key(name);
        if (def == nullptr)
            continue;
        switch (def->kind)
        {
        case Kind::real:
            j[name] = def->length ? parse_length(text, name) : parse_double(text, name);
            break;
        case Kind::integer:
            j[name] = static_cast<long long>(parse_double(text, name));
            break;
        case Kind::seed:
            j[name] = std::stoull(trim(text));
            break;
        case Kind::boolean: {
            bool b = false;
            parse_bool(text, b);
            j[name] = b;
            break;
        }
        case Kind::list:
            j[name] = parse_list(text, name, def->length);
            break;
        }
    }
    return j;
}

ResolvedConfig resolve_config(Command command, const ConfigSources &sources)
{
    std::vector<std::string> errors;
    ResolvedConfig rc;
    rc.command = command;
    rc.profile = sources.profile;

    auto set = [&](const std::string &key, const std::string &value, bool is_assumed, const std::string &origin) {
        if (find_key(key) == nullptr)
        {
            errors.push_back("unknown key '" + key + "' (" + origin + ")");
            return;
        }
        rc.values[key] = value;
        if (is_assumed)
            rc.assumed.insert(key);
        else
            rc.assumed.erase(key);
    };

    for (const auto &[k, v] : kRunDefaults)
        set(k, v, false, "default");
    set("run.trials", default_trials(command), false, "default");
    for (const auto &[k, v] : kAssumedDefaults)
        set(k, v, true, "default");

    if (!sources.profile.empty())
    {
        const auto &all = profiles();
        const auto it = std::find_if(all.begin(), all.end(), [&](const Profile &p) { return sources.profile == p.name; });
        if (it == all.end())
            errors.push_back("unknown profile '" + sources.profile + "' (known: table1, table3, table4)");
        else
        {
            for (const auto &[k, v] : it->given)
                set(k, v, false, "profile " + sources.profile);
            for (const auto &[k, v] : it->assumed)
                set(k, v, true, "profile " + sources.profile);
        }
    }
    if (sources.file)
    {
        std::set<std::string> carried;
        try
        {
            for (const auto &[k, v] : read_config_file(*sources.file, &carried))
                set(k, v, carried.count(k) > 0, "file " + *sources.file);
        }
        catch (const ConfigError &e)
        {
            errors.emplace_back(e.what());
        }
    }
    for (const auto &[k, v] : sources.env)
        set(k, v, false, "environment");
    for (const auto &[k, v] : sources.overrides)
        set(k, v, false, "command line");

    for (const auto &k : required_keys(command))
        if (rc.values.count(k) == 0)
            errors.push_back("missing required key '" + k + "'");

    Typed t;
    for (const auto &[name, text] : rc.values)
    {
        const KeyDef *def = find_key(name);
        try
        {
            switch (def->kind)
            {
            case Kind::real:
                t.real[name] = def->length ? parse_length(text, name) : parse_double(text, name);
                break;
            case Kind::integer: {
                const double v = parse_double(text, name);
                if (v != std::floor(v) || std::abs(v) > 1e15)
                    throw ConfigError(name + ": '" + text + "' is not an integer");
                t.integer[name] = static_cast<long long>(v);
                break;
            }
            case Kind::seed: {
                const std::string s = trim(text);
                if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
                    throw ConfigError(name + ": '" + text + "' is not an unsigned integer");
                try
                {
                    t.seed[name] = std::stoull(s);
                }
                catch (const std::exception &)
                {
                    throw ConfigError(name + ": '" + text + "' does not fit in 64 bits");
                }
                break;
            }
            case Kind::boolean: {
                bool b = false;
                if (!parse_bool(text, b))
                    throw ConfigError(name + ": '" + text + "' is not true/false");
                t.boolean[name] = b;
                break;
            }
            case Kind::list:
                t.list[name] = parse_list(text, name, def->length);
                break;
            }
        }
        catch (const ConfigError &e)
        {
            errors.emplace_back(e.what());
        }
    }

    if (!errors.empty())
    {
        std::string msg;
        for (const auto &e : errors)
            msg += (msg.empty() ? "" : "\n") + e;
        throw ConfigError(msg);
    }

    auto real_or = [&](const char *k, double fallback) { return t.real.count(k) ? t.real.at(k) : fallback; };
    auto int_or = [&](const char *k, long long fallback) { return t.integer.count(k) ? t.integer.at(k) : fallback; };

    ExperimentSpec &s = rc.spec;
    s.cloud.width_m = real_or("cloud.width_m", 0.0);
    s.cloud.thickness_m = real_or("cloud.thickness_m", 0.0);
    s.cloud.max_thickness_m = real_or("cloud.max_thickness_m", 0.0);
    s.cloud.poisson_density = real_or("cloud.lambda_s", 0.0);
    s.cloud.smoothness_alpha = real_or("cloud.alpha", 0.5);
    s.cloud.max_iwc_g_m3 = real_or("cloud.max_iwc_g_m3", 0.0);
    s.cloud.cloudlet_speed_m_s = real_or("cloud.speed_m_s", 0.0);
    s.cloud.max_expected_count = real_or("cloud.max_expected_count", 1e7);
    s.physics.sphere_density_per_m3 = real_or("physics.n_per_m3", 30000.0);
    s.physics.ice_sphere_volume_m3 = real_or("physics.v_ice_m3", s.physics.ice_sphere_volume_m3);
    s.physics.ice_permittivity_real = real_or("physics.eps_ice", 3.15);
    s.physics.carrier_frequency_hz = real_or("physics.frequency_hz", 73.5e9);
    s.scenario.num_tx = static_cast<int>(int_or("mimo.num_tx", 2));
    s.scenario.num_rx = static_cast<int>(int_or("mimo.num_rx", 2));
    s.scenario.tx_spacing_m = real_or("mimo.tx_spacing_m", 1.0);
    s.scenario.rx_spacing_m = real_or("mimo.rx_spacing_m", 1.0);
    s.scenario.carrier_frequency_hz = s.physics.carrier_frequency_hz;
    s.scenario.snr_db = real_or("mimo.snr_db", 20.0);
    s.scenario.link_distance_m = real_or("mimo.distance_m", 10000.0);
    s.scenario.compensated = t.boolean.count("mimo.compensated") ? t.boolean.at("mimo.compensated") : false;
    s.elevation_deg = real_or("link.elevation_deg", 90.0);
    s.cloud_upper_m = real_or("link.cloud_upper_m", std::max(8000.0, s.cloud.thickness_m));
    s.trials = static_cast<std::size_t>(std::max<long long>(0, int_or("run.trials", 10000)));
    s.master_seed = t.seed.count("run.seed") ? t.seed.at("run.seed") : 1;
    s.cloud.rng_seed = s.master_seed;
    s.dt_s = real_or("run.dt_s", 0.0);
    s.k_max = static_cast<int>(int_or("analytic.k_max", 0));
    if (t.list.count("sweep.rwc"))
        s.sweep.rwc = t.list.at("sweep.rwc");
    if (t.list.count("sweep.thickness_m"))
        s.sweep.thickness_m = t.list.at("sweep.thickness_m");
    if (t.list.count("sweep.distance_m"))
        s.sweep.distance_m = t.list.at("sweep.distance_m");
    if (t.real.count("phase.grid_min_rad"))
        rc.grid.min_rad = t.real.at("phase.grid_min_rad");
    if (t.real.count("phase.grid_max_rad"))
        rc.grid.max_rad = t.real.at("phase.grid_max_rad");
    rc.grid.points = static_cast<int>(int_or("phase.grid_points", 401));

    switch (command)
    {
    case Command::capacity_cdf:
        s.mode = Mode::capacity_cdf;
        break;
    case Command::correlation:
        s.mode = Mode::correlation_sweep;
        break;
    case Command::compensated:
        s.mode = Mode::compensated_sweep;
        break;
    case Command::mac_count:
        s.mode = Mode::mac_count;
        break;
    default:
        s.mode = Mode::phase_compare;
        break;
    }

    try
    {
        if (command == Command::field)
            s.cloud.validate();
        else
            s.validate();
        if (rc.grid.points < 2)
            throw ConfigError("phase.grid_points must be >= 2");
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return rc;
}

} // namespace cloudmimo
