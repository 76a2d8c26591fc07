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


#include "cloudmimo/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cloudmimo/config.hpp"
#include "cloudmimo/errors.hpp"
#include "cloudmimo/numfmt.hpp"
#include "cloudmimo/rng.hpp"

namespace cloudmimo
{

namespace
{

namespace fs = std::filesystem;

struct Flags
{
    std::string profile;
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    unsigned threads = 0;
    std::string trials;
    std::string seed;
    std::string dt;
    std::string distance;
    std::string distance_grid;
    std::string rwc;
    std::string thickness;
    int frames = 0;
};

std::ofstream open_out(const fs::path &path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    return os;
}

std::vector<std::pair<std::string, std::string>> collect_overrides(Command cmd, const Flags &f)
{
    std::vector<std::pair<std::string, std::string>> ov;
    for (const auto &s : f.sets)
    {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + s + "'");
        ov.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!f.trials.empty())
        ov.emplace_back("run.trials", f.trials);
    if (!f.seed.empty())
        ov.emplace_back("run.seed", f.seed);
    if (!f.dt.empty())
        ov.emplace_back("run.dt_s", f.dt);
    if (!f.distance.empty())
    {
        ov.emplace_back("mimo.distance_m", f.distance);
        if (cmd == Command::capacity_cdf)
            ov.emplace_back("sweep.distance_m", f.distance);
    }
    if (!f.distance_grid.empty())
        ov.emplace_back("sweep.distance_m", f.distance_grid);
    if (!f.rwc.empty())
        ov.emplace_back("sweep.rwc", f.rwc);
    if (!f.thickness.empty())
    {
        ov.emplace_back("cloud.thickness_m", f.thickness);
        if (cmd == Command::capacity_cdf)
            ov.emplace_back("sweep.thickness_m", f.thickness);
    }
    return ov;
}

nlohmann::json geometry_note(const ResolvedConfig &rc)
{
    return nlohmann::json{
        {"ground_array", "centred at the origin"},
        {"airborne_array", "at link distance along the elevation direction"},
        {"arrays", "broadside, axis perpendicular to the link in the vertical plane"},
        {"cloud_layer_m", {rc.spec.cloud_upper_m - rc.spec.cloud.thickness_m, rc.spec.cloud_upper_m}},
        {"distance_sweep", "distance varies at fixed elevation"},
        {"single_ray_modes", "vertical column at x = W/2"},
    };
}

nlohmann::json base_manifest(const ResolvedConfig &rc, unsigned threads)
{
    nlohmann::json assumed = nlohmann::json::array();
    for (const auto &k : rc.assumed)
        assumed.push_back(k);
    return nlohmann::json{{"tool", kToolName},
                          {"version", kToolVersion},
                          {"config_schema", kConfigSchemaVersion},
                          {"subcommand", command_name(rc.command)},
                          {"profile", rc.profile},
                          {"config", rc.config_json()},
                          {"assumed", assumed},
                          {"quantile_convention", kQuantileConvention},
                          {"seed", rc.spec.master_seed},
                          {"threads", threads},
                          {"geometry", geometry_note(rc)}};
}

// phi_rad,pdf_stationary,pdf_total over the configured grid
nlohmann::json run_phase_dist(const ResolvedConfig &rc, std::ostream &csv)
{
    const ExperimentSpec &s = rc.spec;
    const AnalyticParams params = make_analytic_params(s.cloud, s.physics, s.k_max);
    const TimeVaryingResult tv = time_varying_distribution(params, s.dt_s);
    const PhaseDistribution &stat = tv.stationary.distribution;
    const PhaseDistribution &total = tv.distribution;

    const double spread = std::sqrt(std::max(0.0, total.sigma_c2 + total.delta_sigma_c2));
    const double half = spread > 0.0 ? 8.0 * spread : 1.0;
    const double lo = rc.grid.min_rad.value_or(total.phi0 - half);
    const double hi = rc.grid.max_rad.value_or(total.phi0 + half);
    if (!(hi > lo))
        throw ConfigError("phase grid needs max > min");

    auto safe = [](auto fn) {
        try
        {
            return fn();
        }
        catch (const DegenerateDistribution &)
        {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    csv << "phi_rad,pdf_stationary,pdf_total\n";
    const int n = rc.grid.points;
    for (int i = 0; i < n; ++i)
    {
        const double phi = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        csv << format_double(phi) << ',' << format_double(safe([&] { return laplace_pdf(phi, stat); })) << ','
            << format_double(safe([&] { return total_pdf(phi, total); })) << '\n';
    }

    nlohmann::json j = to_json(tv.stationary);
    j["delta_sigma_c2"] = total.delta_sigma_c2;
    j["dt_s"] = total.dt_s;
    j["dl_variance"] = tv.dl_variance;
    return j;
}

nlohmann::json run_field(const ResolvedConfig &rc, const fs::path &dir, std::ostream &csv, int frames)
{
    CloudField field = generate_field(rc.spec.cloud);
    write_field_csv(csv, field);
    nlohmann::json j = field_sidecar(field);
    if (frames > 0)
    {
        if (!(rc.spec.dt_s > 0.0))
            throw ConfigError("--frames needs run.dt_s > 0");
        Rng rng(stream_seed(rc.spec.master_seed, 1));
        for (int f = 0; f <= frames; ++f)
        {
            std::ostringstream name;
            name << "field_" << std::setw(4) << std::setfill('0') << f << ".csv";
            auto os = open_out(dir / name.str());
            write_field_csv(os, field);
            if (f < frames)
                field = step_field(field, rc.spec.dt_s, rng);
        }
        j["frames"] = frames;
    }
    return j;
}

nlohmann::json dispatch(const ResolvedConfig &rc, const fs::path &dir, std::ostream &csv, unsigned threads,
                        int frames)
{
    const ExperimentSpec &s = rc.spec;
    switch (rc.command)
    {
    case Command::field:
        return run_field(rc, dir, csv, frames);
    case Command::phase_dist:
        return run_phase_dist(rc, csv);
    case Command::capacity_cdf: {
        const auto pts = run_capacity_cdf(s, threads);
        write_capacity_csv(csv, pts);
        return summarize(pts);
    }
    case Command::correlation: {
        const auto pts = run_correlation_sweep(s, threads);
        write_correlation_csv(csv, pts);
        return summarize(pts);
    }
    case Command::compensated: {
        const auto pts = run_compensated_sweep(s, threads);
        write_compensated_csv(csv, pts);
        MimoScenario sc = s.scenario;
        sc.compensated = true;
        return summarize(pts, rayleigh_distance(sc));
    }
    case Command::phase_compare: {
        const auto rep = run_phase_compare(s, threads);
        write_phase_compare_csv(csv, rep);
        return summarize(rep);
    }
    case Command::mac_count: {
        const auto rep = run_mac_count(s);
        write_mac_csv(csv, rep);
        return summarize(rep);
    }
    }
    return {};
}

std::string key_listing()
{
    std::string s = "\nConfiguration keys (--set key=value, config file, or CLOUDMIMO_GROUP__KEY):\n";
    for (const auto &k : known_keys())
        s += "  " + k.name + std::string(k.name.size() < 28 ? 28 - k.name.size() : 1, ' ') + k.description + "\n";
    s += "Profiles: table1, table3, table4\n";
    return s;
}

} // namespace

int run_cli(const std::vector<std::string> &args, char **envp, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Air-to-ground LoS MIMO through a stochastic cloud layer", kToolName};
    app.require_subcommand(1);
    app.footer(key_listing());
    app.set_version_flag("--version",
                         std::string(kToolName) + " " + kToolVersion + " (config schema " +
                             std::to_string(kConfigSchemaVersion) + ")");

    Flags f;
    const std::vector<std::pair<Command, const char *>> subs = {
        {Command::field, "Generate a cloud field and write its cloudlets"},
        {Command::phase_dist, "Tabulate the analytic phase distribution"},
        {Command::capacity_cdf, "Monte Carlo capacity CDF"},
        {Command::correlation, "Sub-channel correlation versus distance"},
        {Command::compensated, "Compensated-mode median capacity versus distance"},
        {Command::phase_compare, "Simulated versus analytic phase distribution"},
        {Command::mac_count, "Multiply-accumulate count per simulation round"},
    };
    std::vector<std::pair<Command, CLI::App *>> apps;
    for (const auto &[cmd, help] : subs)
    {
        CLI::App *sub = app.add_subcommand(command_name(cmd), help);
        sub->add_option("--profile", f.profile, "Parameter profile (table1, table3, table4)");
        sub->add_option("--config", f.config, "Config file: JSON, manifest.json, or key = value lines");
        sub->add_option("--set", f.sets, "Override one key: key=value (repeatable)");
        sub->add_option("--out", f.out, "Output directory")->required();
        sub->add_option("--threads", f.threads, "Worker threads (results do not depend on it)");
        sub->add_option("--trials", f.trials, "Monte Carlo trials per point");
        sub->add_option("--seed", f.seed, "Master seed");
        sub->add_option("--dt", f.dt, "Time step, s");
        sub->add_option("--distance", f.distance, "Link distance, m or km (e.g. 40km)");
        sub->add_option("--thickness", f.thickness, "Cloud thickness, m or km");
        sub->add_option("--rwc", f.rwc, "Relative water content list");
        sub->add_option("--distance-grid", f.distance_grid, "Distance list or start:stop:step");
        if (cmd == Command::field)
            sub->add_option("--frames", f.frames, "Also write field_####.csv for this many dt steps");
        apps.emplace_back(cmd, sub);
    }

    std::vector<std::string> argv_store;
    argv_store.emplace_back(kToolName);
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &a : argv_store)
        argv.push_back(a.data());

    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return 0;
    }
    catch (const CLI::CallForAllHelp &)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    }
    catch (const CLI::CallForVersion &)
    {
        out << app.version() << '\n';
        return 0;
    }
    catch (const CLI::ParseError &e)
    {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    Command cmd = Command::field;
    for (const auto &[c, sub] : apps)
        if (sub->parsed())
            cmd = c;

    const unsigned threads = f.threads > 0 ? f.threads : std::max(1u, std::thread::hardware_concurrency());
    try
    {
        ConfigSources src;
        src.profile = f.profile;
        if (!f.config.empty())
            src.file = f.config;
        src.env = config_from_environment(envp);
        src.overrides = collect_overrides(cmd, f);
        const ResolvedConfig rc = resolve_config(cmd, src);

        const fs::path dir(f.out);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec)
            throw std::runtime_error("cannot create output directory '" + f.out + "': " + ec.message());

        const auto t0 = std::chrono::steady_clock::now();
        std::ostringstream csv;
        nlohmann::json manifest = base_manifest(rc, threads);
        manifest["summary"] = dispatch(rc, dir, csv, threads, f.frames);
        manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        auto results = open_out(dir / "results.csv");
        results << csv.str();
        auto mf = open_out(dir / "manifest.json");
        mf << manifest.dump(2) << '\n';
        if (!results || !mf)
            throw std::runtime_error("failed writing outputs to '" + f.out + "'");
        return 0;
    }
    catch (const ConfigError &e)
    {
        err << "configuration error:\n" << e.what() << '\n';
        return 1;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace cloudmimo
