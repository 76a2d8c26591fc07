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


#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cloudmimo/cli.hpp"
#include "cloudmimo/config.hpp"
#include "cloudmimo/errors.hpp"

using namespace cloudmimo;
namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("cloudmimo_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(const std::vector<std::string> &args, std::string *err_text = nullptr)
{
    std::ostringstream out, err;
    char *no_env[] = {nullptr};
    const int rc = run_cli(args, no_env, out, err);
    if (err_text != nullptr)
        *err_text = err.str();
    return rc;
}

} // namespace

TEST_CASE("profile table1")
{
    ConfigSources src;
    src.profile = "table1";
    const auto rc = resolve_config(Command::phase_compare, src);
    CHECK(rc.spec.cloud.poisson_density == 0.002);
    CHECK(rc.spec.cloud.cloudlet_speed_m_s == 1000.0);
    CHECK(rc.spec.elevation_deg == 85.14);
    CHECK(rc.spec.cloud.thickness_m == 1000.0);
    CHECK(rc.spec.physics.sphere_density_per_m3 == 30000.0);
    CHECK(rc.assumed.count("cloud.alpha") == 1);
    CHECK(rc.assumed.count("physics.v_ice_m3") == 1);
    CHECK(rc.assumed.count("physics.eps_ice") == 1);
    CHECK(rc.assumed.count("cloud.lambda_s") == 0);
}

TEST_CASE("profile table3")
{
    ConfigSources src;
    src.profile = "table3";
    const auto rc = resolve_config(Command::capacity_cdf, src);
    CHECK(rc.spec.scenario.carrier_frequency_hz == 73.5e9);
    CHECK(rc.spec.scenario.snr_db == 20.0);
    CHECK(rc.spec.scenario.tx_spacing_m == 1.0);
    CHECK(rc.spec.scenario.rx_spacing_m == 6.0827);
    CHECK(rc.spec.cloud_upper_m == 8000.0);
}

TEST_CASE("profile table4 carries the distance grid")
{
    ConfigSources src;
    src.profile = "table4";
    const auto rc = resolve_config(Command::correlation, src);
    CHECK(rc.spec.scenario.rx_spacing_m == 5.0);
    CHECK(rc.spec.sweep.distance_m.size() == 60);
    CHECK(rc.assumed.count("sweep.distance_m") == 1);
}

TEST_CASE("an empty config lists every missing key")
{
    ConfigSources src;
    try
    {
        resolve_config(Command::capacity_cdf, src);
        FAIL("expected ConfigError");
    }
    catch (const ConfigError &e)
    {
        const std::string msg = e.what();
        for (const char *k : {"cloud.width_m", "cloud.lambda_s", "physics.frequency_hz", "mimo.num_tx",
                              "mimo.snr_db", "link.cloud_upper_m"})
            CHECK(msg.find(k) != std::string::npos);
    }
}

TEST_CASE("unknown keys and bad values are all reported")
{
    ConfigSources src;
    src.profile = "table3";
    src.overrides = {{"cloud.lamda_s", "1"}, {"mimo.num_tx", "two"}, {"mimo.compensated", "maybe"}};
    try
    {
        resolve_config(Command::capacity_cdf, src);
        FAIL("expected ConfigError");
    }
    catch (const ConfigError &e)
    {
        const std::string msg = e.what();
        CHECK(msg.find("cloud.lamda_s") != std::string::npos);
        CHECK(msg.find("mimo.num_tx") != std::string::npos);
        CHECK(msg.find("mimo.compensated") != std::string::npos);
    }
}

TEST_CASE("precedence: profile < file < environment < flags")
{
    const fs::path dir = scratch("prec");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "run.cfg");
        f << "# test\nmimo.snr_db = 10\nmimo.distance_m = 20km\n";
    }
    ConfigSources src;
    src.profile = "table3";
    src.file = (dir / "run.cfg").string();
    auto rc = resolve_config(Command::capacity_cdf, src);
    CHECK(rc.spec.scenario.snr_db == 10.0);
    CHECK(rc.spec.scenario.link_distance_m == 20000.0);

    std::string var = "CLOUDMIMO_MIMO__SNR_DB=15";
    char *env[] = {var.data(), nullptr};
    src.env = config_from_environment(env);
    rc = resolve_config(Command::capacity_cdf, src);
    CHECK(rc.spec.scenario.snr_db == 15.0);

    src.overrides = {{"mimo.snr_db", "25"}};
    rc = resolve_config(Command::capacity_cdf, src);
    CHECK(rc.spec.scenario.snr_db == 25.0);
}

TEST_CASE("lengths and lists")
{
    CHECK(parse_length("40km", "x") == 40000.0);
    CHECK(parse_length("500m", "x") == 500.0);
    CHECK(parse_length("12.5", "x") == 12.5);
    CHECK_THROWS_AS(parse_length("far", "x"), ConfigError);
    CHECK(parse_list("0.2,0.4", "x", false) == std::vector<double>{0.2, 0.4});
    CHECK(parse_list("1km:3km:1km", "x", true) == std::vector<double>{1000.0, 2000.0, 3000.0});
    CHECK_THROWS_AS(parse_list("1:0:1", "x", false), ConfigError);
}

TEST_CASE("cli writes results and a manifest that replays the run")
{
    const fs::path a = scratch("run_a");
    const fs::path b = scratch("run_b");
    REQUIRE(cli({"capacity-cdf", "--profile", "table3", "--distance", "40km", "--rwc", "0.4", "--trials", "300",
                 "--seed", "7", "--out", a.string()}) == 0);
    REQUIRE(fs::exists(a / "results.csv"));
    const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
    CHECK(manifest.at("subcommand") == "capacity-cdf");
    CHECK(manifest.at("seed") == 7);
    CHECK(manifest.at("config").at("mimo.distance_m") == 40000.0);
    const auto &assumed = manifest.at("assumed");
    CHECK(std::find(assumed.begin(), assumed.end(), "cloud.alpha") != assumed.end());

    REQUIRE(cli({"capacity-cdf", "--config", (a / "manifest.json").string(), "--threads", "3", "--out", b.string()}) ==
            0);
    CHECK(slurp(a / "results.csv") == slurp(b / "results.csv"));
    const auto replay = nlohmann::json::parse(slurp(b / "manifest.json"));
    CHECK(replay.at("config") == manifest.at("config"));
    CHECK(replay.at("assumed") == manifest.at("assumed"));
}

TEST_CASE("cli exit codes")
{
    const fs::path d = scratch("codes");
    std::string err;
    CHECK(cli({"capacity-cdf", "--bogus", "--out", d.string()}, &err) == 1);
    CHECK(err.find("Usage") != std::string::npos);
    CHECK(cli({"capacity-cdf", "--out", d.string()}) == 1); // nothing configured
    CHECK(cli({"capacity-cdf", "--profile", "table3", "--set", "mimo.snr_db=abc", "--out", d.string()}) == 1);
    CHECK(cli({}) == 1);
    // an oblique path that overflows the field width is a configuration problem
    CHECK(cli({"capacity-cdf", "--profile", "table3", "--set", "link.elevation_deg=60", "--trials", "5", "--out",
               d.string()}) == 1);
}

TEST_CASE("cli field and phase-dist outputs")
{
    const fs::path d = scratch("field");
    REQUIRE(cli({"field", "--profile", "table1", "--seed", "3", "--dt", "0.001", "--frames", "2", "--out",
                 d.string()}) == 0);
    CHECK(slurp(d / "results.csv").rfind("x_m,y_m,radius_m,iwc_g_m3\n", 0) == 0);
    CHECK(fs::exists(d / "field_0002.csv"));
    CHECK(slurp(d / "field_0000.csv") == slurp(d / "results.csv"));

    const fs::path p = scratch("pdist");
    REQUIRE(cli({"phase-dist", "--profile", "table1", "--set", "phase.grid_points=11", "--out", p.string()}) == 0);
    const std::string csv = slurp(p / "results.csv");
    CHECK(csv.rfind("phi_rad,pdf_stationary,pdf_total\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
}
