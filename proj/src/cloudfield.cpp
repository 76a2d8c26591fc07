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


#include "cloudmimo/cloudfield.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cloudmimo/errors.hpp"
#include "cloudmimo/numfmt.hpp"

namespace cloudmimo
{

void CloudConfig::validate() const
{
    std::string errors;
    auto check = [&](bool ok, const char *msg) {
        if (!ok)
            errors += std::string(errors.empty() ? "" : "; ") + msg;
    };
    check(std::isfinite(width_m) && width_m > 0.0, "cloud width W must be > 0");
    check(std::isfinite(thickness_m) && thickness_m > 0.0, "cloud thickness D must be > 0");
    check(std::isfinite(max_thickness_m) && thickness_m <= max_thickness_m, "cloud thickness D must not exceed D_max");
    check(std::isfinite(poisson_density) && poisson_density >= 0.0, "Poisson density lambda_s must be >= 0");
    check(std::isfinite(smoothness_alpha) && smoothness_alpha > 0.0 && smoothness_alpha <= 1.0,
          "smoothness alpha must lie in (0, 1]");
    check(std::isfinite(max_iwc_g_m3) && max_iwc_g_m3 >= 0.0, "max IWC C must be >= 0");
    check(std::isfinite(cloudlet_speed_m_s) && cloudlet_speed_m_s >= 0.0, "cloudlet speed V_b must be >= 0");
    check(max_expected_count > 0.0, "cloudlet count cap must be > 0");
    if (!errors.empty())
        throw ConfigError(errors);
}

double cloudlet_radius(const CloudConfig &config)
{
    config.validate();
    return config.smoothness_alpha * config.width_m * std::sqrt(config.thickness_m / config.max_thickness_m) / 2.0;
}

CloudField generate_field(const CloudConfig &config, MacCounter *mac)
{
    const double radius = cloudlet_radius(config);
    tally(mac, 4);
    const double mean_count = config.expected_count();
    tally(mac, 2);
    if (mean_count > config.max_expected_count)
        throw ResourceError("expected cloudlet count " + format_double(mean_count) + " exceeds the safety cap " +
                            format_double(config.max_expected_count));

    Rng rng(config.rng_seed);
    const std::uint64_t count = rng.poisson(mean_count, mac);

    CloudField field;
    field.config = config;
    field.cloudlets.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i)
    {
        Cloudlet c;
        c.center.x = rng.uniform(0.0, config.width_m, mac);
        c.center.y = rng.uniform(0.0, config.thickness_m, mac);
        c.iwc_g_m3 = rng.uniform(0.0, config.max_iwc_g_m3, mac);
        c.radius_m = radius;
        field.cloudlets.push_back(c);
    }
    return field;
}

namespace
{

// Sign inversion at a violated boundary. When the inverted step leaves the
// region too (steps wider than the region), the coordinate stays put, which
// keeps the uniform density stationary.
double reflect(double pos, double delta, double upper)
{
    const double forward = pos + delta;
    if (forward >= 0.0 && forward <= upper)
        return forward;
    const double back = pos - delta;
    if (back >= 0.0 && back <= upper)
        return back;
    return pos;
}

} // namespace

CloudField step_field(const CloudField &field, double dt_s, Rng &rng)
{
    if (!(dt_s >= 0.0) || !std::isfinite(dt_s))
        throw DomainError("step_field: dt must be finite and >= 0");
    CloudField next = field;
    next.elapsed_s += dt_s;
    const double reach = field.config.cloudlet_speed_m_s * dt_s;
    if (reach == 0.0)
        return next;
    for (auto &c : next.cloudlets)
    {
        const double dx = rng.uniform(-reach, reach);
        const double dy = rng.uniform(-reach, reach);
        c.center.x = reflect(c.center.x, dx, field.config.width_m);
        c.center.y = reflect(c.center.y, dy, field.config.thickness_m);
    }
    return next;
}

double iwc_at(const CloudField &field, Point2 point)
{
    double total = 0.0;
    for (const auto &c : field.cloudlets)
    {
        const double dx = point.x - c.center.x;
        const double dy = point.y - c.center.y;
        if (dx * dx + dy * dy <= c.radius_m * c.radius_m)
            total += c.iwc_g_m3;
    }
    return total;
}

void write_field_csv(std::ostream &os, const CloudField &field)
{
    os << "x_m,y_m,radius_m,iwc_g_m3\n";
    for (const auto &c : field.cloudlets)
        os << format_double(c.center.x) << ',' << format_double(c.center.y) << ',' << format_double(c.radius_m)
           << ',' << format_double(c.iwc_g_m3) << '\n';
}

CloudField read_field_csv(std::istream &is, const CloudConfig &config)
{
    CloudField field;
    field.config = config;
    std::string line;
    if (!std::getline(is, line) || line.rfind("x_m,y_m,radius_m,iwc_g_m3", 0) != 0)
        throw ConfigError("field CSV: missing header x_m,y_m,radius_m,iwc_g_m3");
    std::size_t row = 1;
    while (std::getline(is, line))
    {
        ++row;
        if (line.empty() || line == "\r")
            continue;
        std::stringstream ss(line);
        std::string cell[4];
        for (auto &s : cell)
            if (!std::getline(ss, s, ','))
                throw ConfigError("field CSV: row " + std::to_string(row) + " has fewer than 4 columns");
        const std::string where = "field CSV row " + std::to_string(row);
        Cloudlet c;
        c.center.x = parse_double(cell[0], where);
        c.center.y = parse_double(cell[1], where);
        c.radius_m = parse_double(cell[2], where);
        c.iwc_g_m3 = parse_double(cell[3], where);
        field.cloudlets.push_back(c);
    }
    return field;
}

nlohmann::json to_json(const CloudConfig &config)
{
    return nlohmann::json{{"width_m", config.width_m},
                          {"thickness_m", config.thickness_m},
                          {"max_thickness_m", config.max_thickness_m},
                          {"poisson_density", config.poisson_density},
                          {"smoothness_alpha", config.smoothness_alpha},
                          {"max_iwc_g_m3", config.max_iwc_g_m3},
                          {"cloudlet_speed_m_s", config.cloudlet_speed_m_s},
                          {"rng_seed", config.rng_seed},
                          {"max_expected_count", config.max_expected_count}};
}

CloudConfig cloud_config_from_json(const nlohmann::json &j)
{
    CloudConfig c;
    c.width_m = j.at("width_m").get<double>();
    c.thickness_m = j.at("thickness_m").get<double>();
    c.max_thickness_m = j.at("max_thickness_m").get<double>();
    c.poisson_density = j.at("poisson_density").get<double>();
    c.smoothness_alpha = j.at("smoothness_alpha").get<double>();
    c.max_iwc_g_m3 = j.at("max_iwc_g_m3").get<double>();
    c.cloudlet_speed_m_s = j.at("cloudlet_speed_m_s").get<double>();
    c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    c.max_expected_count = j.value("max_expected_count", 1.0e7);
    c.validate();
    return c;
}

nlohmann::json field_sidecar(const CloudField &field)
{
    return nlohmann::json{{"config", to_json(field.config)},
                          {"seed", field.config.rng_seed},
                          {"elapsed_s", field.elapsed_s},
                          {"cloudlet_count", field.cloudlets.size()},
                          {"radius_m", cloudlet_radius(field.config)}};
}

} // namespace cloudmimo
