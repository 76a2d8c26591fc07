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


#include "cloudmimo/phasephysics.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "cloudmimo/errors.hpp"
#include "cloudmimo/numfmt.hpp"

namespace cloudmimo
{

void PhysicsParams::validate() const
{
    std::string errors;
    auto check = [&](bool ok, const char *msg) {
        if (!ok)
            errors += std::string(errors.empty() ? "" : "; ") + msg;
    };
    check(std::isfinite(sphere_density_per_m3) && sphere_density_per_m3 > 0.0, "sphere density n must be > 0");
    check(std::isfinite(ice_sphere_volume_m3) && ice_sphere_volume_m3 > 0.0, "ice sphere volume V_ice must be > 0");
    check(std::isfinite(ice_permittivity_real) && ice_permittivity_real > 1.0, "ice permittivity must be > 1");
    check(std::isfinite(carrier_frequency_hz) && carrier_frequency_hz > 0.0, "carrier frequency must be > 0");
    if (!errors.empty())
        throw ConfigError(errors);
}

nlohmann::json to_json(const PhysicsParams &params)
{
    return nlohmann::json{{"sphere_density_per_m3", params.sphere_density_per_m3},
                          {"ice_sphere_volume_m3", params.ice_sphere_volume_m3},
                          {"ice_permittivity_real", params.ice_permittivity_real},
                          {"carrier_frequency_hz", params.carrier_frequency_hz},
                          {"wavelength_m", params.wavelength_m()}};
}

double mixture_coefficient(const PhysicsParams &params)
{
    const double e = params.ice_permittivity_real;
    return 3.0 * params.sphere_density_per_m3 * params.ice_sphere_volume_m3 * (1.0 / 0.6) * ((e - 1.0) / (e + 1.0));
}

double mixture_permittivity(const PhysicsParams &params, double iwc_g_m3)
{
    if (!(iwc_g_m3 >= 0.0))
        throw DomainError("mixture_permittivity: IWC must be >= 0, got " + format_double(iwc_g_m3));
    return mixture_coefficient(params) * iwc_g_m3;
}

double wavelength_in_medium(double lambda0_m, double eps)
{
    if (!(eps > -1.0))
        throw DomainError("wavelength_in_medium: permittivity increment must be > -1");
    return lambda0_m / (1.0 + eps);
}

double phase_through_chord(double lambda0_m, double eps, double length_m)
{
    return 2.0 * std::numbers::pi * length_m / lambda0_m * eps;
}

PathPhase path_phase(const CloudField &field, std::span<const Segment2> segments, const PhysicsParams &params,
                     MacCounter *mac)
{
    const double lambda0 = params.wavelength_m();
    const double kappa = mixture_coefficient(params);
    tally(mac, 7);

    PathPhase out;
    out.phase_rad.reserve(segments.size());
    out.cloudlet_count.reserve(segments.size());
    for (const auto &seg : segments)
    {
        double phi = 0.0;
        int k = 0;
        for (const auto &hit : path_intersections(field, seg, mac))
        {
            const double eps = kappa * field.cloudlets[hit.cloudlet_index].iwc_g_m3;
            phi += phase_through_chord(lambda0, eps, hit.chord_m);
            tally(mac, 5);
            ++k;
        }
        out.phase_rad.push_back(phi);
        out.cloudlet_count.push_back(k);
    }
    return out;
}

void write_phase_csv(std::ostream &os, const PathPhase &phase)
{
    os << "ray_index,k,phi_rad\n";
    for (std::size_t i = 0; i < phase.phase_rad.size(); ++i)
        os << i << ',' << phase.cloudlet_count[i] << ',' << format_double(phase.phase_rad[i]) << '\n';
}

} // namespace cloudmimo
