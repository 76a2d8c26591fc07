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


#ifndef CLOUDMIMO_PHASEPHYSICS_HPP
#define CLOUDMIMO_PHASEPHYSICS_HPP

#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

#include <json.hpp>

#include "cloudmimo/cloudfield.hpp"
#include "cloudmimo/mac_counter.hpp"
#include "cloudmimo/raygeometry.hpp"

namespace cloudmimo
{

inline constexpr double kSpeedOfLight = 299792458.0;

// Dielectric mixture constants and the carrier.
//
// n = 30000 spheres/m^3 matches the table1 profile. V_ice has no reference
// value; the default is an ice sphere of 0.1 mm radius. eps_ice = 3.15 is the
// usual microwave value for ice.
struct PhysicsParams
{
    double sphere_density_per_m3 = 30000.0;                                  // n
    double ice_sphere_volume_m3 = 4.0 / 3.0 * std::numbers::pi * 1.0e-12;   // V_ice
    double ice_permittivity_real = 3.15;                                     // eps'_ice
    double carrier_frequency_hz = 73.5e9;

    double wavelength_m() const { return kSpeedOfLight / carrier_frequency_hz; }

    void validate() const;
};

nlohmann::json to_json(const PhysicsParams &params);

// kappa = 3 n V_ice (1/0.6) (eps' - 1) / (eps' + 1); permittivity = kappa * IWC
double mixture_coefficient(const PhysicsParams &params);

// Effective relative permittivity increment of cloud with the given IWC.
// Throws DomainError for negative IWC.
double mixture_permittivity(const PhysicsParams &params, double iwc_g_m3);

// lambda0 / (1 + eps); throws DomainError for eps <= -1
double wavelength_in_medium(double lambda0_m, double eps);

// (2 pi l / lambda0) * eps
double phase_through_chord(double lambda0_m, double eps, double length_m);

struct PathPhase
{
    std::vector<double> phase_rad;   // unwrapped, one per ray
    std::vector<int> cloudlet_count; // k per ray
};

// Per ray, the sum over intersected cloudlets of phase_through_chord with the
// cloudlet's mixture permittivity. Phases stay unwrapped.
PathPhase path_phase(const CloudField &field, std::span<const Segment2> segments, const PhysicsParams &params,
                     MacCounter *mac = nullptr);

// Diagnostic dump with header `ray_index,k,phi_rad`
void write_phase_csv(std::ostream &os, const PathPhase &phase);

} // namespace cloudmimo

#endif
