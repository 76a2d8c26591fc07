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


#ifndef CLOUDMIMO_CLOUDFIELD_HPP
#define CLOUDMIMO_CLOUDFIELD_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "cloudmimo/mac_counter.hpp"
#include "cloudmimo/rng.hpp"

namespace cloudmimo
{

// Point in the vertical model plane: x horizontal, y altitude above the
// bottom of the cloud layer. Meters.
struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

// Rectangular cloud region [0, W] x [0, D] and the law of its cloudlets.
// Member defaults are the Table-1 measurement-fit values with W = 20 m.
struct CloudConfig
{
    double width_m = 20.0;                  // W
    double thickness_m = 1000.0;            // D
    double max_thickness_m = 1000.0;        // D_max
    double poisson_density = 0.002;         // lambda_s, cloudlets per m^2
    double smoothness_alpha = 0.5;          // alpha in (0, 1]
    double max_iwc_g_m3 = 0.4;              // C, cloudlet IWC ~ U(0, C)
    double cloudlet_speed_m_s = 1000.0;     // V_b
    std::uint64_t rng_seed = 0;
    double max_expected_count = 1.0e7;      // safety cap on lambda_s * W * D

    // Throws ConfigError listing every violated invariant
    void validate() const;

    double expected_count() const { return poisson_density * width_m * thickness_m; }
};

struct Cloudlet
{
    Point2 center;
    double radius_m = 0.0;
    double iwc_g_m3 = 0.0;
};

struct CloudField
{
    CloudConfig config;
    std::vector<Cloudlet> cloudlets;
    double elapsed_s = 0.0;
};

// r = alpha * W * sqrt(D / D_max) / 2, shared by every cloudlet
double cloudlet_radius(const CloudConfig &config);

// Poisson(lambda_s W D) cloudlets with centers uniform on the rectangle and
// IWC uniform on [0, C]. Deterministic in config.rng_seed.
//
// Draw order: count, then (x, y, iwc) per cloudlet. Scaling max_iwc_g_m3 with
// the seed fixed therefore scales every IWC by the same factor and leaves the
// geometry untouched.
CloudField generate_field(const CloudConfig &config, MacCounter *mac = nullptr);

// Drift every center by independent U(-V_b dt, V_b dt) offsets per axis.
// A coordinate that would leave the rectangle takes the inverted offset
// instead; if that also leaves (only possible when V_b dt exceeds the
// distance to the far wall) the coordinate keeps its old value.
CloudField step_field(const CloudField &field, double dt_s, Rng &rng);

// Sum of the IWC of all cloudlets whose disk contains `point` (boundary
// included); 0 when none does.
double iwc_at(const CloudField &field, Point2 point);

// CSV with header `x_m,y_m,radius_m,iwc_g_m3`, one row per cloudlet
void write_field_csv(std::ostream &os, const CloudField &field);

// Inverse of write_field_csv; the config must be supplied separately
CloudField read_field_csv(std::istream &is, const CloudConfig &config);

nlohmann::json to_json(const CloudConfig &config);
CloudConfig cloud_config_from_json(const nlohmann::json &j);

// Sidecar for a field dump: config, seed, elapsed time, cloudlet count
nlohmann::json field_sidecar(const CloudField &field);

} // namespace cloudmimo

#endif
