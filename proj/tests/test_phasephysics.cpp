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

#include <cmath>
#include <numbers>
#include <sstream>

#include "cloudmimo/errors.hpp"
#include "cloudmimo/mac_counter.hpp"
#include "cloudmimo/phasephysics.hpp"

using namespace cloudmimo;

namespace
{

// n V_ice = 1e-6
PhysicsParams unit_mixture()
{
    PhysicsParams p;
    p.sphere_density_per_m3 = 1.0e6;
    p.ice_sphere_volume_m3 = 1.0e-12;
    return p;
}

} // namespace

TEST_CASE("free-space wavelength at 73.5 GHz")
{
    CHECK(PhysicsParams{}.wavelength_m() == doctest::Approx(4.078808952e-3).epsilon(1e-9));
}

TEST_CASE("mixture permittivity")
{
    const auto p = unit_mixture();
    CHECK(mixture_permittivity(p, 0.0) == 0.0);
    CHECK(mixture_permittivity(p, 0.4) == doctest::Approx(1.036144578e-6).epsilon(1e-9));
    CHECK_THROWS_AS(mixture_permittivity(p, -0.1), DomainError);
}

TEST_CASE("wavelength in the medium")
{
    const double l0 = 4.07881e-3;
    CHECK(wavelength_in_medium(l0, 0.0) == l0);
    CHECK(wavelength_in_medium(l0, 1e-6) == doctest::Approx(4.078805921e-3).epsilon(1e-9));
    CHECK(wavelength_in_medium(l0, 1.0) == doctest::Approx(l0 / 2.0));
    CHECK_THROWS_AS(wavelength_in_medium(l0, -1.0), DomainError);
}

TEST_CASE("phase through a chord")
{
    const double l0 = 4.07881e-3;
    CHECK(phase_through_chord(l0, 1e-6, 0.0) == 0.0);
    CHECK(phase_through_chord(l0, 1e-6, 100.0) == doctest::Approx(0.1540445695).epsilon(1e-8));
}

TEST_CASE("empty field gives zero phase on every ray")
{
    CloudField f;
    f.config = CloudConfig{};
    const std::vector<Segment2> segs = {{{10.0, 0.0}, {10.0, 1000.0}}, {{3.0, 0.0}, {4.0, 1000.0}}};
    const auto ph = path_phase(f, segs, PhysicsParams{});
    REQUIRE(ph.phase_rad.size() == 2);
    CHECK(ph.phase_rad[0] == 0.0);
    CHECK(ph.phase_rad[1] == 0.0);
    CHECK(ph.cloudlet_count[0] == 0);
}

TEST_CASE("single cloudlet diameter chord")
{
    const auto p = unit_mixture();
    CloudField f;
    f.cloudlets.push_back({{10.0, 500.0}, 5.0, 0.4});
    const std::vector<Segment2> segs = {{{10.0, 0.0}, {10.0, 1000.0}}};
    const auto ph = path_phase(f, segs, p);
    const double expected = 2.0 * std::numbers::pi * 10.0 * 1.036144578e-6 / p.wavelength_m();
    CHECK(ph.phase_rad[0] == doctest::Approx(expected).epsilon(1e-9));
    CHECK(ph.phase_rad[0] == doctest::Approx(1.59612487e-2).epsilon(1e-8));
    CHECK(ph.cloudlet_count[0] == 1);
}

TEST_CASE("phase is additive over disjoint cloudlets")
{
    const PhysicsParams p;
    CloudField a, b, both;
    a.cloudlets.push_back({{10.0, 200.0}, 5.0, 0.13});
    b.cloudlets.push_back({{11.0, 700.0}, 5.0, 0.31});
    both.cloudlets = {a.cloudlets[0], b.cloudlets[0]};
    const std::vector<Segment2> segs = {{{10.0, 0.0}, {10.0, 1000.0}}};
    const double sum = path_phase(a, segs, p).phase_rad[0] + path_phase(b, segs, p).phase_rad[0];
    CHECK(std::abs(path_phase(both, segs, p).phase_rad[0] - sum) <= 1e-12 * sum);
}

TEST_CASE("phase scales linearly with water content")
{
    const PhysicsParams p;
    CloudField f;
    f.cloudlets.push_back({{10.0, 200.0}, 5.0, 0.13});
    f.cloudlets.push_back({{12.0, 205.0}, 5.0, 0.29}); // overlapping the first
    f.cloudlets.push_back({{8.0, 800.0}, 5.0, 0.05});
    const std::vector<Segment2> segs = {{{10.0, 0.0}, {10.0, 1000.0}}};
    const double base = path_phase(f, segs, p).phase_rad[0];
    for (double s : {0.5, 2.0, 3.0})
    {
        CloudField g = f;
        for (auto &c : g.cloudlets)
            c.iwc_g_m3 *= s;
        CHECK(std::abs(path_phase(g, segs, p).phase_rad[0] - s * base) <= 1e-12 * s * base);
    }
}

TEST_CASE("path phase counts multiplications per hit")
{
    CloudField f;
    f.cloudlets.push_back({{10.0, 200.0}, 5.0, 0.13});
    f.cloudlets.push_back({{30.0, 200.0}, 5.0, 0.13});
    const std::vector<Segment2> segs = {{{10.0, 0.0}, {10.0, 1000.0}}};
    MacCounter none, one;
    path_phase(CloudField{}, segs, PhysicsParams{}, &none);
    path_phase(f, segs, PhysicsParams{}, &one);
    CHECK(one.count > none.count);
}

TEST_CASE("physics parameter validation")
{
    PhysicsParams p;
    p.ice_permittivity_real = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.carrier_frequency_hz = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("phase dump format")
{
    PathPhase ph;
    ph.phase_rad = {0.5, 0.0};
    ph.cloudlet_count = {2, 0};
    std::ostringstream os;
    write_phase_csv(os, ph);
    CHECK(os.str() == "ray_index,k,phi_rad\n0,2,0.5\n1,0,0\n");
}
