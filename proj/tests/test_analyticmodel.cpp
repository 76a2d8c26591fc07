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

#include "cloudmimo/analyticmodel.hpp"
#include "cloudmimo/errors.hpp"
#include "cloudmimo/experiment.hpp"
#include "oracles.hpp"

using namespace cloudmimo;

namespace
{

AnalyticParams table1_params(int k_max = 0)
{
    return make_analytic_params(CloudConfig{}, PhysicsParams{}, k_max);
}

} // namespace

TEST_CASE("fitted cloudlet-count weights at D = D_max")
{
    const auto p = table1_params();
    CHECK(p.b1 == doctest::Approx(0.12));
    CHECK(p.b2 == doctest::Approx(0.5));
    CHECK(p.k_l == doctest::Approx(2.35));
    CHECK(p_k(0, p) == doctest::Approx(0.1199666713).epsilon(1e-9));
    AnalyticParams q = p;
    q.b2 = 7.0;
    CHECK(p_k(7, q) == doctest::Approx(q.b1));
    CHECK(p.k_max == static_cast<int>(std::ceil(0.5 + 360.0)));
}

TEST_CASE("chord moments")
{
    CloudConfig c;
    c.smoothness_alpha = 0.1; // r = 1 m
    const auto p = make_analytic_params(c, PhysicsParams{});
    REQUIRE(p.radius_m == doctest::Approx(1.0));
    const auto m = chord_moments(p);
    CHECK(m.mean_m == doctest::Approx(3.6922095e-14).epsilon(1e-7));
    CHECK(m.second_negative);

    // small-radius limit
    c.smoothness_alpha = 1e-6;
    const auto tiny = chord_moments(make_analytic_params(c, PhysicsParams{}));
    // e^x (x - 1) + 1 ~ x^2 / 2, so E(l) ~ 2 L r^2
    CHECK(tiny.mean_m == doctest::Approx(2.0 * kFittedL * 1e-10).epsilon(1e-4));
}

TEST_CASE("chord moments stay finite for large exponents")
{
    CloudConfig c;
    c.smoothness_alpha = 1.0;
    c.width_m = 2.0 * 720.0 / 4.7; // 2 k_l r = 720, past the direct exp range
    const auto m = chord_moments(make_analytic_params(c, PhysicsParams{}));
    CHECK(std::isfinite(m.mean_m));
    CHECK(m.mean_m > 0.0);
    c.width_m = 400.0; // 2 k_l r = 940: the moment itself exceeds double range
    CHECK_THROWS_AS(chord_moments(make_analytic_params(c, PhysicsParams{})), NumericError);
}

TEST_CASE("permittivity moments")
{
    PhysicsParams ph;
    ph.sphere_density_per_m3 = 1e6;
    ph.ice_sphere_volume_m3 = 1e-12;
    const auto e = eps_moments(make_analytic_params(CloudConfig{}, ph));
    CHECK(e.mean == doctest::Approx(5.18072289e-7).epsilon(1e-8));
    const double kappa = mixture_coefficient(ph);
    CHECK(e.second == doctest::Approx(kappa * kappa * 0.16 / 3.0));
    CloudConfig dry;
    dry.max_iwc_g_m3 = 0.0;
    const auto z = eps_moments(make_analytic_params(dry, ph));
    CHECK(z.mean == 0.0);
    CHECK(z.second == 0.0);
}

TEST_CASE("phase moments through zero cloudlets vanish")
{
    const auto m = moment_of_phi_k(0, table1_params());
    CHECK(m.mean_rad == 0.0);
    CHECK(m.variance_rad2 == 0.0);
    CHECK_THROWS_AS(moment_of_phi_k(-1, table1_params()), DomainError);
}

TEST_CASE("dry cloud gives a point mass at zero")
{
    CloudConfig c;
    c.max_iwc_g_m3 = 0.0;
    const auto r = stationary_distribution(make_analytic_params(c, PhysicsParams{}));
    CHECK(r.distribution.phi0 == 0.0);
    CHECK(r.distribution.sigma_c2 == 0.0);
    CHECK_THROWS_AS(laplace_pdf(0.0, r.distribution), DegenerateDistribution);
    const auto s = sample_total_phase(r.distribution, 100, 1);
    for (double v : s)
        CHECK(v == 0.0);
}

TEST_CASE("stationary parameters of the table1 profile are finite and stable under doubling k_max")
{
    const auto base = stationary_distribution(table1_params());
    CHECK(std::isfinite(base.distribution.phi0));
    CHECK(base.distribution.sigma_c2 > 0.0);
    const auto twice = stationary_distribution(table1_params(2 * base.k_max));
    CHECK(std::abs(twice.distribution.phi0 - base.distribution.phi0) <= 1e-10 * std::abs(base.distribution.phi0));
    CHECK(std::abs(twice.distribution.sigma_c2 - base.distribution.sigma_c2) <= 1e-10 * base.distribution.sigma_c2);
    CHECK(std::isfinite(base.closed_form_phi0));
}

TEST_CASE("zero time step adds no variance")
{
    CHECK(delta_sigma_c2(table1_params(), 0.0) == 0.0);
    CHECK(delta_sigma_c2(table1_params(), 1.0) > 0.0);
    CHECK_THROWS_AS(delta_sigma_c2(table1_params(), -1.0), DomainError);
}

TEST_CASE("Laplace density peak and normalization")
{
    const PhaseDistribution d{0.3, 0.04, 0.0, 0.0};
    CHECK(laplace_pdf(0.3, d) == doctest::Approx(1.0 / (std::sqrt(2.0) * 0.2)));
    const double mass = oracle::integrate_line([&](double x) { return laplace_pdf(x, d); }, 0.3, 0.2);
    CHECK(std::abs(mass - 1.0) < 1e-6);
    const double var =
        oracle::integrate_line([&](double x) { return (x - 0.3) * (x - 0.3) * laplace_pdf(x, d); }, 0.3, 0.2);
    CHECK(std::abs(var / 0.04 - 1.0) < 1e-6);
    CHECK(laplace_cdf(0.3, d) == doctest::Approx(0.5));
}

TEST_CASE("Gaussian and total densities integrate to one")
{
    const double g = oracle::integrate_line([](double x) { return gaussian_pdf(x, 1.0, 0.25); }, 1.0, 0.5);
    CHECK(std::abs(g - 1.0) < 1e-6);
    for (double ds : {1e-4, 0.04, 4.0})
    {
        const PhaseDistribution d{0.1, 0.04, ds, 1.0};
        const double scale = std::sqrt(0.04 + ds);
        const double t = oracle::integrate_line([&](double x) { return total_pdf(x, d); }, 0.1, scale);
        CHECK(std::abs(t - 1.0) < 1e-6);
        const double v =
            oracle::integrate_line([&](double x) { return (x - 0.1) * (x - 0.1) * total_pdf(x, d); }, 0.1, scale);
        CHECK(std::abs(v / (0.04 + ds) - 1.0) < 1e-6);
    }
}

TEST_CASE("total density is finite when the perturbation dominates")
{
    const auto tv = time_varying_distribution(table1_params(), 1.0);
    const auto &d = tv.distribution;
    const double s = std::sqrt(d.delta_sigma_c2);
    for (double x : {-5.0, -1.0, 0.0, 1.0, 5.0})
    {
        const double v = total_pdf(d.phi0 + x * s, d);
        CHECK(std::isfinite(v));
        CHECK(v == doctest::Approx(gaussian_pdf(d.phi0 + x * s, d.phi0, d.delta_sigma_c2 + d.sigma_c2)).epsilon(1e-3));
    }
}

TEST_CASE("sampled phases match the analytic moments")
{
    const PhaseDistribution d{0.2, 0.01, 0.005, 1.0};
    const auto s = sample_total_phase(d, 400000, 17);
    const auto m = sample_moments(s);
    CHECK(m.mean == doctest::Approx(0.2).epsilon(2e-3));
    CHECK(std::abs(m.variance / 0.015 - 1.0) < 0.02);

    const PhaseDistribution lap{0.0, 0.01, 0.0, 0.0};
    const auto ml = sample_moments(sample_total_phase(lap, 400000, 18));
    CHECK(std::abs(ml.variance / 0.01 - 1.0) < 0.02);
    CHECK(ml.excess_kurtosis == doctest::Approx(3.0).epsilon(0.15));
}

TEST_CASE("sampling is reproducible")
{
    const PhaseDistribution d{0.2, 0.01, 0.005, 1.0};
    CHECK(sample_total_phase(d, 1000, 5) == sample_total_phase(d, 1000, 5));
    CHECK_THROWS_AS(sample_total_phase(d, 0, 5), DomainError);
}
