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


#include "cloudmimo/analyticmodel.hpp"

#include <cmath>
#include <numbers>

#include "cloudmimo/errors.hpp"
#include "cloudmimo/numfmt.hpp"
#include "cloudmimo/rng.hpp"

namespace cloudmimo
{

namespace
{

constexpr double kPi = std::numbers::pi;

// e^x (x - 1) + 1, accurate near x = 0 where it is O(x^2)
double first_moment_bracket(double x)
{
    if (std::abs(x) < 1e-3)
        return x * x / 2.0 + x * x * x / 3.0 + x * x * x * x / 8.0;
    return std::exp(x) * (x - 1.0) + 1.0;
}

// prefactor * (e^x * poly + tail); switches to log space once e^x overflows
double scaled_exp_term(double log_prefactor, double x, double poly, double tail)
{
    if (x < 700.0)
        return std::exp(log_prefactor) * (std::exp(x) * poly + tail);
    if (poly == 0.0)
        return std::exp(log_prefactor) * tail;
    const double mag = std::exp(log_prefactor + x + std::log(std::abs(poly)));
    return poly > 0.0 ? mag : -mag;
}

double log_erfc(double z)
{
    if (z < 26.0)
        return std::log(std::erfc(z));
    const double z2 = z * z;
    const double series = 1.0 - 1.0 / (2.0 * z2) + 3.0 / (4.0 * z2 * z2) - 15.0 / (8.0 * z2 * z2 * z2);
    return -z2 - std::log(z * std::sqrt(kPi)) + std::log(series);
}

} // namespace

AnalyticParams make_analytic_params(const CloudConfig &cloud, const PhysicsParams &physics, int k_max)
{
    cloud.validate();
    physics.validate();
    AnalyticParams p;
    p.cloud = cloud;
    p.physics = physics;
    p.thickness_ratio = cloud.thickness_m / cloud.max_thickness_m;
    const double lg = std::log2(p.thickness_ratio);
    p.k_l = 2.35 * std::pow(0.7, lg);
    p.b1 = 0.12 * std::pow(2.0, lg);
    p.b2 = cloud.poisson_density * cloud.thickness_m / (4.0 * std::pow(3.0, lg));
    p.b2_closed_form = (cloud.poisson_density * p.thickness_ratio * std::pow(3.0, lg)) / 4.0;
    p.radius_m = cloudlet_radius(cloud);
    p.k_max = k_max > 0 ? k_max : static_cast<int>(std::ceil(p.b2 + 12.0 * kPkWidth));
    return p;
}

double p_k(int k, const AnalyticParams &params)
{
    const double z = (static_cast<double>(k) - params.b2) / kPkWidth;
    return params.b1 * std::exp(-z * z);
}

ChordMoments chord_moments(const AnalyticParams &params)
{
    const double L = params.fitted_L;
    const double kl = params.k_l;
    const double r = params.radius_m;
    const double x = 2.0 * kl * r;

    ChordMoments m;
    if (x < 700.0)
        m.mean_m = L / (kl * kl) * first_moment_bracket(x);
    else
        m.mean_m = scaled_exp_term(std::log(L) - 2.0 * std::log(kl), x, x - 1.0, 1.0);

    const double poly = 4.0 * kl * kl * r * r - 4.0 * r * kl * kl * kl + 2.0;
    m.second_m2 = scaled_exp_term(std::log(L) - 3.0 * std::log(kl), x, poly, -2.0);

    if (!std::isfinite(m.mean_m) || !std::isfinite(m.second_m2))
        throw NumericError("chord moments are not finite for k_l = " + format_double(kl) + ", r = " + format_double(r));
    m.second_negative = m.second_m2 < 0.0;
    return m;
}

EpsMoments eps_moments(const AnalyticParams &params)
{
    const double kappa = mixture_coefficient(params.physics);
    const double c = params.cloud.max_iwc_g_m3;
    return {kappa * (c / 2.0), kappa * kappa * (c * c / 3.0)};
}

namespace
{

PhiMoments phi_moments(int k, double two_pi_over_lambda, const ChordMoments &chord, const EpsMoments &eps)
{
    const double kk = static_cast<double>(k);
    PhiMoments out;
    out.mean_rad = two_pi_over_lambda * kk * chord.mean_m * eps.mean;
    out.raw_variance_rad2 = two_pi_over_lambda * two_pi_over_lambda * kk * kk *
                            (eps.second * chord.second_m2 - eps.mean * eps.mean * chord.mean_m * chord.mean_m);
    out.clamped = out.raw_variance_rad2 < 0.0;
    out.variance_rad2 = out.clamped ? 0.0 : out.raw_variance_rad2;
    return out;
}

} // namespace

PhiMoments moment_of_phi_k(int k, const AnalyticParams &params)
{
    if (k < 0)
        throw DomainError("moment_of_phi_k: k must be >= 0");
    return phi_moments(k, 2.0 * kPi / params.physics.wavelength_m(), chord_moments(params), eps_moments(params));
}

StationaryResult stationary_distribution(const AnalyticParams &params)
{
    StationaryResult res;
    res.k_max = params.k_max;
    res.chord = chord_moments(params);
    res.eps = eps_moments(params);
    if (res.chord.second_negative)
        res.warnings.push_back("fitted E(l^2) is negative (" + format_double(res.chord.second_m2) +
                               " m^2) at r = " + format_double(params.radius_m) + " m");

    const double lambda0 = params.physics.wavelength_m();
    const double k0 = 2.0 * kPi / lambda0;
    double phi0 = 0.0;
    double sigma2 = 0.0;
    bool clamped = false;
    for (int k = 0; k <= params.k_max; ++k)
    {
        const double w = p_k(k, params);
        const PhiMoments m = phi_moments(k, k0, res.chord, res.eps);
        clamped = clamped || m.clamped;
        phi0 += w * m.mean_rad;
        sigma2 += w * w * m.variance_rad2;
    }
    if (clamped)
        res.warnings.push_back("per-k phase variance E(eps^2)E(l^2) - E(eps)^2 E(l)^2 is negative; clamped to 0");
    if (!std::isfinite(phi0) || !std::isfinite(sigma2))
        throw ModelValidityError("stationary phase sums are not finite");
    res.distribution.phi0 = phi0;
    res.distribution.sigma_c2 = sigma2;

    // Fitted closed forms with their own constants, used verbatim. The bare path length in
    // the variance bracket is taken to be E(l).
    const auto &ph = params.physics;
    const double n = ph.sphere_density_per_m3;
    const double v = ph.ice_sphere_volume_m3;
    const double e = ph.ice_permittivity_real;
    const double c = params.cloud.max_iwc_g_m3;
    const double kl = params.k_l;
    const double r = params.radius_m;
    const double L = params.fitted_L;
    const double b1 = params.b1;
    const double b2 = params.b2_closed_form;
    const double ell = res.chord.mean_m;

    const double g34 = std::exp(-std::pow((b2 - 34.0) / 14.0, 2));
    res.closed_form_phi0 = (1500.0 * n * kPi * v * (e - 1.0)) / (lambda0 * (e + 1.0)) * c * b1 * g34 *
                           (L * ((2.0 * kl - 1.0) * std::exp(kl) + 1.0) / (kl * kl));

    const double pre = 98.0 * n * kPi * v * (e - 1.0) * c * b1 / (lambda0 * (e + 1.0));
    const double g367 = std::exp(-std::pow((b2 - 36.7) / 12.0, 2));
    const double bracket =
        16.6 * std::exp(2.0 * kl * r) * (2.0 * kl * kl * r * r - 2.0 * kl * kl * kl * r - 1.5 * ell * r) +
        6.25 * L * std::exp(4.0 * kl * r) * (-4.0 * kl * r * r + 4.0 * r - 1.0 / kl) -
        16.6 * ((6.25 * L + kl) / kl);
    res.closed_form_sigma_c2 = pre * pre * (L / (kl * kl * kl)) * g367 * bracket;

    if (!std::isfinite(res.closed_form_phi0) || !std::isfinite(res.closed_form_sigma_c2))
        res.warnings.push_back("closed-form route is not finite at these parameters");
    else if (res.closed_form_sigma_c2 < 0.0)
        res.warnings.push_back("closed-form sigma_c^2 is negative (" + format_double(res.closed_form_sigma_c2) + ")");
    return res;
}

double delta_sigma_c2(const AnalyticParams &params, double dt_s)
{
    if (!(dt_s >= 0.0))
        throw DomainError("time-varying phase: dt must be >= 0");
    const auto &ph = params.physics;
    const double e = ph.ice_permittivity_real;
    const double lg = std::log2(params.thickness_ratio);
    const double inner = 3.0 * std::sqrt(3.0) * ph.sphere_density_per_m3 * std::numbers::pi * ph.ice_sphere_volume_m3 *
                         (e - 1.0) * params.cloud.max_iwc_g_m3 * params.b1 /
                         (10.0 * ph.wavelength_m() * (e + 1.0));
    const double g = std::exp(-std::pow((params.b2_closed_form - 36.7) / 12.0, 2));
    return 2400.0 * std::sqrt(dt_s * params.cloud.cloudlet_speed_m_s) * inner * std::pow(0.9, lg) * g;
}

TimeVaryingResult time_varying_distribution(const AnalyticParams &params, double dt_s)
{
    TimeVaryingResult res;
    res.stationary = stationary_distribution(params);
    res.distribution = res.stationary.distribution;
    res.distribution.dt_s = dt_s;
    res.distribution.delta_sigma_c2 = delta_sigma_c2(params, dt_s);
    res.dl_mean_m = 0.0;
    res.dl_variance =
        std::sqrt(dt_s * params.cloud.cloudlet_speed_m_s) * std::pow(0.9, std::log2(params.thickness_ratio));
    return res;
}

double laplace_pdf(double phi, const PhaseDistribution &dist)
{
    if (!(dist.sigma_c2 > 0.0))
        throw DegenerateDistribution("Laplace phase law with sigma_c^2 = 0 is a point mass at phi0");
    const double sigma = std::sqrt(dist.sigma_c2);
    return 1.0 / (std::sqrt(2.0) * sigma) * std::exp(-std::abs(phi - dist.phi0) * std::sqrt(2.0) / sigma);
}

double laplace_cdf(double phi, const PhaseDistribution &dist)
{
    if (!(dist.sigma_c2 > 0.0))
        return phi < dist.phi0 ? 0.0 : 1.0;
    const double b = std::sqrt(dist.sigma_c2 / 2.0);
    const double z = (phi - dist.phi0) / b;
    return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

double gaussian_pdf(double x, double mean, double variance)
{
    if (!(variance > 0.0))
        throw DegenerateDistribution("Gaussian with zero variance is a point mass");
    const double d = x - mean;
    return std::exp(-d * d / (2.0 * variance)) / std::sqrt(2.0 * kPi * variance);
}

double total_pdf(double phi, const PhaseDistribution &dist)
{
    if (!(dist.delta_sigma_c2 > 0.0))
        return laplace_pdf(phi, dist);
    if (!(dist.sigma_c2 > 0.0))
        return gaussian_pdf(phi, dist.phi0, dist.delta_sigma_c2);

    // Laplace(b) convolved with N(0, s^2)
    const double b = std::sqrt(dist.sigma_c2 / 2.0);
    const double s = std::sqrt(dist.delta_sigma_c2);
    const double x = phi - dist.phi0;
    const double a = s * s / (2.0 * b * b);
    const double z1 = (s / b - x / s) / std::sqrt(2.0);
    const double z2 = (s / b + x / s) / std::sqrt(2.0);
    const double t1 = std::exp(a - x / b + log_erfc(z1));
    const double t2 = std::exp(a + x / b + log_erfc(z2));
    return (t1 + t2) / (4.0 * b);
}

std::vector<double> sample_total_phase(const PhaseDistribution &dist, std::size_t count, std::uint64_t seed)
{
    if (count == 0)
        throw DomainError("sample_total_phase: count must be > 0");
    Rng rng(seed);
    const double b = std::sqrt(std::max(dist.sigma_c2, 0.0) / 2.0);
    const double s = std::sqrt(std::max(dist.delta_sigma_c2, 0.0));
    std::vector<double> out(count);
    for (auto &v : out)
    {
        const double lap = rng.laplace(dist.phi0, b);
        const double g = rng.normal();
        v = lap + s * g;
    }
    return out;
}

nlohmann::json to_json(const StationaryResult &r)
{
    return nlohmann::json{{"phi0_rad", r.distribution.phi0},
                          {"sigma_c2_rad2", r.distribution.sigma_c2},
                          {"closed_form_phi0_rad", r.closed_form_phi0},
                          {"closed_form_sigma_c2_rad2", r.closed_form_sigma_c2},
                          {"k_max", r.k_max},
                          {"chord_mean_m", r.chord.mean_m},
                          {"chord_second_moment_m2", r.chord.second_m2},
                          {"eps_mean", r.eps.mean},
                          {"eps_second_moment", r.eps.second},
                          {"warnings", r.warnings}};
}

} // namespace cloudmimo
