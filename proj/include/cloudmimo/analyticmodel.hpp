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


#ifndef CLOUDMIMO_ANALYTICMODEL_HPP
#define CLOUDMIMO_ANALYTICMODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cloudmimo/cloudfield.hpp"
#include "cloudmimo/phasephysics.hpp"

namespace cloudmimo
{

// Closed-form phase statistics of the fitted cloudlet model.
//
// The stationary phase is Laplace with location phi0 and variance sigma_c^2,
// built from per-k moments weighted by the fitted cloudlet-count law P_k.
// The time-varying perturbation over dt is zero-mean Gaussian. Two routes
// produce (phi0, sigma_c^2): the truncated k-sums, and the fitted
// closed-form expressions with their own embedded fit constants. Both are
// reported; they are not expected to agree.

inline constexpr double kFittedL = 5.0e-16;
inline constexpr double kPkWidth = 30.0;

struct AnalyticParams
{
    CloudConfig cloud;
    PhysicsParams physics;
    double fitted_L = kFittedL;
    double thickness_ratio = 1.0; // D / D_max
    double k_l = 0.0;             // 2.35 * 0.7^log2(D/D_max)
    double b1 = 0.0;              // 0.12 * 2^log2(D/D_max)
    double b2 = 0.0;              // lambda_s D / (4 * 3^log2(D/D_max)), used by p_k
    double b2_closed_form = 0.0;  // (lambda_s D / D_max * 3^log2(D/D_max)) / 4
    double radius_m = 0.0;
    int k_max = 0;
};

// k_max <= 0 selects ceil(b2 + 12 * kPkWidth)
AnalyticParams make_analytic_params(const CloudConfig &cloud, const PhysicsParams &physics, int k_max = 0);

// B1 exp(-((k - B2) / 30)^2); not normalized
double p_k(int k, const AnalyticParams &params);

struct ChordMoments
{
    double mean_m = 0.0;       // E(l)
    double second_m2 = 0.0;    // E(l^2)
    bool second_negative = false;
};

// Fitted raw chord moments, evaluated verbatim. Large exponents
// are handled in log space; NumericError only if the result is not finite.
ChordMoments chord_moments(const AnalyticParams &params);

struct EpsMoments
{
    double mean = 0.0;   // E(eps) = kappa C / 2
    double second = 0.0; // E(eps^2) = kappa^2 C^2 / 3
};

EpsMoments eps_moments(const AnalyticParams &params);

struct PhiMoments
{
    double mean_rad = 0.0;
    double variance_rad2 = 0.0;
    bool clamped = false; // raw variance was negative and has been set to 0
    double raw_variance_rad2 = 0.0;
};

// Mean and variance of the phase accumulated through k cloudlets
PhiMoments moment_of_phi_k(int k, const AnalyticParams &params);

struct PhaseDistribution
{
    double phi0 = 0.0;
    double sigma_c2 = 0.0;
    double delta_sigma_c2 = 0.0;
    double dt_s = 0.0;
};

struct StationaryResult
{
    PhaseDistribution distribution; // truncated-sum route
    double closed_form_phi0 = 0.0;
    double closed_form_sigma_c2 = 0.0;
    int k_max = 0;
    ChordMoments chord;
    EpsMoments eps;
    std::vector<std::string> warnings;
};

// phi0 = sum P_k E(phi_k), sigma_c^2 = sum P_k^2 D(phi_k) for k <= k_max,
// plus the closed-form route. ModelValidityError if the sums are not finite.
StationaryResult stationary_distribution(const AnalyticParams &params);

struct TimeVaryingResult
{
    StationaryResult stationary;
    PhaseDistribution distribution; // stationary sums plus delta_sigma_c2 at dt
    double dl_mean_m = 0.0;         // path-length change per cloudlet, mean
    double dl_variance = 0.0;       // sqrt(dt V_b) 0.9^log2(D/D_max)
};

TimeVaryingResult time_varying_distribution(const AnalyticParams &params, double dt_s);

// Closed-form variance of the time-varying phase perturbation
double delta_sigma_c2(const AnalyticParams &params, double dt_s);

// Laplace density with variance sigma_c2. DegenerateDistribution when
// sigma_c2 == 0 (point mass at phi0).
double laplace_pdf(double phi, const PhaseDistribution &dist);
double laplace_cdf(double phi, const PhaseDistribution &dist);

double gaussian_pdf(double x, double mean, double variance);

// Density of Laplace(phi0, sigma_c2) + N(0, delta_sigma_c2)
double total_pdf(double phi, const PhaseDistribution &dist);

// i.i.d. draws of the Laplace stationary part plus the Gaussian perturbation
std::vector<double> sample_total_phase(const PhaseDistribution &dist, std::size_t count, std::uint64_t seed);

nlohmann::json to_json(const StationaryResult &result);

} // namespace cloudmimo

#endif
