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


#ifndef CLOUDMIMO_EXPERIMENT_HPP
#define CLOUDMIMO_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cloudmimo/analyticmodel.hpp"
#include "cloudmimo/cloudfield.hpp"
#include "cloudmimo/mimochannel.hpp"
#include "cloudmimo/phasephysics.hpp"

namespace cloudmimo
{

// Relative water content is IWC divided by this maximum, g/m^3
inline constexpr double kMaxWaterContent = 0.6;
inline constexpr std::size_t kMacRounds = 1000;
inline constexpr const char *kQuantileConvention = "nearest-rank lower: x_(ceil(p n)) of the sorted samples";

enum class Mode
{
    capacity_cdf,
    correlation_sweep,
    compensated_sweep,
    phase_compare,
    mac_count
};

const char *mode_name(Mode mode);

// Parameter lists; an empty list means "use the single configured value".
// capacity_cdf runs the Cartesian product distance x thickness x rwc.
struct Sweep
{
    std::vector<double> rwc;
    std::vector<double> thickness_m;
    std::vector<double> distance_m;
};

// Link layout shared by all modes: the ground array at the origin, the
// airborne array link_distance_m along the elevation direction, and the cloud
// layer [cloud_upper_m - D, cloud_upper_m].
struct ExperimentSpec
{
    Mode mode = Mode::capacity_cdf;
    MimoScenario scenario;
    CloudConfig cloud;
    PhysicsParams physics;
    double elevation_deg = 90.0;
    double cloud_upper_m = 8000.0;
    std::size_t trials = 10000;
    std::uint64_t master_seed = 1;
    Sweep sweep;
    double dt_s = 0.0;
    int k_max = 0;

    void validate() const;
};

// Raised when a trial fails; carries the trial index
struct TrialError : std::runtime_error
{
    TrialError(std::size_t trial, const std::string &what)
        : std::runtime_error("trial " + std::to_string(trial) + ": " + what), trial_index(trial)
    {
    }
    std::size_t trial_index;
};

// Runs body(i) for i in [0, count) on up to `threads` workers. Results must
// be written by index; the lowest failing index is rethrown as TrialError.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &body);

struct CapacityCdf
{
    std::vector<double> sorted_samples;
    std::size_t trial_count = 0;
};

CapacityCdf make_cdf(std::vector<double> samples);

// Empirical p-quantile, nearest-rank lower. DomainError for an empty CDF or
// p outside (0, 1).
double outage_capacity(const CapacityCdf &cdf, double p);

struct CapacityPoint
{
    double distance_m = 0.0;
    double thickness_m = 0.0;
    double rwc = 0.0;
    CapacityCdf cdf;
};

std::vector<CapacityPoint> run_capacity_cdf(const ExperimentSpec &spec, unsigned threads = 1);

struct CorrelationPoint
{
    double distance_m = 0.0;
    double corr_cloud = 0.0;
    double corr_clear = 0.0;
    double corr_cloud_stderr = 0.0;
    bool crosses_layer = false;
    std::size_t used = 0;
    std::size_t excluded = 0;
};

std::vector<CorrelationPoint> run_correlation_sweep(const ExperimentSpec &spec, unsigned threads = 1);

struct CompensatedPoint
{
    double distance_m = 0.0;
    double median_cloud = 0.0;
    double median_clear = 0.0;
    bool beyond_rayleigh = false;
    bool crosses_layer = false;
};

std::vector<CompensatedPoint> run_compensated_sweep(const ExperimentSpec &spec, unsigned threads = 1);

struct SampleMoments
{
    double mean = 0.0;
    double variance = 0.0;
    double excess_kurtosis = 0.0; // NaN for constant samples
};

SampleMoments sample_moments(const std::vector<double> &samples);

// sup_x |F_n(x) - F(x)| for sorted samples; `cdf_left` is the left limit
// F(x-), which differs from `cdf` only at atoms of F
double ks_statistic(const std::vector<double> &sorted, const std::function<double(double)> &cdf,
                    const std::function<double(double)> &cdf_left);

struct PhaseCompareReport
{
    std::size_t trials = 0;
    std::vector<double> phase_rad;    // per trial, single vertical ray
    std::vector<int> cloudlet_count;  // per trial
    SampleMoments empirical;
    double mean_cloudlet_count = 0.0;
    StationaryResult analytic;
    double ks_distance = 0.0;
    // time-varying part, filled when dt > 0
    double dt_s = 0.0;
    SampleMoments empirical_delta;
    double analytic_delta_sigma_c2 = 0.0;
};

PhaseCompareReport run_phase_compare(const ExperimentSpec &spec, unsigned threads = 1);

struct MacReport
{
    std::vector<std::uint64_t> mac_per_round;
    std::vector<std::size_t> cloudlets_per_round;
    double average = 0.0;
    double slope_per_cloudlet = 0.0; // least squares of MAC vs cloudlet count
    double intercept = 0.0;
};

// Average MACs of generate_field plus the vertical-ray path_phase over
// kMacRounds rounds
MacReport run_mac_count(const ExperimentSpec &spec);

// Vertical traverse of the layer at x = W/2, used by the single-ray modes
Segment2 vertical_column(const CloudConfig &cloud);

void write_capacity_csv(std::ostream &os, const std::vector<CapacityPoint> &points);
void write_correlation_csv(std::ostream &os, const std::vector<CorrelationPoint> &points);
void write_compensated_csv(std::ostream &os, const std::vector<CompensatedPoint> &points);
void write_phase_compare_csv(std::ostream &os, const PhaseCompareReport &report, std::size_t bins = 60);
void write_mac_csv(std::ostream &os, const MacReport &report);

nlohmann::json summarize(const std::vector<CapacityPoint> &points);
nlohmann::json summarize(const std::vector<CorrelationPoint> &points);
nlohmann::json summarize(const std::vector<CompensatedPoint> &points, double rayleigh_m);
nlohmann::json summarize(const PhaseCompareReport &report);
nlohmann::json summarize(const MacReport &report);

} // namespace cloudmimo

#endif
