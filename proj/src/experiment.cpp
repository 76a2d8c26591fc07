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


#include "cloudmimo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "cloudmimo/errors.hpp"
#include "cloudmimo/numfmt.hpp"
#include "cloudmimo/raygeometry.hpp"
#include "cloudmimo/rng.hpp"

namespace cloudmimo
{

const char *mode_name(Mode mode)
{
    switch (mode)
    {
    case Mode::capacity_cdf:
        return "capacity_cdf";
    case Mode::correlation_sweep:
        return "correlation_sweep";
    case Mode::compensated_sweep:
        return "compensated_sweep";
    case Mode::phase_compare:
        return "phase_compare";
    case Mode::mac_count:
        return "mac_count";
    }
    return "unknown";
}

void ExperimentSpec::validate() const
{
    cloud.validate();
    physics.validate();
    std::string errors;
    auto check = [&](bool ok, const std::string &msg) {
        if (!ok)
            errors += (errors.empty() ? "" : "; ") + msg;
    };
    check(trials >= 1, "trials must be >= 1");
    check(elevation_deg > 0.0 && elevation_deg <= 90.0, "elevation must lie in (0, 90] degrees");
    check(std::isfinite(cloud_upper_m) && cloud_upper_m >= cloud.thickness_m,
          "cloud upper altitude must be >= the layer thickness");
    check(std::isfinite(dt_s) && dt_s >= 0.0, "dt must be >= 0");
    for (double r : sweep.rwc)
        check(std::isfinite(r) && r >= 0.0, "sweep RWC values must be >= 0");
    for (double d : sweep.thickness_m)
        check(std::isfinite(d) && d > 0.0 && d <= cloud.max_thickness_m && d <= cloud_upper_m,
              "sweep thickness values must lie in (0, min(D_max, upper altitude)]");
    for (double d : sweep.distance_m)
        check(std::isfinite(d) && d > 0.0, "sweep distances must be > 0");
    if (mode == Mode::capacity_cdf || mode == Mode::correlation_sweep || mode == Mode::compensated_sweep)
        scenario.validate();
    if ((mode == Mode::correlation_sweep || mode == Mode::compensated_sweep) && sweep.distance_m.empty())
        check(false, "this mode needs a non-empty distance grid");
    if (mode == Mode::correlation_sweep)
        check(scenario.num_tx >= 2, "correlation needs at least two Tx antennas");
    if (!errors.empty())
        throw ConfigError(errors);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &body)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::size_t err_index = std::numeric_limits<std::size_t>::max();
    std::string err_what;

    auto work = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                body(i);
            }
            catch (const std::exception &e)
            {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (i < err_index)
                {
                    err_index = i;
                    err_what = e.what();
                }
            }
        }
    };

    if (workers <= 1)
        work();
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto &t : pool)
            t.join();
    }
    if (err_index != std::numeric_limits<std::size_t>::max())
        throw TrialError(err_index, err_what);
}

CapacityCdf make_cdf(std::vector<double> samples)
{
    std::sort(samples.begin(), samples.end());
    CapacityCdf cdf;
    cdf.trial_count = samples.size();
    cdf.sorted_samples = std::move(samples);
    return cdf;
}

double outage_capacity(const CapacityCdf &cdf, double p)
{
    if (cdf.sorted_samples.empty())
        throw DomainError("outage_capacity: empty CDF");
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("outage_capacity: p must lie in (0, 1)");
    const auto n = static_cast<double>(cdf.sorted_samples.size());
    const auto rank = static_cast<std::size_t>(std::ceil(p * n));
    return cdf.sorted_samples[std::clamp<std::size_t>(rank, 1, cdf.sorted_samples.size()) - 1];
}

namespace
{

// Everything about one sweep point that does not depend on the trial
struct PointSetup
{
    MimoScenario scenario;
    CloudConfig cloud;
    std::vector<Segment2> segments;
    bool crosses_layer = false;
};

PointSetup setup_point(const ExperimentSpec &spec, double distance_m, double thickness_m, double max_iwc)
{
    PointSetup p;
    p.scenario = spec.scenario;
    p.scenario.link_distance_m = distance_m;
    p.cloud = spec.cloud;
    p.cloud.thickness_m = thickness_m;
    p.cloud.max_iwc_g_m3 = max_iwc;
    p.cloud.validate();
    const LinkGeometry link =
        make_broadside_link(p.scenario.num_tx, p.scenario.num_rx, p.scenario.tx_spacing_m, p.scenario.rx_spacing_m,
                            distance_m, spec.elevation_deg, spec.cloud_upper_m, thickness_m);
    const auto rays = build_rays(link);
    p.crosses_layer = std::any_of(rays.begin(), rays.end(), [](const Ray &r) { return r.crosses_layer(); });
    p.segments = field_frame_segments(rays, link, p.cloud);
    return p;
}

std::vector<double> trial_phases(const PointSetup &p, const PhysicsParams &physics, std::uint64_t master_seed,
                                 std::size_t trial)
{
    // No crossing or zero IWC gives exactly zero phase; skip the field.
    if (!p.crosses_layer || p.cloud.max_iwc_g_m3 == 0.0)
        return std::vector<double>(p.segments.size(), 0.0);
    CloudConfig cloud = p.cloud;
    cloud.rng_seed = stream_seed(master_seed, trial);
    const CloudField field = generate_field(cloud);
    return path_phase(field, p.segments, physics).phase_rad;
}

std::vector<double> values_or(const std::vector<double> &list, double fallback)
{
    return list.empty() ? std::vector<double>{fallback} : list;
}

} // namespace

std::vector<CapacityPoint> run_capacity_cdf(const ExperimentSpec &spec, unsigned threads)
{
    spec.validate();
    std::vector<CapacityPoint> out;
    for (double distance : values_or(spec.sweep.distance_m, spec.scenario.link_distance_m))
        for (double thickness : values_or(spec.sweep.thickness_m, spec.cloud.thickness_m))
            for (double rwc : values_or(spec.sweep.rwc, spec.cloud.max_iwc_g_m3 / kMaxWaterContent))
            {
                const double c = spec.sweep.rwc.empty() ? spec.cloud.max_iwc_g_m3 : rwc * kMaxWaterContent;
                const PointSetup setup = setup_point(spec, distance, thickness, c);
                std::vector<double> caps(spec.trials);
                parallel_for(spec.trials, threads, [&](std::size_t t) {
                    const auto phases = trial_phases(setup, spec.physics, spec.master_seed, t);
                    caps[t] = capacity_bits(los_channel(setup.scenario, phases), setup.scenario.snr_db);
                });
                out.push_back({distance, thickness, rwc, make_cdf(std::move(caps))});
            }
    return out;
}

std::vector<CorrelationPoint> run_correlation_sweep(const ExperimentSpec &spec, unsigned threads)
{
    spec.validate();
    std::vector<CorrelationPoint> out;
    for (double distance : spec.sweep.distance_m)
    {
        const PointSetup setup = setup_point(spec, distance, spec.cloud.thickness_m, spec.cloud.max_iwc_g_m3);
        std::vector<double> coh(spec.trials);
        parallel_for(spec.trials, threads, [&](std::size_t t) {
            coh[t] = column_coherence(los_channel(setup.scenario, trial_phases(setup, spec.physics, spec.master_seed, t)));
        });

        CorrelationPoint pt;
        pt.distance_m = distance;
        pt.crosses_layer = setup.crosses_layer;
        pt.corr_clear = column_coherence(los_channel(setup.scenario));
        double sum = 0.0;
        for (double c : coh)
            if (!std::isnan(c))
            {
                sum += c;
                ++pt.used;
            }
        pt.excluded = coh.size() - pt.used;
        pt.corr_cloud = pt.used > 0 ? sum / static_cast<double>(pt.used) : std::numeric_limits<double>::quiet_NaN();
        double ss = 0.0;
        for (double c : coh)
            if (!std::isnan(c))
                ss += (c - pt.corr_cloud) * (c - pt.corr_cloud);
        pt.corr_cloud_stderr =
            pt.used > 1 ? std::sqrt(ss / static_cast<double>(pt.used - 1) / static_cast<double>(pt.used)) : 0.0;
        out.push_back(pt);
    }
    return out;
}

std::vector<CompensatedPoint> run_compensated_sweep(const ExperimentSpec &spec_in, unsigned threads)
{
    ExperimentSpec spec = spec_in;
    spec.scenario.compensated = true;
    spec.validate();
    const double rayleigh = rayleigh_distance(spec.scenario);
    std::vector<CompensatedPoint> out;
    for (double distance : spec.sweep.distance_m)
    {
        const PointSetup setup = setup_point(spec, distance, spec.cloud.thickness_m, spec.cloud.max_iwc_g_m3);
        std::vector<double> caps(spec.trials);
        parallel_for(spec.trials, threads, [&](std::size_t t) {
            const auto phases = trial_phases(setup, spec.physics, spec.master_seed, t);
            caps[t] = capacity_bits(los_channel(setup.scenario, phases), setup.scenario.snr_db);
        });
        CompensatedPoint pt;
        pt.distance_m = distance;
        pt.median_cloud = outage_capacity(make_cdf(std::move(caps)), 0.5);
        pt.median_clear = capacity_bits(los_channel(setup.scenario), setup.scenario.snr_db);
        pt.beyond_rayleigh = distance > rayleigh;
        pt.crosses_layer = setup.crosses_layer;
        out.push_back(pt);
    }
    return out;
}

SampleMoments sample_moments(const std::vector<double> &samples)
{
    SampleMoments m;
    if (samples.empty())
        return m;
    const auto n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double v : samples)
        sum += v;
    m.mean = sum / n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : samples)
    {
        const double d = v - m.mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    m.variance = m2;
    m.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : std::numeric_limits<double>::quiet_NaN();
    return m;
}

double ks_statistic(const std::vector<double> &sorted, const std::function<double(double)> &cdf,
                    const std::function<double(double)> &cdf_left)
{
    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < sorted.size())
    {
        const double v = sorted[i];
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == v)
            ++j;
        const double below = static_cast<double>(i) / n;
        const double at = static_cast<double>(j) / n;
        d = std::max({d, std::abs(cdf(v) - at), std::abs(cdf_left(v) - below)});
        i = j;
    }
    return d;
}

Segment2 vertical_column(const CloudConfig &cloud)
{
    return {{0.5 * cloud.width_m, 0.0}, {0.5 * cloud.width_m, cloud.thickness_m}};
}

PhaseCompareReport run_phase_compare(const ExperimentSpec &spec, unsigned threads)
{
    spec.validate();
    PhaseCompareReport rep;
    rep.trials = spec.trials;
    rep.dt_s = spec.dt_s;
    rep.phase_rad.resize(spec.trials);
    rep.cloudlet_count.resize(spec.trials);
    std::vector<double> delta(spec.dt_s > 0.0 ? spec.trials : 0);
    const std::vector<Segment2> column{vertical_column(spec.cloud)};

    parallel_for(spec.trials, threads, [&](std::size_t t) {
        CloudConfig cloud = spec.cloud;
        cloud.rng_seed = stream_seed(spec.master_seed, t);
        const CloudField field = generate_field(cloud);
        const PathPhase ph = path_phase(field, column, spec.physics);
        rep.phase_rad[t] = ph.phase_rad[0];
        rep.cloudlet_count[t] = ph.cloudlet_count[0];
        if (spec.dt_s > 0.0)
        {
            Rng drift(stream_seed(cloud.rng_seed, 1));
            const CloudField moved = step_field(field, spec.dt_s, drift);
            delta[t] = path_phase(moved, column, spec.physics).phase_rad[0] - ph.phase_rad[0];
        }
    });

    rep.empirical = sample_moments(rep.phase_rad);
    double ksum = 0.0;
    for (int k : rep.cloudlet_count)
        ksum += k;
    rep.mean_cloudlet_count = ksum / static_cast<double>(spec.trials);

    const AnalyticParams params = make_analytic_params(spec.cloud, spec.physics, spec.k_max);
    rep.analytic = stationary_distribution(params);
    const PhaseDistribution dist = rep.analytic.distribution;

    std::vector<double> sorted = rep.phase_rad;
    std::sort(sorted.begin(), sorted.end());
    const auto cdf = [&](double x) { return laplace_cdf(x, dist); };
    const auto cdf_left = [&](double x) {
        if (dist.sigma_c2 > 0.0)
            return laplace_cdf(x, dist);
        return x <= dist.phi0 ? 0.0 : 1.0;
    };
    rep.ks_distance = ks_statistic(sorted, cdf, cdf_left);

    if (spec.dt_s > 0.0)
    {
        rep.empirical_delta = sample_moments(delta);
        rep.analytic_delta_sigma_c2 = delta_sigma_c2(params, spec.dt_s);
    }
    return rep;
}

MacReport run_mac_count(const ExperimentSpec &spec)
{
    spec.validate();
    MacReport rep;
    const std::vector<Segment2> column{vertical_column(spec.cloud)};
    for (std::size_t round = 0; round < kMacRounds; ++round)
    {
        CloudConfig cloud = spec.cloud;
        cloud.rng_seed = stream_seed(spec.master_seed, round);
        MacCounter mac;
        const CloudField field = generate_field(cloud, &mac);
        path_phase(field, column, spec.physics, &mac);
        rep.mac_per_round.push_back(mac.count);
        rep.cloudlets_per_round.push_back(field.cloudlets.size());
    }
    const auto n = static_cast<double>(kMacRounds);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < kMacRounds; ++i)
    {
        const auto x = static_cast<double>(rep.cloudlets_per_round[i]);
        const auto y = static_cast<double>(rep.mac_per_round[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    rep.average = sy / n;
    const double denom = n * sxx - sx * sx;
    rep.slope_per_cloudlet = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    rep.intercept = (sy - rep.slope_per_cloudlet * sx) / n;
    return rep;
}

void write_capacity_csv(std::ostream &os, const std::vector<CapacityPoint> &points)
{
    os << "distance_m,thickness_m,rwc,rank,cdf,capacity_bps_hz\n";
    for (const auto &p : points)
    {
        const auto n = static_cast<double>(p.cdf.trial_count);
        for (std::size_t i = 0; i < p.cdf.sorted_samples.size(); ++i)
            os << format_double(p.distance_m) << ',' << format_double(p.thickness_m) << ',' << format_double(p.rwc)
               << ',' << (i + 1) << ',' << format_double(static_cast<double>(i + 1) / n) << ','
               << format_double(p.cdf.sorted_samples[i]) << '\n';
    }
}

void write_correlation_csv(std::ostream &os, const std::vector<CorrelationPoint> &points)
{
    os << "distance_m,corr_cloud,corr_clear,corr_cloud_stderr,crosses_layer\n";
    for (const auto &p : points)
        os << format_double(p.distance_m) << ',' << format_double(p.corr_cloud) << ',' << format_double(p.corr_clear)
           << ',' << format_double(p.corr_cloud_stderr) << ',' << (p.crosses_layer ? 1 : 0) << '\n';
}

void write_compensated_csv(std::ostream &os, const std::vector<CompensatedPoint> &points)
{
    os << "distance_m,median_capacity_cloud_bps_hz,median_capacity_clear_bps_hz,beyond_rayleigh,crosses_layer\n";
    for (const auto &p : points)
        os << format_double(p.distance_m) << ',' << format_double(p.median_cloud) << ','
           << format_double(p.median_clear) << ',' << (p.beyond_rayleigh ? 1 : 0) << ',' << (p.crosses_layer ? 1 : 0)
           << '\n';
}

void write_phase_compare_csv(std::ostream &os, const PhaseCompareReport &report, std::size_t bins)
{
    os << "bin_lo_rad,bin_hi_rad,empirical_pdf,analytic_pdf\n";
    if (report.phase_rad.empty() || bins == 0)
        return;
    auto [lo_it, hi_it] = std::minmax_element(report.phase_rad.begin(), report.phase_rad.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (!(hi > lo))
    {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    for (double v : report.phase_rad)
    {
        auto b = static_cast<std::size_t>((v - lo) / width);
        counts[std::min(b, bins - 1)]++;
    }
    const PhaseDistribution &dist = report.analytic.distribution;
    const auto n = static_cast<double>(report.phase_rad.size());
    for (std::size_t b = 0; b < bins; ++b)
    {
        const double a = lo + width * static_cast<double>(b);
        const double z = b + 1 == bins ? hi : a + width;
        const double emp = static_cast<double>(counts[b]) / (n * (z - a));
        const double ana = (laplace_cdf(z, dist) - laplace_cdf(a, dist)) / (z - a);
        os << format_double(a) << ',' << format_double(z) << ',' << format_double(emp) << ',' << format_double(ana)
           << '\n';
    }
}

void write_mac_csv(std::ostream &os, const MacReport &report)
{
    os << "round,cloudlets,mac_count\n";
    for (std::size_t i = 0; i < report.mac_per_round.size(); ++i)
        os << i << ',' << report.cloudlets_per_round[i] << ',' << report.mac_per_round[i] << '\n';
}

nlohmann::json summarize(const std::vector<CapacityPoint> &points)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &p : points)
    {
        const auto &s = p.cdf.sorted_samples;
        arr.push_back({{"distance_m", p.distance_m},
                       {"thickness_m", p.thickness_m},
                       {"rwc", p.rwc},
                       {"trials", p.cdf.trial_count},
                       {"outage_capacity_p50_bps_hz", outage_capacity(p.cdf, 0.5)},
                       {"outage_capacity_p10_bps_hz", outage_capacity(p.cdf, 0.1)},
                       {"min_bps_hz", s.front()},
                       {"max_bps_hz", s.back()}});
    }
    return arr;
}

nlohmann::json summarize(const std::vector<CorrelationPoint> &points)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &p : points)
        arr.push_back({{"distance_m", p.distance_m},
                       {"corr_cloud", p.corr_cloud},
                       {"corr_clear", p.corr_clear},
                       {"corr_cloud_stderr", p.corr_cloud_stderr},
                       {"crosses_layer", p.crosses_layer},
                       {"excluded_samples", p.excluded}});
    return arr;
}

nlohmann::json summarize(const std::vector<CompensatedPoint> &points, double rayleigh_m)
{
    nlohmann::json arr = nlohmann::json::array();
    std::size_t beyond = 0, improved = 0;
    for (const auto &p : points)
    {
        arr.push_back({{"distance_m", p.distance_m},
                       {"median_cloud_bps_hz", p.median_cloud},
                       {"median_clear_bps_hz", p.median_clear},
                       {"beyond_rayleigh", p.beyond_rayleigh}});
        if (p.beyond_rayleigh)
        {
            ++beyond;
            improved += p.median_cloud > p.median_clear ? 1 : 0;
        }
    }
    return {{"rayleigh_distance_m", rayleigh_m},
            {"points", arr},
            {"beyond_rayleigh_points", beyond},
            {"beyond_rayleigh_cloud_exceeds_clear", improved}};
}

namespace
{
nlohmann::json to_json(const SampleMoments &m)
{
    return {{"mean", m.mean}, {"variance", m.variance}, {"excess_kurtosis", m.excess_kurtosis}};
}
} // namespace

nlohmann::json summarize(const PhaseCompareReport &r)
{
    nlohmann::json j{{"trials", r.trials},
                     {"ray", "vertical traverse of the layer at x = W/2"},
                     {"empirical", to_json(r.empirical)},
                     {"mean_cloudlet_count", r.mean_cloudlet_count},
                     {"analytic", cloudmimo::to_json(r.analytic)},
                     {"analytic_excess_kurtosis", 3.0},
                     {"ks_distance", r.ks_distance}};
    if (r.dt_s > 0.0)
        j["time_varying"] = {{"dt_s", r.dt_s},
                             {"empirical_delta", to_json(r.empirical_delta)},
                             {"analytic_delta_sigma_c2_rad2", r.analytic_delta_sigma_c2}};
    return j;
}

nlohmann::json summarize(const MacReport &r)
{
    return {{"rounds", r.mac_per_round.size()},
            {"average_mac_per_round", r.average},
            {"slope_mac_per_cloudlet", r.slope_per_cloudlet},
            {"intercept_mac", r.intercept},
            {"scope", "generate_field + path_phase of one vertical ray; one MAC = one multiply or divide"},
            {"reference_cloudlet_model_mac", 10367},
            {"reference_grid_model_mac", 5391772}};
}

} // namespace cloudmimo
