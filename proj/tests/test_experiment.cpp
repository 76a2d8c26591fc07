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
#include <sstream>

#include "cloudmimo/errors.hpp"
#include "cloudmimo/experiment.hpp"

using namespace cloudmimo;

namespace
{

ExperimentSpec small_spec(Mode mode)
{
    ExperimentSpec s;
    s.mode = mode;
    s.trials = 200;
    s.master_seed = 42;
    return s;
}

} // namespace

TEST_CASE("outage capacity uses the lower nearest rank")
{
    const auto cdf = make_cdf({5.0, 1.0, 4.0, 2.0, 3.0});
    CHECK(cdf.sorted_samples.front() == 1.0);
    CHECK(outage_capacity(cdf, 0.1) == 1.0);
    CHECK(outage_capacity(cdf, 0.2) == 1.0);
    CHECK(outage_capacity(cdf, 0.21) == 2.0);
    CHECK(outage_capacity(cdf, 0.5) == 3.0);
    CHECK(outage_capacity(cdf, 0.99) == 5.0);
    CHECK_THROWS_AS(outage_capacity(cdf, 0.0), DomainError);
    CHECK_THROWS_AS(outage_capacity(CapacityCdf{}, 0.5), DomainError);
}

TEST_CASE("parallel_for visits every index once and reports the lowest failure")
{
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits)
        CHECK(h == 1);

    try
    {
        parallel_for(100, 3, [](std::size_t i) {
            if (i == 17 || i == 60)
                throw std::runtime_error("boom");
        });
        FAIL("expected a TrialError");
    }
    catch (const TrialError &e)
    {
        CHECK(e.trial_index == 17);
    }
}

TEST_CASE("capacity CDF results do not depend on the thread count")
{
    auto s = small_spec(Mode::capacity_cdf);
    s.sweep.rwc = {0.4, 0.8};
    std::ostringstream one, four;
    write_capacity_csv(one, run_capacity_cdf(s, 1));
    write_capacity_csv(four, run_capacity_cdf(s, 4));
    CHECK(one.str() == four.str());
    CHECK(one.str().rfind("distance_m,thickness_m,rwc,rank,cdf,capacity_bps_hz\n", 0) == 0);
}

TEST_CASE("zero water content reproduces clear sky")
{
    auto s = small_spec(Mode::capacity_cdf);
    s.sweep.rwc = {0.0};
    const auto pts = run_capacity_cdf(s, 1);
    REQUIRE(pts.size() == 1);
    const double clear = capacity_bits(los_channel(s.scenario), s.scenario.snr_db);
    CHECK(pts[0].cdf.sorted_samples.front() == clear);
    CHECK(pts[0].cdf.sorted_samples.back() == clear);
}

TEST_CASE("sweep points cover the product of the lists")
{
    auto s = small_spec(Mode::capacity_cdf);
    s.trials = 20;
    s.sweep.rwc = {0.2, 0.4};
    s.sweep.thickness_m = {500.0, 1000.0};
    s.sweep.distance_m = {10000.0, 40000.0};
    const auto pts = run_capacity_cdf(s, 2);
    CHECK(pts.size() == 8);
    for (const auto &p : pts)
        CHECK(p.cdf.sorted_samples.size() == 20);
}

TEST_CASE("correlation sweep flags paths that miss the layer")
{
    auto s = small_spec(Mode::correlation_sweep);
    s.scenario.rx_spacing_m = 5.0;
    s.sweep.distance_m = {3000.0, 10000.0};
    const auto pts = run_correlation_sweep(s, 2);
    REQUIRE(pts.size() == 2);
    CHECK_FALSE(pts[0].crosses_layer);
    CHECK(pts[0].corr_cloud == doctest::Approx(pts[0].corr_clear).epsilon(1e-12));
    CHECK(pts[0].corr_cloud_stderr == doctest::Approx(0.0));
    CHECK(pts[1].crosses_layer);
    CHECK(pts[1].used == s.trials);
}

TEST_CASE("compensated sweep classifies distances against the Rayleigh distance")
{
    auto s = small_spec(Mode::compensated_sweep);
    s.sweep.distance_m = {10000.0, 40000.0};
    s.sweep.rwc = {0.8};
    const auto pts = run_compensated_sweep(s, 1);
    REQUIRE(pts.size() == 2);
    CHECK_FALSE(pts[0].beyond_rayleigh);
    CHECK(pts[1].beyond_rayleigh);
    CHECK(pts[1].median_clear <= 2.0 * std::log2(101.0));
}

TEST_CASE("spec validation")
{
    auto s = small_spec(Mode::correlation_sweep);
    CHECK_THROWS_AS(s.validate(), ConfigError); // no distance grid
    s.sweep.distance_m = {1000.0};
    s.validate();
    s.elevation_deg = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = small_spec(Mode::capacity_cdf);
    s.trials = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("sample moments and KS distance")
{
    const auto m = sample_moments({1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == 2.5);
    CHECK(m.variance == 1.25);
    CHECK(std::isnan(sample_moments({2.0, 2.0}).excess_kurtosis));

    const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_statistic({0.25, 0.75}, uniform, uniform) == doctest::Approx(0.25));
    // a point mass matched by an atom
    const auto step = [](double x) { return x < 0.0 ? 0.0 : 1.0; };
    const auto step_left = [](double x) { return x <= 0.0 ? 0.0 : 1.0; };
    CHECK(ks_statistic({0.0, 0.0, 0.0}, step, step_left) == 0.0);
}

TEST_CASE("phase comparison is reproducible and tracks the cloudlet count")
{
    auto s = small_spec(Mode::phase_compare);
    s.dt_s = 1e-3;
    const auto a = run_phase_compare(s, 1);
    const auto b = run_phase_compare(s, 3);
    CHECK(a.phase_rad == b.phase_rad);
    CHECK(a.mean_cloudlet_count > 0.0);
    CHECK(a.empirical.mean > 0.0);
    std::ostringstream os;
    write_phase_compare_csv(os, a, 10);
    CHECK(os.str().rfind("bin_lo_rad,bin_hi_rad,empirical_pdf,analytic_pdf\n", 0) == 0);
}

TEST_CASE("MAC count report")
{
    auto s = small_spec(Mode::mac_count);
    const auto r = run_mac_count(s);
    CHECK(r.mac_per_round.size() == kMacRounds);
    CHECK(r.average > 0.0);
    CHECK(r.slope_per_cloudlet > 0.0);
    const auto j = summarize(r);
    CHECK(j.at("reference_cloudlet_model_mac") == 10367);
}

TEST_CASE("an empty field costs only the fixed generation overhead")
{
    auto s = small_spec(Mode::mac_count);
    s.cloud.poisson_density = 0.0;
    const auto r = run_mac_count(s);
    for (auto m : r.mac_per_round)
        CHECK(m == r.mac_per_round.front());
    CHECK(r.slope_per_cloudlet == 0.0);
}

TEST_CASE("dry cloud gives identical point masses and zero KS distance")
{
    auto s = small_spec(Mode::phase_compare);
    s.cloud.max_iwc_g_m3 = 0.0;
    const auto r = run_phase_compare(s, 1);
    CHECK(r.ks_distance == 0.0);
    CHECK(r.empirical.mean == 0.0);
}

TEST_CASE("simulated phase is heavy tailed and linear in the water content")
{
    auto s = small_spec(Mode::phase_compare);
    s.trials = 5000;
    const auto base = run_phase_compare(s, 2);
    CHECK(base.empirical.excess_kurtosis > 0.0);
    s.cloud.max_iwc_g_m3 *= 2.0;
    const auto twice = run_phase_compare(s, 2);
    CHECK(twice.empirical.mean / base.empirical.mean == doctest::Approx(2.0).epsilon(0.05));
}
