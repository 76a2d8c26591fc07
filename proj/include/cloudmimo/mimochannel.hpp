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


#ifndef CLOUDMIMO_MIMOCHANNEL_HPP
#define CLOUDMIMO_MIMOCHANNEL_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace cloudmimo
{

struct MimoScenario
{
    int num_tx = 2;
    int num_rx = 2;
    double tx_spacing_m = 1.0;
    double rx_spacing_m = 6.0827;
    double carrier_frequency_hz = 73.5e9;
    double snr_db = 20.0;
    double link_distance_m = 10000.0;
    bool compensated = false; // identical received power on every entry

    double wavelength_m() const;
    double snr_linear() const;
    void validate() const;
};

nlohmann::json to_json(const MimoScenario &scenario);

struct ChannelMatrix
{
    Eigen::MatrixXcd entries;     // Nr x Nt
    Eigen::MatrixXd distance_m;   // Nr x Nt
    Eigen::MatrixXd cloud_phase;  // Nr x Nt, unwrapped radians
    bool compensated = false;
};

// LoS channel between broadside ULAs facing each other at link_distance_m.
//
// entry(i, j) = g exp(-i (2 pi d_ij / lambda0 + phi_ij)) with g = 1 in
// compensated mode and 1 / d_ij otherwise. cloud_phase is either empty or
// holds Nr * Nt values in row-major (rx, tx) order, as produced by
// build_rays. The total phase is wrapped to (-pi, pi] before exponentiation.
ChannelMatrix los_channel(const MimoScenario &scenario, std::span<const double> cloud_phase = {});

// log2 det(I + (rho / Nt) H H^H). Uncompensated matrices are first scaled to
// unit mean squared entry magnitude.
double capacity_bits(const ChannelMatrix &channel, double snr_db);

// 2 L^2 / lambda0 with L the larger array aperture
double rayleigh_distance(const MimoScenario &scenario);

// |<h_0, h_1>| / (|h_0| |h_1|) of the first two Tx columns; NaN if a column
// has zero norm
double column_coherence(const ChannelMatrix &channel);

struct CorrelationResult
{
    double mean = 0.0;
    std::size_t used = 0;
    std::size_t excluded = 0;
    std::vector<std::string> warnings;
};

// Ensemble mean of column_coherence; zero-norm samples are skipped
CorrelationResult subchannel_correlation(std::span<const ChannelMatrix> samples);

// Dump with header `i,j,re,im,d_m,phi_cloud_rad`
void write_channel_csv(std::ostream &os, const ChannelMatrix &channel);

} // namespace cloudmimo

#endif
