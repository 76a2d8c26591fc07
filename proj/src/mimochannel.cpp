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


#include "cloudmimo/mimochannel.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <ostream>

#include "cloudmimo/errors.hpp"
#include "cloudmimo/numfmt.hpp"
#include "cloudmimo/phasephysics.hpp"
#include "cloudmimo/raygeometry.hpp"

namespace cloudmimo
{

double MimoScenario::wavelength_m() const { return kSpeedOfLight / carrier_frequency_hz; }

double MimoScenario::snr_linear() const { return std::pow(10.0, snr_db / 10.0); }

void MimoScenario::validate() const
{
    std::string errors;
    auto check = [&](bool ok, const char *msg) {
        if (!ok)
            errors += std::string(errors.empty() ? "" : "; ") + msg;
    };
    check(num_tx >= 1 && num_rx >= 1, "antenna counts must be >= 1");
    check(std::isfinite(tx_spacing_m) && tx_spacing_m > 0.0, "Tx spacing must be > 0");
    check(std::isfinite(rx_spacing_m) && rx_spacing_m > 0.0, "Rx spacing must be > 0");
    check(std::isfinite(carrier_frequency_hz) && carrier_frequency_hz > 0.0, "carrier frequency must be > 0");
    check(std::isfinite(snr_db), "SNR must be finite");
    check(std::isfinite(link_distance_m) && link_distance_m > 0.0, "link distance must be > 0");
    if (!errors.empty())
        throw ConfigError(errors);
}

nlohmann::json to_json(const MimoScenario &s)
{
    return nlohmann::json{{"num_tx", s.num_tx},
                          {"num_rx", s.num_rx},
                          {"tx_spacing_m", s.tx_spacing_m},
                          {"rx_spacing_m", s.rx_spacing_m},
                          {"carrier_frequency_hz", s.carrier_frequency_hz},
                          {"snr_db", s.snr_db},
                          {"link_distance_m", s.link_distance_m},
                          {"compensated", s.compensated}};
}

namespace
{

// Wrap to (-pi, pi]
double wrap_phase(double phi)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::remainder(phi, two_pi);
    if (w <= -std::numbers::pi)
        w += two_pi;
    return w;
}

} // namespace

ChannelMatrix los_channel(const MimoScenario &scenario, std::span<const double> cloud_phase)
{
    scenario.validate();
    const auto nr = static_cast<Eigen::Index>(scenario.num_rx);
    const auto nt = static_cast<Eigen::Index>(scenario.num_tx);
    if (!cloud_phase.empty() && cloud_phase.size() != static_cast<std::size_t>(nr * nt))
        throw DomainError("los_channel: expected " + std::to_string(nr * nt) + " cloud phases, got " +
                          std::to_string(cloud_phase.size()));

    const double lambda0 = scenario.wavelength_m();
    const double D = scenario.link_distance_m;

    ChannelMatrix h;
    h.entries.resize(nr, nt);
    h.distance_m.resize(nr, nt);
    h.cloud_phase = Eigen::MatrixXd::Zero(nr, nt);
    h.compensated = scenario.compensated;
    for (Eigen::Index i = 0; i < nr; ++i)
    {
        const double ri = element_offset(static_cast<int>(i), scenario.num_rx, scenario.rx_spacing_m);
        for (Eigen::Index j = 0; j < nt; ++j)
        {
            const double tj = element_offset(static_cast<int>(j), scenario.num_tx, scenario.tx_spacing_m);
            const double d = std::hypot(D, tj - ri);
            // Reduce d / lambda0 to its fractional cycle before scaling, so the
            // geometric phase keeps full precision at tens of kilometers.
            const double cycles = d / lambda0;
            const double geo = 2.0 * std::numbers::pi * (cycles - std::floor(cycles));
            const double cloud = cloud_phase.empty() ? 0.0 : cloud_phase[static_cast<std::size_t>(i * nt + j)];
            const double gain = scenario.compensated ? 1.0 : 1.0 / d;
            const double theta = wrap_phase(geo + cloud);
            h.entries(i, j) = std::polar(gain, -theta);
            h.distance_m(i, j) = d;
            h.cloud_phase(i, j) = cloud;
        }
    }
    return h;
}

double capacity_bits(const ChannelMatrix &channel, double snr_db)
{
    const Eigen::MatrixXcd &raw = channel.entries;
    if (!raw.allFinite())
        throw NumericError("capacity_bits: channel has non-finite entries");
    const auto nr = raw.rows();
    const auto nt = raw.cols();
    Eigen::MatrixXcd H = raw;
    if (!channel.compensated)
    {
        const double mean_power = raw.squaredNorm() / static_cast<double>(nr * nt);
        if (mean_power > 0.0)
            H /= std::sqrt(mean_power);
    }
    const double rho = std::pow(10.0, snr_db / 10.0);
    const Eigen::MatrixXcd gram = Eigen::MatrixXcd::Identity(nr, nr) + (rho / static_cast<double>(nt)) * H * H.adjoint();
    Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw NumericError("capacity_bits: I + rho/Nt H H^H is not positive definite");
    double log2det = 0.0;
    for (Eigen::Index k = 0; k < nr; ++k)
        log2det += 2.0 * std::log2(llt.matrixL()(k, k).real());
    if (!std::isfinite(log2det))
        throw NumericError("capacity_bits: determinant is not finite");
    return log2det;
}

double rayleigh_distance(const MimoScenario &scenario)
{
    const double tx_aperture = scenario.tx_spacing_m * static_cast<double>(scenario.num_tx - 1);
    const double rx_aperture = scenario.rx_spacing_m * static_cast<double>(scenario.num_rx - 1);
    const double L = std::max(tx_aperture, rx_aperture);
    return 2.0 * L * L / scenario.wavelength_m();
}

double column_coherence(const ChannelMatrix &channel)
{
    if (channel.entries.cols() < 2)
        throw DomainError("column_coherence: need at least two Tx columns");
    const auto c0 = channel.entries.col(0);
    const auto c1 = channel.entries.col(1);
    const double n0 = c0.norm();
    const double n1 = c1.norm();
    if (!(n0 > 0.0) || !(n1 > 0.0))
        return std::numeric_limits<double>::quiet_NaN();
    return std::min(1.0, std::abs(c0.dot(c1)) / (n0 * n1));
}

CorrelationResult subchannel_correlation(std::span<const ChannelMatrix> samples)
{
    if (samples.empty())
        throw DomainError("subchannel_correlation: empty ensemble");
    const auto rows = samples.front().entries.rows();
    const auto cols = samples.front().entries.cols();
    CorrelationResult res;
    double sum = 0.0;
    for (const auto &h : samples)
    {
        if (h.entries.rows() != rows || h.entries.cols() != cols)
            throw DomainError("subchannel_correlation: matrices differ in shape");
        const double c = column_coherence(h);
        if (std::isnan(c))
        {
            ++res.excluded;
            continue;
        }
        sum += c;
        ++res.used;
    }
    if (res.excluded > 0)
        res.warnings.push_back(std::to_string(res.excluded) + " sample(s) with a zero-norm column excluded");
    res.mean = res.used > 0 ? sum / static_cast<double>(res.used) : std::numeric_limits<double>::quiet_NaN();
    return res;
}

void write_channel_csv(std::ostream &os, const ChannelMatrix &channel)
{
    os << "i,j,re,im,d_m,phi_cloud_rad\n";
    for (Eigen::Index i = 0; i < channel.entries.rows(); ++i)
        for (Eigen::Index j = 0; j < channel.entries.cols(); ++j)
            os << i << ',' << j << ',' << format_double(channel.entries(i, j).real()) << ','
               << format_double(channel.entries(i, j).imag()) << ',' << format_double(channel.distance_m(i, j)) << ','
               << format_double(channel.cloud_phase(i, j)) << '\n';
}

} // namespace cloudmimo
