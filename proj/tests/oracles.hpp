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


// Independent reference computations used only by the tests

#ifndef CLOUDMIMO_TEST_ORACLES_HPP
#define CLOUDMIMO_TEST_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cloudmimo/cloudfield.hpp"
#include "cloudmimo/raygeometry.hpp"

namespace oracle
{

// Chord length by midpoint sampling of `points` equally spaced positions
// along the segment. Resolution is length / points.
inline double sampled_chord(const cloudmimo::Segment2 &seg, const cloudmimo::Cloudlet &c, std::size_t points = 1000000)
{
    const double dx = seg.b.x - seg.a.x;
    const double dy = seg.b.y - seg.a.y;
    const double len = std::hypot(dx, dy);
    if (len == 0.0)
        return 0.0;
    std::size_t inside = 0;
    const double r2 = c.radius_m * c.radius_m;
    for (std::size_t i = 0; i < points; ++i)
    {
        const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(points);
        const double px = seg.a.x + t * dx - c.center.x;
        const double py = seg.a.y + t * dy - c.center.y;
        if (px * px + py * py < r2)
            ++inside;
    }
    return len * static_cast<double>(inside) / static_cast<double>(points);
}

// Adaptive Gauss-Kronrod over (-inf, inf), split at `split` so a kink there
// does not spoil convergence
inline double integrate_line(const std::function<double(double)> &f, double split, double scale)
{
    using boost::math::quadrature::gauss_kronrod;
    const double inf = std::numeric_limits<double>::infinity();
    double err = 0.0;
    auto g = [&](double u) { return f(split + scale * u) * scale; };
    const double left = gauss_kronrod<double, 61>::integrate(g, -inf, 0.0, 15, 1e-13, &err);
    const double right = gauss_kronrod<double, 61>::integrate(g, 0.0, inf, 15, 1e-13, &err);
    return left + right;
}

} // namespace oracle

#endif
