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


#include "cloudmimo/raygeometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "cloudmimo/errors.hpp"
#include "cloudmimo/numfmt.hpp"

namespace cloudmimo
{

double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

void LinkGeometry::validate() const
{
    std::string errors;
    auto check = [&](bool ok, const char *msg) {
        if (!ok)
            errors += std::string(errors.empty() ? "" : "; ") + msg;
    };
    check(!tx_positions.empty(), "link needs at least one Tx position");
    check(!rx_positions.empty(), "link needs at least one Rx position");
    check(elevation_deg > 0.0 && elevation_deg <= 90.0, "elevation must lie in (0, 90] degrees");
    check(link_distance_m > 0.0, "link distance must be > 0");
    check(std::isfinite(cloud_lower_m) && std::isfinite(cloud_upper_m) && cloud_lower_m < cloud_upper_m,
          "cloud layer needs lower < upper altitude");
    if (!errors.empty())
        throw ConfigError(errors);
}

double element_offset(int index, int count, double spacing_m)
{
    return (static_cast<double>(index) - 0.5 * static_cast<double>(count - 1)) * spacing_m;
}

LinkGeometry make_broadside_link(int num_tx, int num_rx, double tx_spacing_m, double rx_spacing_m, double distance_m,
                                 double elevation_deg, double cloud_upper_m, double thickness_m)
{
    if (num_tx < 1 || num_rx < 1)
        throw ConfigError("arrays need at least one element");
    const double el = elevation_deg * std::numbers::pi / 180.0;
    const Vec3 axis{std::cos(el), 0.0, std::sin(el)};
    const Vec3 across{-std::sin(el), 0.0, std::cos(el)};
    const Vec3 tx_center = distance_m * axis;

    LinkGeometry link;
    for (int j = 0; j < num_tx; ++j)
        link.tx_positions.push_back(tx_center + element_offset(j, num_tx, tx_spacing_m) * across);
    for (int i = 0; i < num_rx; ++i)
        link.rx_positions.push_back(element_offset(i, num_rx, rx_spacing_m) * across);
    link.cloud_upper_m = cloud_upper_m;
    link.cloud_lower_m = cloud_upper_m - thickness_m;
    link.elevation_deg = elevation_deg;
    link.link_distance_m = distance_m;
    link.validate();
    return link;
}

namespace
{

Ray make_ray(Vec3 from, Vec3 to, double lower, double upper)
{
    const Vec3 delta = to - from;
    const double len = norm(delta);
    if (!(len > 0.0))
        throw GeometryError("coincident Tx and Rx positions");
    Ray ray;
    ray.origin = from;
    ray.direction = (1.0 / len) * delta;
    ray.length_m = len;

    double s0 = 0.0;
    double s1 = 0.0;
    if (delta.z == 0.0)
    {
        if (from.z >= lower && from.z <= upper)
            s1 = len;
    }
    else
    {
        // Parameterize by the altitude fraction, then scale, so the vertical
        // case hits the slab faces without rounding from the unit direction.
        double t0 = (lower - from.z) / delta.z;
        double t1 = (upper - from.z) / delta.z;
        if (t0 > t1)
            std::swap(t0, t1);
        t0 = std::clamp(t0, 0.0, 1.0);
        t1 = std::clamp(t1, 0.0, 1.0);
        s0 = t0 * len;
        s1 = t1 * len;
    }
    ray.layer_entry_s = s0;
    ray.layer_exit_s = std::max(s0, s1);
    return ray;
}

Vec3 centroid(const std::vector<Vec3> &pts)
{
    Vec3 sum;
    for (const auto &p : pts)
        sum = sum + p;
    return (1.0 / static_cast<double>(pts.size())) * sum;
}

double chord_along(Point2 a, double ux, double uy, double seg_len, const Cloudlet &c, MacCounter *mac)
{
    const double fx = c.center.x - a.x;
    const double fy = c.center.y - a.y;
    const double proj = fx * ux + fy * uy;
    const double perp2 = fx * fx + fy * fy - proj * proj;
    const double r2 = c.radius_m * c.radius_m;
    tally(mac, 6);
    if (perp2 >= r2)
        return 0.0;
    const double half = std::sqrt(r2 - perp2);
    const double lo = std::max(proj - half, 0.0);
    const double hi = std::min(proj + half, seg_len);
    return hi > lo ? hi - lo : 0.0;
}

} // namespace

std::vector<Ray> build_rays(const LinkGeometry &link)
{
    link.validate();
    std::vector<Ray> rays;
    rays.reserve(link.rx_positions.size() * link.tx_positions.size());
    for (const auto &rx : link.rx_positions)
        for (const auto &tx : link.tx_positions)
            rays.push_back(make_ray(tx, rx, link.cloud_lower_m, link.cloud_upper_m));
    return rays;
}

double Segment2::length() const { return std::hypot(b.x - a.x, b.y - a.y); }

Segment2 to_field_frame(const Ray &ray, const LinkGeometry &link, const CloudConfig &config)
{
    if (!ray.crosses_layer())
        throw DomainError("to_field_frame: ray does not cross the cloud layer");
    const double thickness = link.cloud_upper_m - link.cloud_lower_m;
    if (std::abs(thickness - config.thickness_m) > 1e-9 * std::max(1.0, config.thickness_m))
        throw ConfigError("link layer thickness " + format_double(thickness) + " m differs from cloud thickness D = " +
                          format_double(config.thickness_m) + " m");

    // Reference column: link axis midpoint inside the layer, falling back to
    // the ray's own midpoint when the axis misses the layer.
    const Ray axis = make_ray(centroid(link.tx_positions), centroid(link.rx_positions), link.cloud_lower_m,
                              link.cloud_upper_m);
    const Ray &ref = axis.crosses_layer() ? axis : ray;
    const double x_mid = ref.at(0.5 * (ref.layer_entry_s + ref.layer_exit_s)).x;

    const Vec3 p0 = ray.at(ray.layer_entry_s);
    const Vec3 p1 = ray.at(ray.layer_exit_s);
    const double half_w = 0.5 * config.width_m;
    Segment2 seg{{p0.x - x_mid + half_w, std::clamp(p0.z - link.cloud_lower_m, 0.0, thickness)},
                 {p1.x - x_mid + half_w, std::clamp(p1.z - link.cloud_lower_m, 0.0, thickness)}};

    const double tol = 1e-9 * config.width_m;
    if (std::min(seg.a.x, seg.b.x) < -tol || std::max(seg.a.x, seg.b.x) > config.width_m + tol)
    {
        throw ConfigError("in-layer horizontal extent of the path (" + format_double(std::abs(p1.x - p0.x)) +
                          " m, centered at offset " + format_double(0.5 * (p0.x + p1.x) - x_mid) +
                          " m) does not fit the cloud width W = " + format_double(config.width_m) +
                          " m; use a larger cloud width");
    }
    seg.a.x = std::clamp(seg.a.x, 0.0, config.width_m);
    seg.b.x = std::clamp(seg.b.x, 0.0, config.width_m);
    return seg;
}

std::vector<Segment2> field_frame_segments(std::span<const Ray> rays, const LinkGeometry &link,
                                           const CloudConfig &config)
{
    std::vector<Segment2> out;
    out.reserve(rays.size());
    const Point2 parked{0.5 * config.width_m, 0.0};
    for (const auto &ray : rays)
        out.push_back(ray.crosses_layer() ? to_field_frame(ray, link, config) : Segment2{parked, parked});
    return out;
}

double chord_length(const Segment2 &segment, const Cloudlet &cloudlet, MacCounter *mac)
{
    const double len = segment.length();
    tally(mac, 2);
    if (!(len > 0.0))
        return 0.0;
    const double ux = (segment.b.x - segment.a.x) / len;
    const double uy = (segment.b.y - segment.a.y) / len;
    tally(mac, 2);
    return chord_along(segment.a, ux, uy, len, cloudlet, mac);
}

std::vector<Intersection> path_intersections(const CloudField &field, const Segment2 &segment, MacCounter *mac)
{
    std::vector<Intersection> hits;
    const double len = segment.length();
    tally(mac, 2);
    if (!(len > 0.0))
        return hits;
    const double ux = (segment.b.x - segment.a.x) / len;
    const double uy = (segment.b.y - segment.a.y) / len;
    tally(mac, 2);
    for (std::size_t i = 0; i < field.cloudlets.size(); ++i)
    {
        const double l = chord_along(segment.a, ux, uy, len, field.cloudlets[i], mac);
        if (l > 0.0)
            hits.push_back({i, l});
    }
    return hits;
}

void write_chords_csv(std::ostream &os, const CloudField &field, std::span<const Segment2> segments)
{
    os << "ray_index,cloudlet_index,chord_m\n";
    for (std::size_t r = 0; r < segments.size(); ++r)
        for (const auto &hit : path_intersections(field, segments[r]))
            os << r << ',' << hit.cloudlet_index << ',' << format_double(hit.chord_m) << '\n';
}

} // namespace cloudmimo
