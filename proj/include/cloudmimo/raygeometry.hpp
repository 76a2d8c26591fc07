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


#ifndef CLOUDMIMO_RAYGEOMETRY_HPP
#define CLOUDMIMO_RAYGEOMETRY_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "cloudmimo/cloudfield.hpp"
#include "cloudmimo/mac_counter.hpp"

namespace cloudmimo
{

// World frame: x horizontal inside the vertical model plane, y across the
// plane, z altitude. Meters.
struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
};

double dot(Vec3 a, Vec3 b);
double norm(Vec3 a);

struct LinkGeometry
{
    std::vector<Vec3> tx_positions;
    std::vector<Vec3> rx_positions;
    double cloud_lower_m = 0.0;
    double cloud_upper_m = 0.0;
    double elevation_deg = 90.0;
    double link_distance_m = 0.0;

    void validate() const;
};

// Air-to-ground link with broadside uniform linear arrays.
//
// The receive array is centered on the ground origin, the transmit array is
// centered `distance_m` along the elevation direction. Both arrays lie in the
// model plane, perpendicular to the link axis. The cloud layer occupies
// [cloud_upper_m - thickness_m, cloud_upper_m].
LinkGeometry make_broadside_link(int num_tx, int num_rx, double tx_spacing_m, double rx_spacing_m, double distance_m,
                                 double elevation_deg, double cloud_upper_m, double thickness_m);

// Offset of element `index` from the array center along the array axis
double element_offset(int index, int count, double spacing_m);

struct Ray
{
    Vec3 origin;
    Vec3 direction;            // unit
    double length_m = 0.0;     // Tx to Rx
    double layer_entry_s = 0.0;
    double layer_exit_s = 0.0; // equal to entry when the path misses the layer

    Vec3 at(double s) const { return origin + s * direction; }
    double in_cloud_length() const { return layer_exit_s - layer_entry_s; }
    bool crosses_layer() const { return layer_exit_s > layer_entry_s; }
};

// One ray per (rx, tx) pair, Tx -> Rx, index rx * num_tx + tx
std::vector<Ray> build_rays(const LinkGeometry &link);

struct Segment2
{
    Point2 a;
    Point2 b;

    double length() const;
};

// Map the in-layer part of `ray` into the [0, W] x [0, D] rectangle.
//
// y is altitude above the layer bottom. x is horizontal displacement in the
// model plane (the cross-plane y coordinate is dropped), shifted so that the
// in-layer midpoint of the link axis (Tx centroid to Rx centroid) lands at
// x = W / 2. All rays of one link therefore share a frame and keep their true
// horizontal separations. Throws ConfigError if the segment leaves [0, W].
Segment2 to_field_frame(const Ray &ray, const LinkGeometry &link, const CloudConfig &config);

// to_field_frame for every ray; rays that miss the layer become zero-length
// segments at (W/2, 0), which intersect nothing.
std::vector<Segment2> field_frame_segments(std::span<const Ray> rays, const LinkGeometry &link,
                                           const CloudConfig &config);

// Length of segment inside the cloudlet's disk (boundary-tangent counts as 0)
double chord_length(const Segment2 &segment, const Cloudlet &cloudlet, MacCounter *mac = nullptr);

struct Intersection
{
    std::size_t cloudlet_index = 0;
    double chord_m = 0.0;
};

// Cloudlets with a positive chord, ascending index
std::vector<Intersection> path_intersections(const CloudField &field, const Segment2 &segment,
                                             MacCounter *mac = nullptr);

// Debug dump with header `ray_index,cloudlet_index,chord_m`
void write_chords_csv(std::ostream &os, const CloudField &field, std::span<const Segment2> segments);

} // namespace cloudmimo

#endif
