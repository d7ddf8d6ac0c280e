/*
* Copyright (C) 2026 mobiflow contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#pragma once

#include "core/geo.hpp"
#include "od/od.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace mobiflow {

struct EllipseParams {
    std::string region;
    std::string period;
    double major_m = 0.0;
    double minor_m = 0.0;
    double area_m2 = 0.0;
    double azimuth_deg = 0.0; // clockwise from north, [0, 180)
    double shape_index = 1.0; // minor / major
};

/// East/north offsets in meters on a local azimuthal equidistant plane.
struct PlanarPoint {
    double east;
    double north;
};

class LocalProjection {
public:
    explicit LocalProjection(GeoPoint center)
        : center_(center)
    {
    }

    PlanarPoint project(const GeoPoint& p) const;
    const GeoPoint& center() const noexcept { return center_; }

private:
    GeoPoint center_;
};

struct PlanarEllipse {
    double major_m = 0.0;
    double minor_m = 0.0;
    double azimuth_deg = 0.0;
};

/// One-sigma standard deviational ellipse of weighted planar points: axes
/// are 2 sqrt(eigenvalue) of the weighted covariance, azimuth is the bearing
/// of the major eigenvector folded into [0, 180).
PlanarEllipse fit_planar_ellipse(std::span<const PlanarPoint> points, std::span<const double> weights);

/// Projects about the weighted lon/lat center and fits the planar ellipse.
/// Throws EmptyPoints when no point has positive weight.
EllipseParams fit_activity_ellipse(std::span<const WeightedPoint> points, const std::string& region,
                                   const std::string& period);

enum class EllipsePoints {
    /// Centroids of the destinations of trips leaving the region (diagonal included).
    destinations,
    /// Trip endpoints touching the region in either direction.
    all_visited,
};

/// Region centroids weighted by the region's OD flows, per `mode`.
std::vector<WeightedPoint> ellipse_points(const ODMatrix& od, std::span<const GeoPoint> centroids,
                                          std::size_t region, EllipsePoints mode = EllipsePoints::destinations);

struct TravelStats {
    std::string region;
    std::string period;
    std::uint64_t intra_trips = 0;
    std::uint64_t inter_trips = 0;
    double total_distance_m = 0.0;
    double mean_distance_m = 0.0;
};

/// Intra = diagonal; inter = off-diagonal row plus column; distances are
/// centroid haversines weighted by flows, intra trips counted at zero length.
/// Throws UnknownRegion.
TravelStats travel_stats(const ODMatrix& od, std::span<const GeoPoint> centroids, const std::string& region);

/// Per-state unweighted means of ellipse and travel parameters.
struct StateParams {
    std::string state;
    std::string period;
    std::size_t areas = 0;
    double major_m = 0.0;
    double minor_m = 0.0;
    double area_m2 = 0.0;
    double azimuth_deg = 0.0;
    double shape_index = 0.0;
    double intra_trips = 0.0;
    double inter_trips = 0.0;
    double total_distance_m = 0.0;
    double mean_distance_m = 0.0;
};

/// Throws UnmappedArea when an area has no entry in `state_of`.
std::vector<StateParams> state_level_params(std::span<const EllipseParams> ellipses,
                                            std::span<const TravelStats> travel,
                                            const std::map<std::string, std::string>& state_of);

} // namespace mobiflow
