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
#include "activityspace/ellipse.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <cmath>

namespace mobiflow {

PlanarPoint LocalProjection::project(const GeoPoint& p) const
{
    const double d = haversine_m(center_, p);
    if (d == 0.0) {
        return {0.0, 0.0};
    }
    const double bearing = deg_to_rad(initial_bearing_deg(center_, p));
    return {d * std::sin(bearing), d * std::cos(bearing)};
}

PlanarEllipse fit_planar_ellipse(std::span<const PlanarPoint> points, std::span<const double> weights)
{
    if (points.size() != weights.size()) {
        fail(Errc::invalid_argument, "points and weights differ in length");
    }
    CompensatedSum sw;
    CompensatedSum sx;
    CompensatedSum sy;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
            fail(Errc::invalid_argument, "weights must be finite and non-negative");
        }
        sw.add(weights[i]);
        sx.add(weights[i] * points[i].east);
        sy.add(weights[i] * points[i].north);
    }
    const double w = sw.value();
    if (!(w > 0.0)) {
        fail(Errc::empty_points, "ellipse needs at least one point with positive weight");
    }
    const double mx = sx.value() / w;
    const double my = sy.value() / w;
    CompensatedSum cxx;
    CompensatedSum cyy;
    CompensatedSum cxy;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double dx = points[i].east - mx;
        const double dy = points[i].north - my;
        cxx.add(weights[i] * dx * dx);
        cyy.add(weights[i] * dy * dy);
        cxy.add(weights[i] * dx * dy);
    }
    const double sxx = cxx.value() / w;
    const double syy = cyy.value() / w;
    const double sxy = cxy.value() / w;

    const double mean = 0.5 * (sxx + syy);
    const double radius = std::hypot(0.5 * (sxx - syy), sxy);
    const double l1 = std::max(0.0, mean + radius);
    const double l2 = std::max(0.0, mean - radius);

    PlanarEllipse e;
    e.major_m = 2.0 * std::sqrt(l1);
    e.minor_m = 2.0 * std::sqrt(l2);
    if (radius > 0.0) {
        // Major eigenvector angle from the east axis, counter-clockwise.
        const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
        double az = 90.0 - rad_to_deg(theta);
        az = std::fmod(az, 180.0);
        if (az < 0.0) {
            az += 180.0;
        }
        e.azimuth_deg = az >= 180.0 ? 0.0 : az;
    }
    return e;
}

EllipseParams fit_activity_ellipse(std::span<const WeightedPoint> points, const std::string& region,
                                   const std::string& period)
{
    const bool any = std::any_of(points.begin(), points.end(), [](const WeightedPoint& p) { return p.weight > 0.0; });
    if (!any) {
        fail(Errc::empty_points, "no weighted points for region '" + region + "'");
    }
    const LocalProjection proj(time_weighted_centroid(points));
    std::vector<PlanarPoint> xy;
    std::vector<double> w;
    xy.reserve(points.size());
    w.reserve(points.size());
    for (const auto& p : points) {
        xy.push_back(proj.project(p.point));
        w.push_back(p.weight);
    }
    const PlanarEllipse e = fit_planar_ellipse(xy, w);
    EllipseParams out;
    out.region = region;
    out.period = period;
    out.major_m = e.major_m;
    out.minor_m = e.minor_m;
    out.area_m2 = kPi * (e.major_m / 2.0) * (e.minor_m / 2.0);
    out.azimuth_deg = e.azimuth_deg;
    out.shape_index = e.major_m > 0.0 ? e.minor_m / e.major_m : 1.0;
    return out;
}

std::vector<WeightedPoint> ellipse_points(const ODMatrix& od, std::span<const GeoPoint> centroids,
                                          std::size_t region, EllipsePoints mode)
{
    if (centroids.size() != od.size() || region >= od.size()) {
        fail(Errc::unknown_region, "centroids do not match the OD region universe");
    }
    std::vector<WeightedPoint> pts;
    for (std::size_t d = 0; d < od.size(); ++d) {
        double w = static_cast<double>(od.at(region, d));
        if (mode == EllipsePoints::all_visited && d != region) {
            w += static_cast<double>(od.at(d, region));
        }
        if (w > 0.0) {
            pts.push_back({centroids[d], w});
        }
    }
    return pts;
}

TravelStats travel_stats(const ODMatrix& od, std::span<const GeoPoint> centroids, const std::string& region)
{
    const std::size_t r = od.index_of(region);
    if (centroids.size() != od.size()) {
        fail(Errc::unknown_region, "centroids do not match the OD region universe");
    }
    TravelStats t;
    t.region = region;
    t.period = od.period;
    t.intra_trips = od.at(r, r);
    CompensatedSum dist;
    for (std::size_t n = 0; n < od.size(); ++n) {
        if (n == r) {
            continue;
        }
        const std::uint64_t trips = od.at(r, n) + od.at(n, r);
        if (trips > 0) {
            t.inter_trips += trips;
            dist.add(static_cast<double>(trips) * haversine_m(centroids[r], centroids[n]));
        }
    }
    t.total_distance_m = dist.value();
    const std::uint64_t all = t.intra_trips + t.inter_trips;
    t.mean_distance_m = all > 0 ? t.total_distance_m / static_cast<double>(all) : 0.0;
    return t;
}

std::vector<StateParams> state_level_params(std::span<const EllipseParams> ellipses,
                                            std::span<const TravelStats> travel,
                                            const std::map<std::string, std::string>& state_of)
{
    struct Acc {
        std::size_t n = 0;
        std::size_t nt = 0;
        CompensatedSum major, minor, area, azimuth, shape, intra, inter, total, mean;
    };
    std::map<std::pair<std::string, std::string>, Acc> acc;
    auto state_for = [&](const std::string& area) -> const std::string& {
        auto it = state_of.find(area);
        if (it == state_of.end()) {
            fail(Errc::unmapped_area, "political area '" + area + "' has no state");
        }
        return it->second;
    };
    for (const auto& e : ellipses) {
        auto& a = acc[{state_for(e.region), e.period}];
        ++a.n;
        a.major.add(e.major_m);
        a.minor.add(e.minor_m);
        a.area.add(e.area_m2);
        a.azimuth.add(e.azimuth_deg);
        a.shape.add(e.shape_index);
    }
    for (const auto& t : travel) {
        auto& a = acc[{state_for(t.region), t.period}];
        ++a.nt;
        a.intra.add(static_cast<double>(t.intra_trips));
        a.inter.add(static_cast<double>(t.inter_trips));
        a.total.add(t.total_distance_m);
        a.mean.add(t.mean_distance_m);
    }
    std::vector<StateParams> out;
    for (const auto& [key, a] : acc) {
        StateParams s;
        s.state = key.first;
        s.period = key.second;
        s.areas = std::max(a.n, a.nt);
        if (a.n > 0) {
            const double n = static_cast<double>(a.n);
            s.major_m = a.major.value() / n;
            s.minor_m = a.minor.value() / n;
            s.area_m2 = a.area.value() / n;
            s.azimuth_deg = a.azimuth.value() / n;
            s.shape_index = a.shape.value() / n;
        }
        if (a.nt > 0) {
            const double n = static_cast<double>(a.nt);
            s.intra_trips = a.intra.value() / n;
            s.inter_trips = a.inter.value() / n;
            s.total_distance_m = a.total.value() / n;
            s.mean_distance_m = a.mean.value() / n;
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace mobiflow
