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
#include "core/geo.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <string>

namespace mobiflow {

GeoPoint::GeoPoint(double longitude, double latitude)
    : lon_(longitude)
    , lat_(latitude)
{
    if (!std::isfinite(longitude) || !std::isfinite(latitude) || longitude < -180.0 || longitude > 180.0 ||
        latitude < -90.0 || latitude > 90.0) {
        fail(Errc::invalid_argument,
             "coordinate out of range (" + std::to_string(longitude) + ", " + std::to_string(latitude) + ")");
    }
}

namespace {

void check_weight(double w)
{
    if (!std::isfinite(w) || w < 0.0) {
        fail(Errc::invalid_argument, "weights must be finite and non-negative");
    }
}

} // namespace

double weighted_mean(std::span<const WeightedSample> samples)
{
    CompensatedSum num;
    CompensatedSum den;
    for (const auto& s : samples) {
        check_weight(s.weight);
        num.add(s.weight * s.value);
        den.add(s.weight);
    }
    const double total = den.value();
    if (!(total > 0.0)) {
        fail(Errc::zero_total_weight, "weighted mean over zero total weight");
    }
    return num.value() / total;
}

double weighted_mean(std::span<const double> values, std::span<const double> weights)
{
    if (values.size() != weights.size()) {
        fail(Errc::invalid_argument, "values and weights differ in length");
    }
    CompensatedSum num;
    CompensatedSum den;
    for (std::size_t i = 0; i < values.size(); ++i) {
        check_weight(weights[i]);
        num.add(weights[i] * values[i]);
        den.add(weights[i]);
    }
    const double total = den.value();
    if (!(total > 0.0)) {
        fail(Errc::zero_total_weight, "weighted mean over zero total weight");
    }
    return num.value() / total;
}

GeoPoint time_weighted_centroid(std::span<const WeightedPoint> points)
{
    // Coincident positive-weight points return that point bit-exactly.
    const WeightedPoint* first = nullptr;
    bool coincident = true;
    for (const auto& p : points) {
        check_weight(p.weight);
        if (p.weight > 0.0) {
            if (first == nullptr) {
                first = &p;
            }
            else if (!(p.point == first->point)) {
                coincident = false;
                break;
            }
        }
    }
    if (first != nullptr && coincident) {
        return first->point;
    }

    CompensatedSum lon;
    CompensatedSum lat;
    CompensatedSum den;
    for (const auto& p : points) {
        check_weight(p.weight);
        lon.add(p.weight * p.point.longitude());
        lat.add(p.weight * p.point.latitude());
        den.add(p.weight);
    }
    const double total = den.value();
    if (!(total > 0.0)) {
        fail(Errc::zero_total_weight, "centroid over zero total weight");
    }
    // Rounding can push a mean of identical extreme coordinates past the bound.
    return GeoPoint(std::clamp(lon.value() / total, -180.0, 180.0), std::clamp(lat.value() / total, -90.0, 90.0));
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) noexcept
{
    const double lat1 = deg_to_rad(a.latitude());
    const double lat2 = deg_to_rad(b.latitude());
    const double dlat = lat1 - lat2;
    const double dlon = deg_to_rad(a.longitude() - b.longitude());
    const double s_lat = std::sin(dlat / 2.0);
    const double s_lon = std::sin(dlon / 2.0);
    const double h = std::clamp(s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * s_lon * s_lon, 0.0, 1.0);
    return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

double initial_bearing_deg(const GeoPoint& a, const GeoPoint& b) noexcept
{
    const double lat1 = deg_to_rad(a.latitude());
    const double lat2 = deg_to_rad(b.latitude());
    const double dlon = deg_to_rad(b.longitude() - a.longitude());
    const double y = std::sin(dlon) * std::cos(lat2);
    const double x = std::cos(lat1) * std::sin(lat2) - std::sin(lat1) * std::cos(lat2) * std::cos(dlon);
    double deg = rad_to_deg(std::atan2(y, x));
    if (deg < 0.0) {
        deg += 360.0;
    }
    return deg >= 360.0 ? 0.0 : deg;
}

GeoPoint destination_point(const GeoPoint& origin, double bearing_deg, double distance_m)
{
    const double delta = distance_m / kEarthRadiusM;
    const double theta = deg_to_rad(bearing_deg);
    const double lat1 = deg_to_rad(origin.latitude());
    const double lon1 = deg_to_rad(origin.longitude());
    const double lat2 =
        std::asin(std::sin(lat1) * std::cos(delta) + std::cos(lat1) * std::sin(delta) * std::cos(theta));
    const double lon2 = lon1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(lat1),
                                          std::cos(delta) - std::sin(lat1) * std::sin(lat2));
    double lon_deg = std::fmod(rad_to_deg(lon2) + 540.0, 360.0) - 180.0;
    return GeoPoint(lon_deg, std::clamp(rad_to_deg(lat2), -90.0, 90.0));
}

double geometric_mean(std::span<const double> values, double floor)
{
    if (values.empty()) {
        fail(Errc::empty_input, "geometric mean of an empty collection");
    }
    CompensatedSum logs;
    for (double v : values) {
        logs.add(std::log(v > floor ? v : floor));
    }
    return std::exp(logs.value() / static_cast<double>(values.size()));
}

} // namespace mobiflow
