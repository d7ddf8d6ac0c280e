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

#include <cmath>
#include <span>
#include <vector>

namespace mobiflow {

/// Mean Earth radius used by every distance computation. Fixed so that golden
/// outputs are bit-stable across runs.
inline constexpr double kEarthRadiusM = 6'371'000.0;

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// WGS84 longitude/latitude pair in degrees. Ranges are enforced on
/// construction, so every GeoPoint in flight is valid.
class GeoPoint {
public:
    GeoPoint(double longitude, double latitude);

    double longitude() const noexcept { return lon_; }
    double latitude() const noexcept { return lat_; }

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

private:
    double lon_;
    double lat_;
};

struct WeightedSample {
    double value;
    double weight;
};

struct WeightedPoint {
    GeoPoint point;
    double weight;
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        }
        else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// sum(w_i * x_i) / sum(w_i). Throws ZeroTotalWeight when the weights sum to
/// zero and InvalidArgument on negative or non-finite weights.
double weighted_mean(std::span<const WeightedSample> samples);
double weighted_mean(std::span<const double> values, std::span<const double> weights);

/// Coordinate-wise weighted average of raw longitudes and latitudes. No
/// projection is applied, so inputs straddling the antimeridian average to
/// the wrong hemisphere.
GeoPoint time_weighted_centroid(std::span<const WeightedPoint> points);

/// Great-circle distance in meters.
double haversine_m(const GeoPoint& a, const GeoPoint& b) noexcept;

/// Initial bearing from a to b, degrees clockwise from north in [0, 360).
double initial_bearing_deg(const GeoPoint& a, const GeoPoint& b) noexcept;

/// Point reached from `origin` after `distance_m` along `bearing_deg`.
GeoPoint destination_point(const GeoPoint& origin, double bearing_deg, double distance_m);

/// Value substituted for non-positive inputs of geometric_mean (one meter).
inline constexpr double kGeometricMeanFloor = 1.0;

/// exp(mean(log v)), with values <= floor clamped up to `floor`.
double geometric_mean(std::span<const double> values, double floor = kGeometricMeanFloor);

} // namespace mobiflow
