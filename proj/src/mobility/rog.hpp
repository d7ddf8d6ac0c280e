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

#include "core/calendar.hpp"
#include "core/geo.hpp"
#include "ingest/events.hpp"
#include "ingest/registry.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mobiflow {

/// Time-weighted RMS haversine distance of the points from their
/// time-weighted centroid, in meters. Throws ZeroTotalWeight.
double radius_of_gyration(std::span<const WeightedPoint> localizations);

/// Cell locations of one device's events, each weighted by the time until the
/// next event; the last event is weighted up to `day_end`.
std::vector<WeightedPoint> event_localizations(std::span<const SignallingEvent> device_events,
                                               const CellRegistry& registry, Timestamp day_end);

enum class HourlyMode {
    /// ROG of the localizations inside each clock hour, weights clipped to it.
    hour_restricted,
    /// The device's full-day ROG, reported for every hour it was observed in.
    full_day,
};

using HourlyValues = std::array<std::optional<double>, 24>;

struct DeviceDayRog {
    Pseudonym device;
    Date day;
    double rog_m = 0.0;
    std::optional<std::string> night_postcode;
    HourlyValues hourly_rog_m;
};

DeviceDayRog device_day_rog(std::span<const SignallingEvent> device_events, const CellRegistry& registry, Date day,
                            const LocalCalendar::HourGrid& hours, HourlyMode mode = HourlyMode::hour_restricted);

/// Half-open bucket bounds: [0, small_upper), [small_upper, medium_upper),
/// [medium_upper, inf).
struct BucketBounds {
    double small_upper = 500.0;
    double medium_upper = 5000.0;
};

struct RogBucketCounts {
    Date day;
    std::uint64_t small = 0;
    std::uint64_t medium = 0;
    std::uint64_t large = 0;

    std::uint64_t total() const noexcept { return small + medium + large; }
};

RogBucketCounts bucket_rog(std::span<const double> rogs_m, Date day, BucketBounds bounds = {});

/// Per clock hour, the geometric mean over devices of their hour ROG (floored
/// at one meter). Hours without any device stay empty.
HourlyValues hourly_rog_series(std::span<const DeviceDayRog> records, double floor_m = kGeometricMeanFloor);

enum class ChangeFlag { ok, suppressed, zero_baseline };
std::string_view change_flag_name(ChangeFlag flag) noexcept;

struct RegionalChange {
    std::string postcode;
    double rel_change = 0.0;
    ChangeFlag flag = ChangeFlag::ok;
    std::size_t devices_a = 0;
    std::size_t devices_b = 0;
};

inline constexpr std::size_t kDefaultMinDevices = 30;

/// (mean_b - mean_a) / mean_a of the arithmetic mean ROG per night postcode.
/// Postcodes with fewer than `min_devices` device-days in either week are
/// suppressed. Throws EmptyWeek when a week has no record with a postcode.
std::vector<RegionalChange> regional_relative_change(std::span<const DeviceDayRog> week_a,
                                                     std::span<const DeviceDayRog> week_b,
                                                     std::size_t min_devices = kDefaultMinDevices);

/// CSV `pseudonym,day,rog_m,night_postcode,h00..h23` (empty cells for absent values).
void write_rog_csv(const std::filesystem::path& path, std::span<const DeviceDayRog> records);
std::vector<DeviceDayRog> read_rog_csv(const std::filesystem::path& path);

} // namespace mobiflow
