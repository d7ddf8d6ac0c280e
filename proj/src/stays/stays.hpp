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
#include "ingest/events.hpp"
#include "ingest/registry.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace mobiflow {

/// Time-weighted presence of one device in one region of one level.
struct Stay {
    Pseudonym device;
    Level level;
    RegionId region;
    Timestamp enter;
    Timestamp exit;

    double weight_s() const noexcept { return static_cast<double>(exit - enter); }
};

inline constexpr double kDefaultGapTolerance = 60.0;

/// Groups one device's time-ordered events into maximal same-region runs at
/// `level`. A single run sandwiched between two runs of one region is
/// absorbed into them when the device left it again within `gap_tolerance_s`
/// (measured from the excursion's first event to the next run's first
/// event). Events outside a sparse level break runs but never form stays.
/// Throws UnsortedInput when timestamps decrease.
std::vector<Stay> detect_stays(std::span<const SignallingEvent> device_events, const CellRegistry& registry,
                               Level level, double gap_tolerance_s = kDefaultGapTolerance);

/// detect_stays over every device of a (device, ts)-sorted event vector;
/// stays stay grouped by device in the input order.
std::vector<Stay> detect_all_stays(std::span<const SignallingEvent> events, const CellRegistry& registry, Level level,
                                   double gap_tolerance_s = kDefaultGapTolerance);

struct NightLocation {
    Pseudonym device;
    RegionId postcode;
    double supporting_weight_s;
};

/// Night window in local clock time; the default is 20:00 to midnight.
struct NightWindow {
    int start_minute = 20 * 60;
    int end_minute = 24 * 60;

    TimeWindow on(Date day, const LocalCalendar& calendar) const;
};

/// The postcode holding the largest stay weight inside `window`; ties go to
/// the lexicographically smaller postcode. `stays` are one device-day at
/// postcode level. Empty when no stay overlaps the window.
std::optional<NightLocation> night_location(std::span<const Stay> stays, TimeWindow window,
                                            const CellRegistry& registry);

/// CSV `pseudonym,level,region,enter_ts,exit_ts,weight_s`.
void write_stays_csv(const std::filesystem::path& path, std::span<const Stay> stays, const CellRegistry& registry);
std::vector<Stay> read_stays_csv(const std::filesystem::path& path, const CellRegistry& registry);

} // namespace mobiflow
