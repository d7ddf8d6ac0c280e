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

#include <absl/time/civil_time.h>
#include <absl/time/time.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mobiflow {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

using Date = absl::CivilDay;

Date parse_date(std::string_view text);
std::optional<Date> try_parse_date(std::string_view text);
std::string format_date(Date day);

/// Parses RFC 3339 / ISO-8601 timestamps with an explicit offset or `Z`.
std::optional<Timestamp> parse_iso8601(std::string_view text);
std::string format_iso8601_utc(Timestamp ts);

/// Half-open UTC interval [start, end).
struct TimeWindow {
    Timestamp start;
    Timestamp end;

    bool contains(Timestamp t) const noexcept { return t >= start && t < end; }
    Timestamp length() const noexcept { return end - start; }
};

/// Maps civil days and clock hours of one time zone to UTC instants. Days are
/// civil days, so DST transitions yield 23 or 25 hour windows.
class LocalCalendar {
public:
    explicit LocalCalendar(const std::string& zone_name = "Europe/Vienna");

    const std::string& zone_name() const noexcept { return name_; }

    TimeWindow day_window(Date day) const;

    /// UTC instant of `seconds` after local midnight of `day`, counted on the
    /// local wall clock.
    Timestamp local_instant(Date day, std::int64_t seconds) const;

    /// Start of each local clock hour of `day` (23 to 25 entries) followed by
    /// the day end. Interval i is the local clock hour `clock_hour[i]`.
    struct HourGrid {
        std::vector<Timestamp> boundaries;
        std::vector<int> clock_hour;
    };
    HourGrid hour_grid(Date day) const;

    Date local_date(Timestamp ts) const;
    bool is_weekend(Date day) const;

private:
    std::string name_;
    absl::TimeZone zone_;
};

std::vector<Date> date_range(Date first, Date last);

} // namespace mobiflow
