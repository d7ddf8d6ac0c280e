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
#include "core/calendar.hpp"

#include "core/error.hpp"

#include <absl/strings/string_view.h>

namespace mobiflow {

std::optional<Date> try_parse_date(std::string_view text)
{
    Date day;
    if (!absl::ParseCivilTime(absl::string_view(text.data(), text.size()), &day)) {
        return std::nullopt;
    }
    return day;
}

Date parse_date(std::string_view text)
{
    auto day = try_parse_date(text);
    if (!day) {
        fail(Errc::usage, "invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    return *day;
}

std::string format_date(Date day)
{
    return absl::FormatCivilTime(day);
}

std::optional<Timestamp> parse_iso8601(std::string_view text)
{
    absl::Time t;
    std::string err;
    if (!absl::ParseTime(absl::RFC3339_full, absl::string_view(text.data(), text.size()), &t, &err)) {
        return std::nullopt;
    }
    return absl::ToUnixSeconds(t);
}

std::string format_iso8601_utc(Timestamp ts)
{
    return absl::FormatTime("%Y-%m-%dT%H:%M:%SZ", absl::FromUnixSeconds(ts), absl::UTCTimeZone());
}

LocalCalendar::LocalCalendar(const std::string& zone_name)
    : name_(zone_name)
{
    if (!absl::LoadTimeZone(zone_name, &zone_)) {
        fail(Errc::usage, "unknown time zone '" + zone_name + "'");
    }
}

TimeWindow LocalCalendar::day_window(Date day) const
{
    return {absl::ToUnixSeconds(absl::FromCivil(day, zone_)), absl::ToUnixSeconds(absl::FromCivil(day + 1, zone_))};
}

Timestamp LocalCalendar::local_instant(Date day, std::int64_t seconds) const
{
    const absl::CivilSecond civil = absl::CivilSecond(day) + seconds;
    return absl::ToUnixSeconds(absl::FromCivil(civil, zone_));
}

LocalCalendar::HourGrid LocalCalendar::hour_grid(Date day) const
{
    HourGrid grid;
    const TimeWindow w = day_window(day);
    Timestamp t = w.start;
    while (t < w.end) {
        const auto civil = absl::ToCivilHour(absl::FromUnixSeconds(t), zone_);
        grid.boundaries.push_back(t);
        grid.clock_hour.push_back(civil.hour());
        Timestamp next = absl::ToUnixSeconds(absl::FromCivil(civil + 1, zone_));
        if (next <= t) {
            next = t + 3600;
        }
        t = next;
    }
    grid.boundaries.push_back(w.end);
    return grid;
}

Date LocalCalendar::local_date(Timestamp ts) const
{
    return absl::ToCivilDay(absl::FromUnixSeconds(ts), zone_);
}

bool LocalCalendar::is_weekend(Date day) const
{
    const auto wd = absl::GetWeekday(day);
    return wd == absl::Weekday::saturday || wd == absl::Weekday::sunday;
}

std::vector<Date> date_range(Date first, Date last)
{
    std::vector<Date> out;
    for (Date d = first; d <= last; ++d) {
        out.push_back(d);
    }
    return out;
}

} // namespace mobiflow
