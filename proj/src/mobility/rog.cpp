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
#include "mobility/rog.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace mobiflow {

double radius_of_gyration(std::span<const WeightedPoint> localizations)
{
    const GeoPoint center = time_weighted_centroid(localizations);
    CompensatedSum num;
    CompensatedSum den;
    for (const auto& p : localizations) {
        if (p.weight == 0.0) {
            continue;
        }
        const double d = haversine_m(center, p.point);
        num.add(p.weight * d * d);
        den.add(p.weight);
    }
    return std::sqrt(num.value() / den.value());
}

std::vector<WeightedPoint> event_localizations(std::span<const SignallingEvent> device_events,
                                               const CellRegistry& registry, Timestamp day_end)
{
    std::vector<WeightedPoint> out;
    out.reserve(device_events.size());
    for (std::size_t i = 0; i < device_events.size(); ++i) {
        const Timestamp next = i + 1 < device_events.size() ? device_events[i + 1].ts : day_end;
        out.push_back({registry.location(device_events[i].cell), static_cast<double>(std::max<Timestamp>(0, next - device_events[i].ts))});
    }
    return out;
}

DeviceDayRog device_day_rog(std::span<const SignallingEvent> device_events, const CellRegistry& registry, Date day,
                            const LocalCalendar::HourGrid& hours, HourlyMode mode)
{
    if (device_events.empty()) {
        fail(Errc::empty_input, "device without events");
    }
    DeviceDayRog rec;
    rec.device = device_events.front().device;
    rec.day = day;
    const Timestamp day_end = hours.boundaries.back();
    const auto locs = event_localizations(device_events, registry, day_end);
    rec.rog_m = radius_of_gyration(locs);

    std::array<std::vector<WeightedPoint>, 24> per_hour;
    std::size_t interval = 0;
    const std::size_t intervals = hours.clock_hour.size();
    for (std::size_t i = 0; i < device_events.size(); ++i) {
        const Timestamp ts = device_events[i].ts;
        while (interval + 1 < intervals && ts >= hours.boundaries[interval + 1]) {
            ++interval;
        }
        const int h = hours.clock_hour[interval];
        if (mode == HourlyMode::full_day) {
            rec.hourly_rog_m[h] = rec.rog_m;
            continue;
        }
        const Timestamp next = i + 1 < device_events.size() ? device_events[i + 1].ts : day_end;
        const Timestamp clip = std::min(next, hours.boundaries[interval + 1]);
        per_hour[h].push_back({registry.location(device_events[i].cell), static_cast<double>(std::max<Timestamp>(0, clip - ts))});
    }
    if (mode == HourlyMode::hour_restricted) {
        for (int h = 0; h < 24; ++h) {
            const auto& pts = per_hour[h];
            const bool has_weight =
                std::any_of(pts.begin(), pts.end(), [](const WeightedPoint& p) { return p.weight > 0.0; });
            if (has_weight) {
                rec.hourly_rog_m[h] = radius_of_gyration(pts);
            }
        }
    }
    return rec;
}

RogBucketCounts bucket_rog(std::span<const double> rogs_m, Date day, BucketBounds bounds)
{
    if (!(bounds.small_upper > 0.0 && bounds.medium_upper > bounds.small_upper)) {
        fail(Errc::usage, "bucket bounds must satisfy 0 < small < medium");
    }
    RogBucketCounts counts{day};
    for (double r : rogs_m) {
        if (r < bounds.small_upper) {
            ++counts.small;
        }
        else if (r < bounds.medium_upper) {
            ++counts.medium;
        }
        else {
            ++counts.large;
        }
    }
    return counts;
}

HourlyValues hourly_rog_series(std::span<const DeviceDayRog> records, double floor_m)
{
    HourlyValues out;
    std::array<std::vector<double>, 24> values;
    for (const auto& r : records) {
        for (int h = 0; h < 24; ++h) {
            if (r.hourly_rog_m[h]) {
                values[h].push_back(*r.hourly_rog_m[h]);
            }
        }
    }
    for (int h = 0; h < 24; ++h) {
        if (!values[h].empty()) {
            out[h] = geometric_mean(values[h], floor_m);
        }
    }
    return out;
}

std::string_view change_flag_name(ChangeFlag flag) noexcept
{
    switch (flag) {
    case ChangeFlag::ok: return "ok";
    case ChangeFlag::suppressed: return "suppressed";
    case ChangeFlag::zero_baseline: return "zero_baseline";
    }
    return "ok";
}

std::vector<RegionalChange> regional_relative_change(std::span<const DeviceDayRog> week_a,
                                                     std::span<const DeviceDayRog> week_b, std::size_t min_devices)
{
    struct Acc {
        CompensatedSum sum_a;
        CompensatedSum sum_b;
        std::size_t n_a = 0;
        std::size_t n_b = 0;
    };
    std::map<std::string, Acc> by_postcode;
    std::size_t seen_a = 0;
    std::size_t seen_b = 0;
    for (const auto& r : week_a) {
        if (r.night_postcode) {
            auto& acc = by_postcode[*r.night_postcode];
            acc.sum_a.add(r.rog_m);
            ++acc.n_a;
            ++seen_a;
        }
    }
    for (const auto& r : week_b) {
        if (r.night_postcode) {
            auto& acc = by_postcode[*r.night_postcode];
            acc.sum_b.add(r.rog_m);
            ++acc.n_b;
            ++seen_b;
        }
    }
    if (seen_a == 0 || seen_b == 0) {
        fail(Errc::empty_week, "relative change needs located devices in both weeks");
    }
    std::vector<RegionalChange> out;
    for (const auto& [postcode, acc] : by_postcode) {
        RegionalChange c{postcode, 0.0, ChangeFlag::ok, acc.n_a, acc.n_b};
        if (acc.n_a < min_devices || acc.n_b < min_devices) {
            c.flag = ChangeFlag::suppressed;
        }
        else {
            const double mean_a = acc.sum_a.value() / static_cast<double>(acc.n_a);
            const double mean_b = acc.sum_b.value() / static_cast<double>(acc.n_b);
            if (mean_a == 0.0) {
                c.flag = ChangeFlag::zero_baseline;
            }
            else {
                c.rel_change = (mean_b - mean_a) / mean_a;
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

void write_rog_csv(const std::filesystem::path& path, std::span<const DeviceDayRog> records)
{
    AtomicFile file(path);
    auto& out = file.stream();
    out << "pseudonym,day,rog_m,night_postcode";
    for (int h = 0; h < 24; ++h) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), ",h%02d", h);
        out << buf;
    }
    out << '\n';
    for (const auto& r : records) {
        out << r.device.to_hex() << ',' << format_date(r.day) << ',' << format_fixed(r.rog_m, 3) << ','
            << r.night_postcode.value_or("");
        for (int h = 0; h < 24; ++h) {
            out << ',';
            if (r.hourly_rog_m[h]) {
                out << format_fixed(*r.hourly_rog_m[h], 3);
            }
        }
        out << '\n';
    }
    file.commit();
}

std::vector<DeviceDayRog> read_rog_csv(const std::filesystem::path& path)
{
    std::vector<DeviceDayRog> records;
    read_csv(path, [&](const std::vector<std::string_view>& f, std::size_t line) {
        const std::string where = path.string() + ":" + std::to_string(line);
        if (f.size() != 28) {
            fail(Errc::malformed_line, where + ": expected 28 fields");
        }
        DeviceDayRog r;
        auto device = Pseudonym::from_hex(f[0]);
        auto day = try_parse_date(f[1]);
        if (!device || !day) {
            fail(Errc::malformed_line, where + ": invalid pseudonym or day");
        }
        r.device = *device;
        r.day = *day;
        r.rog_m = parse_double(f[2], "rog_m");
        if (!f[3].empty()) {
            r.night_postcode = std::string(f[3]);
        }
        for (int h = 0; h < 24; ++h) {
            if (!f[4 + h].empty()) {
                r.hourly_rog_m[h] = parse_double(f[4 + h], "hourly rog");
            }
        }
        records.push_back(std::move(r));
    });
    return records;
}

} // namespace mobiflow
