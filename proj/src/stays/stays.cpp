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
#include "stays/stays.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <algorithm>
#include <map>

namespace mobiflow {

namespace {

struct Run {
    RegionId region;
    Timestamp first;
    Timestamp last;
};

} // namespace

std::vector<Stay> detect_stays(std::span<const SignallingEvent> device_events, const CellRegistry& registry,
                               Level level, double gap_tolerance_s)
{
    std::vector<Run> runs;
    for (std::size_t i = 0; i < device_events.size(); ++i) {
        const auto& e = device_events[i];
        if (i > 0 && (e.ts < device_events[i - 1].ts || e.device != device_events[i - 1].device)) {
            fail(Errc::unsorted_input, "events must be one device's, in non-decreasing time order");
        }
        const RegionId r = registry.region_of(e.cell, level);
        if (!runs.empty() && runs.back().region == r) {
            runs.back().last = e.ts;
            continue;
        }
        const std::size_t n = runs.size();
        if (n >= 2 && runs[n - 2].region == r && static_cast<double>(e.ts - runs[n - 1].first) < gap_tolerance_s) {
            runs.pop_back();
            runs.back().last = e.ts;
            continue;
        }
        runs.push_back(Run{r, e.ts, e.ts});
    }

    std::vector<Stay> stays;
    if (device_events.empty()) {
        return stays;
    }
    const Pseudonym device = device_events.front().device;
    for (const auto& run : runs) {
        if (run.region != kNoRegion) {
            stays.push_back(Stay{device, level, run.region, run.first, run.last});
        }
    }
    return stays;
}

std::vector<Stay> detect_all_stays(std::span<const SignallingEvent> events, const CellRegistry& registry, Level level,
                                   double gap_tolerance_s)
{
    std::vector<Stay> out;
    for (auto run : device_runs(events)) {
        auto s = detect_stays(run, registry, level, gap_tolerance_s);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

TimeWindow NightWindow::on(Date day, const LocalCalendar& calendar) const
{
    if (start_minute < 0 || end_minute > 24 * 60 || start_minute >= end_minute) {
        fail(Errc::usage, "night window must satisfy 0 <= start < end <= 24:00");
    }
    const TimeWindow d = calendar.day_window(day);
    const Timestamp start = calendar.local_instant(day, std::int64_t{start_minute} * 60);
    const Timestamp end = end_minute == 24 * 60 ? d.end : calendar.local_instant(day, std::int64_t{end_minute} * 60);
    return {start, end};
}

std::optional<NightLocation> night_location(std::span<const Stay> stays, TimeWindow window,
                                            const CellRegistry& registry)
{
    std::map<RegionId, Timestamp> weight;
    for (const auto& s : stays) {
        if (s.level != Level::postcode) {
            fail(Errc::invalid_argument, "night location needs postcode-level stays");
        }
        const Timestamp lo = std::max(s.enter, window.start);
        const Timestamp hi = std::min(s.exit, window.end);
        if (hi > lo) {
            weight[s.region] += hi - lo;
        }
    }
    std::optional<NightLocation> best;
    for (const auto& [region, w] : weight) {
        const double ws = static_cast<double>(w);
        if (!best || ws > best->supporting_weight_s ||
            (ws == best->supporting_weight_s &&
             registry.region_name(Level::postcode, region) < registry.region_name(Level::postcode, best->postcode))) {
            best = NightLocation{stays.front().device, region, ws};
        }
    }
    return best;
}

void write_stays_csv(const std::filesystem::path& path, std::span<const Stay> stays, const CellRegistry& registry)
{
    AtomicFile file(path);
    auto& out = file.stream();
    out << "pseudonym,level,region,enter_ts,exit_ts,weight_s\n";
    for (const auto& s : stays) {
        out << s.device.to_hex() << ',' << level_name(s.level) << ',' << registry.region_name(s.level, s.region) << ','
            << s.enter << ',' << s.exit << ',' << (s.exit - s.enter) << '\n';
    }
    file.commit();
}

std::vector<Stay> read_stays_csv(const std::filesystem::path& path, const CellRegistry& registry)
{
    std::vector<Stay> stays;
    read_csv(path, [&](const std::vector<std::string_view>& f, std::size_t line) {
        const std::string where = path.string() + ":" + std::to_string(line);
        if (f.size() != 6) {
            fail(Errc::malformed_line, where + ": expected 6 fields");
        }
        auto device = Pseudonym::from_hex(f[0]);
        auto level = parse_level(f[1]);
        if (!device || !level) {
            fail(Errc::malformed_line, where + ": invalid pseudonym or level");
        }
        auto region = registry.find_region(*level, f[2]);
        if (!region) {
            fail(Errc::unknown_region, where + ": region '" + std::string(f[2]) + "' not in registry");
        }
        stays.push_back(Stay{*device, *level, *region, parse_int(f[3], "enter_ts"), parse_int(f[4], "exit_ts")});
    });
    return stays;
}

} // namespace mobiflow
