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
#include "pipeline/aggregates.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"
#include "ingest/poi.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mobiflow {

namespace {

struct DeviceResult {
    std::map<Level, std::vector<Stay>> stays;
    DeviceDayRog rog;
    std::optional<NightLocation> night;
};

std::string file_sha256(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

} // namespace

std::string stays_file_name(Level level)
{
    return "stays_" + std::string(level_name(level)) + ".csv";
}

std::string od_file_name(Level level)
{
    return "od_" + std::string(level_name(level)) + ".csv";
}

DayAggregates aggregate_day(DayEvents&& events, const PipelineConfig& config, const CellRegistry& registry,
                            const LocalCalendar& calendar)
{
    DayAggregates agg;
    agg.day = events.day;
    agg.report = events.report;
    agg.quarantine = std::move(events.quarantine);

    const auto levels = config.stay_levels();
    const auto hours = calendar.hour_grid(events.day);
    const TimeWindow night = config.night.on(events.day, calendar);
    const auto runs = device_runs(events.events);

    std::vector<DeviceResult> results(runs.size());
    parallel_chunks(runs.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto& r = results[i];
            for (Level l : levels) {
                r.stays[l] = detect_stays(runs[i], registry, l, config.gap_tolerance);
            }
            r.rog = device_day_rog(runs[i], registry, events.day, hours, config.hourly_mode);
            r.night = night_location(r.stays[Level::postcode], night, registry);
            if (r.night) {
                r.rog.night_postcode = registry.region_name(Level::postcode, r.night->postcode);
            }
        }
    });

    for (auto& r : results) {
        for (auto& [level, stays] : r.stays) {
            auto& dst = agg.stays[level];
            dst.insert(dst.end(), stays.begin(), stays.end());
        }
        agg.rog.push_back(std::move(r.rog));
        if (r.night) {
            agg.nights.push_back(*r.night);
        }
    }
    results.clear();

    const std::string period = format_date(events.day);
    for (Level l : config.od_levels) {
        agg.od.emplace(l, build_od(agg.stays[l], registry, l, period, config.sk));
    }
    if (agg.stays.count(Level::poi)) {
        for (const auto& poi : registry.regions(Level::poi)) {
            agg.poi_devices.emplace_back(poi, count_poi_devices(agg.stays[Level::poi], poi, registry, config.poi_bounds));
        }
    }
    // Stays kept only for levels that are written out.
    for (auto it = agg.stays.begin(); it != agg.stays.end();) {
        if (std::find(config.levels.begin(), config.levels.end(), it->first) == config.levels.end()) {
            it = agg.stays.erase(it);
        }
        else {
            ++it;
        }
    }
    return agg;
}

void write_day_aggregates(const std::filesystem::path& dir, const DayAggregates& agg, const PipelineConfig& config,
                          const CellRegistry& registry, const std::string& config_hash)
{
    std::vector<std::string> artifacts;
    for (const auto& [level, stays] : agg.stays) {
        write_stays_csv(dir / stays_file_name(level), stays, registry);
        artifacts.push_back(stays_file_name(level));
    }
    write_rog_csv(dir / kRogFile, agg.rog);
    artifacts.emplace_back(kRogFile);
    {
        AtomicFile f(dir / kNightFile);
        f.stream() << "pseudonym,postcode,weight_s\n";
        for (const auto& n : agg.nights) {
            f.stream() << n.device.to_hex() << ',' << registry.region_name(Level::postcode, n.postcode) << ','
                       << format_fixed(n.supporting_weight_s, 0) << '\n';
        }
        f.commit();
        artifacts.emplace_back(kNightFile);
    }
    for (const auto& [level, od] : agg.od) {
        write_od_csv(dir / od_file_name(level), od);
        artifacts.push_back(od_file_name(level));
    }
    {
        AtomicFile f(dir / kPoiFile);
        f.stream() << "poi,devices\n";
        for (const auto& [poi, n] : agg.poi_devices) {
            f.stream() << poi << ',' << n << '\n';
        }
        f.commit();
        artifacts.emplace_back(kPoiFile);
    }
    write_ingest_report_csv(dir / kIngestReportFile, agg.day, agg.report);
    artifacts.emplace_back(kIngestReportFile);
    write_quarantine_csv(dir / kQuarantineFile, agg.quarantine);
    artifacts.emplace_back(kQuarantineFile);

    nlohmann::ordered_json manifest;
    manifest["day"] = format_date(agg.day);
    manifest["config_hash"] = config_hash;
    manifest["timezone"] = config.timezone;
    manifest["geometric_mean_floor_m"] = kGeometricMeanFloor;
    nlohmann::ordered_json files = nlohmann::ordered_json::object();
    std::sort(artifacts.begin(), artifacts.end());
    for (const auto& name : artifacts) {
        files[name] = file_sha256(dir / name);
    }
    manifest["artifacts"] = files;
    manifest["ingest"] = {{"read", agg.report.read},
                          {"kept", agg.report.kept},
                          {"filtered_by_policy", agg.report.filtered_by_policy},
                          {"quarantined_unknown_cell", agg.report.quarantined_unknown_cell},
                          {"quarantined_malformed", agg.report.quarantined_malformed},
                          {"quarantined_out_of_day", agg.report.quarantined_out_of_day}};
    AtomicFile f(dir / kManifestFile);
    f.stream() << manifest.dump(2) << '\n';
    f.commit();
}

void require_day_aggregates(const PipelineConfig& config, Date day, const std::string& config_hash)
{
    const auto path = config.day_dir(day) / kManifestFile;
    std::ifstream in(path);
    if (!in) {
        fail(Errc::missing_aggregates, "no daily aggregates for " + format_date(day) + " under " + config.out.string());
    }
    const auto manifest = nlohmann::json::parse(in, nullptr, false);
    if (manifest.is_discarded() || !manifest.contains("config_hash") || manifest["config_hash"] != config_hash) {
        fail(Errc::missing_aggregates,
             "aggregates for " + format_date(day) + " are stale (built under a different configuration)");
    }
}

} // namespace mobiflow
