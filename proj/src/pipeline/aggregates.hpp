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

#include "ingest/events.hpp"
#include "ingest/registry.hpp"
#include "mobility/rog.hpp"
#include "od/od.hpp"
#include "pipeline/config.hpp"
#include "stays/stays.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mobiflow {

/// Everything the analyses need from one day of cleaned events.
struct DayAggregates {
    Date day;
    IngestReport report;
    std::vector<QuarantineEntry> quarantine;
    std::map<Level, std::vector<Stay>> stays;
    std::vector<DeviceDayRog> rog;
    std::vector<NightLocation> nights;
    std::map<Level, ODMatrix> od;
    std::vector<std::pair<std::string, std::size_t>> poi_devices;
};

/// Per-device stays, ROG and night location, then per-level OD matrices and
/// POI counts. Deterministic for any thread count.
DayAggregates aggregate_day(DayEvents&& events, const PipelineConfig& config, const CellRegistry& registry,
                            const LocalCalendar& calendar);

/// Writes the artifacts of `agg` into `dir` and a manifest with the config
/// hash and artifact digests. `dir` must exist.
void write_day_aggregates(const std::filesystem::path& dir, const DayAggregates& agg, const PipelineConfig& config,
                          const CellRegistry& registry, const std::string& config_hash);

/// File names inside a day directory.
std::string stays_file_name(Level level);
std::string od_file_name(Level level);
inline constexpr const char* kRogFile = "rog.csv";
inline constexpr const char* kNightFile = "night.csv";
inline constexpr const char* kPoiFile = "poi_counts.csv";
inline constexpr const char* kIngestReportFile = "ingest_report.csv";
inline constexpr const char* kQuarantineFile = "quarantine.csv";
inline constexpr const char* kManifestFile = "manifest.json";

/// Throws MissingAggregates when the day directory or manifest is absent or
/// was produced under a different config hash.
void require_day_aggregates(const PipelineConfig& config, Date day, const std::string& config_hash);

} // namespace mobiflow
