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

#include "activityspace/ellipse.hpp"
#include "core/calendar.hpp"
#include "core/kv_file.hpp"
#include "ingest/events.hpp"
#include "ingest/poi.hpp"
#include "ingest/pseudonym.hpp"
#include "mobility/rog.hpp"
#include "stays/stays.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mobiflow {

struct Period {
    std::string name;
    Date first;
    Date last;
};

enum class RateMode { cumulative, daily_new };

/// Parsed pipeline configuration. Relative paths resolve against the
/// directory of the configuration file.
struct PipelineConfig {
    std::string timezone = "Europe/Vienna";
    std::filesystem::path cells;
    std::filesystem::path events_dir;
    std::filesystem::path out = "aggregates";
    std::string secret;
    std::filesystem::path day_keys;
    std::optional<Date> first_day;
    std::optional<Date> last_day;

    std::vector<Level> levels = {Level::federal_state, Level::political_area, Level::postcode, Level::municipality,
                                 Level::poi};
    std::vector<Level> od_levels = {Level::federal_state, Level::political_area, Level::postcode,
                                    Level::municipality};
    double sk = kDefaultImportantStay;
    double gap_tolerance = kDefaultGapTolerance;
    BucketBounds buckets;
    std::size_t min_devices = kDefaultMinDevices;
    NightWindow night;
    HourlyMode hourly_mode = HourlyMode::hour_restricted;
    DeviceFilterPolicy policy;
    PoiStayBounds poi_bounds;

    std::vector<Period> phases;
    std::optional<Period> week_a;
    std::optional<Period> week_b;

    Level ellipse_level = Level::political_area;
    EllipsePoints ellipse_mode = EllipsePoints::destinations;
    Level graph_level = Level::political_area;
    std::string freeze_partition; // phase name; empty re-detects daily

    std::filesystem::path infections;
    std::filesystem::path population;
    std::string epi_seed;
    std::optional<Period> epi_window;
    RateMode epi_mode = RateMode::cumulative;
    double alpha = 0.01;

    /// Throws Usage on unknown keys or out-of-range values.
    static PipelineConfig from_config(const KeyValueFile& kv);
    static std::vector<std::string> known_keys();

    LocalCalendar calendar() const { return LocalCalendar(timezone); }
    /// Throws MissingDayKey when neither a secret nor a key file is configured.
    KeySchedule key_schedule() const;
    /// Levels whose stays run_day must detect (stays, OD and night inputs).
    std::vector<Level> stay_levels() const;
    std::filesystem::path day_dir(Date day) const;
    std::filesystem::path reports_dir() const { return out / "reports"; }
    std::filesystem::path events_file(Date day) const;
    /// Digest of every setting and input that shapes the daily aggregates.
    std::string aggregate_hash() const;
    /// Phases, or the whole [first, last] range when no phase overlaps it.
    std::vector<Period> periods_within(Date first, Date last) const;
};

} // namespace mobiflow
