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
#include "core/kv_file.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mobiflow {

/// A mobility regime over an inclusive date range. `rate` in (0, 1] is the
/// survival probability of each restricted tour, `length` scales how far
/// trips go and, below 1, keeps out-of-block commutes closer to home.
struct Phase {
    std::string name;
    Date first;
    Date last;
    double rate = 1.0;
    double length = 1.0;
};

struct OutbreakSpec {
    std::string seed_municipality; // empty: no outbreak
    Date first_case;
    int lag_days = 8;
    Date visit_first;
    Date visit_last;
    double visitors_per_day = 15.0;
    double onset_per_1000 = 2.0;   // expected new cases per 1000 inhabitants on onset day
    double growth = 1.25;          // daily multiplier of the expected new cases
    double background_per_100k = 0.5;
    bool enabled() const noexcept { return !seed_municipality.empty(); }
};

/// Extra input lines that exercise the ingest filters.
struct NoiseSpec {
    double iot_share = 0.0;
    double roamer_share = 0.0;
    double virtual_share = 0.0;
    double malformed_rate = 0.0;
    double unknown_cell_rate = 0.0;
    double out_of_day_rate = 0.0;
};

struct Scenario {
    std::uint64_t seed = 1;
    std::string timezone = "Europe/Vienna";
    Date first_day{2020, 3, 1};
    Date last_day{2020, 3, 7};
    std::vector<Phase> phases;
    std::size_t agents = 1000;

    // Geography: a grid of blocks, each split into areas, municipalities and cells.
    std::size_t blocks_x = 5;
    std::size_t blocks_y = 4;
    std::size_t areas_per_block = 3;
    std::size_t municipalities_per_area = 3;
    std::size_t cells_per_municipality = 2;
    std::size_t blocks_per_state = 4;
    double block_spacing_km = 40.0;
    double origin_lon = 10.0;
    double origin_lat = 46.6;
    std::string poi_name = "AIRPORT"; // placed on the first cell; empty for none

    // Behaviour.
    double commute_prob = 0.7;
    double work_in_block = 0.8;
    double leave_block_prob = 0.15;
    double excursion_rate = 1.0;
    double errand_rate = 1.0;
    double night_out_prob = 0.15;
    double near_km = 8.0;
    double far_km = 40.0;

    // Emission.
    std::int64_t heartbeat_s = 240;
    double truth_sk = 600.0;

    OutbreakSpec outbreak;
    NoiseSpec noise;

    /// Throws InvalidScenario.
    void validate() const;
    const Phase& phase_on(Date day) const;
    std::vector<Date> days() const;
    std::size_t municipality_count() const { return blocks_x * blocks_y * areas_per_block * municipalities_per_area; }

    /// Reads the key-value schema documented in the README. Unknown keys and
    /// out-of-range values throw InvalidScenario.
    static Scenario from_config(const KeyValueFile& kv);
    static Scenario load(const std::filesystem::path& path);
    std::string to_config() const;
};

} // namespace mobiflow
