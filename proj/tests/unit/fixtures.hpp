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
#include "ingest/pseudonym.hpp"
#include "ingest/registry.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mobiflow::test {

// Six cells in two states, three areas, four municipalities; cell C6 is an
// airport POI.
inline CellRegistry small_registry()
{
    std::vector<CellRecord> cells = {
        {"C1", GeoPoint(16.37, 48.21), "S1", "A1", "1010", "M1", ""},
        {"C2", GeoPoint(16.38, 48.22), "S1", "A1", "1010", "M1", ""},
        {"C3", GeoPoint(16.60, 48.30), "S1", "A2", "2000", "M2", ""},
        {"C4", GeoPoint(15.44, 47.07), "S2", "A3", "8010", "M3", ""},
        {"C5", GeoPoint(15.50, 47.10), "S2", "A3", "8020", "M4", ""},
        {"C6", GeoPoint(16.57, 48.11), "S1", "A2", "2000", "M2", "VIE"},
    };
    return CellRegistry(std::move(cells));
}

inline Pseudonym device(std::uint8_t n)
{
    Pseudonym p;
    p.bytes[0] = n;
    return p;
}

// Events of one device; cells are registry ids.
inline std::vector<SignallingEvent> track(const CellRegistry& reg, Pseudonym dev,
                                          const std::vector<std::pair<Timestamp, std::string>>& points)
{
    std::vector<SignallingEvent> out;
    for (const auto& [ts, cell] : points) {
        out.push_back({dev, ts, *reg.find(cell), EventKind::data});
    }
    return out;
}

inline std::filesystem::path temp_dir(const std::string& name)
{
    const auto p = std::filesystem::temp_directory_path() / ("mobiflow_unit_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace mobiflow::test
