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
#include "ingest/poi.hpp"

#include "core/error.hpp"

#include <set>

namespace mobiflow {

std::size_t count_poi_devices(std::span<const Stay> poi_stays, std::string_view poi, const CellRegistry& registry,
                              PoiStayBounds bounds)
{
    const auto id = registry.find_region(Level::poi, poi);
    if (!id) {
        fail(Errc::unknown_poi, "no POI named '" + std::string(poi) + "' in the registry");
    }
    std::set<Pseudonym> devices;
    for (const auto& s : poi_stays) {
        if (s.level == Level::poi && s.region == *id && s.weight_s() >= bounds.min_stay_s &&
            s.weight_s() <= bounds.max_stay_s) {
            devices.insert(s.device);
        }
    }
    return devices.size();
}

std::size_t count_poi_devices(std::span<const SignallingEvent> events, std::string_view poi,
                              const CellRegistry& registry, PoiStayBounds bounds, double gap_tolerance_s)
{
    const auto stays = detect_all_stays(events, registry, Level::poi, gap_tolerance_s);
    return count_poi_devices(stays, poi, registry, bounds);
}

} // namespace mobiflow
