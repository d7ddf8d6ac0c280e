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
#include "stays/stays.hpp"

#include <span>
#include <string_view>

namespace mobiflow {

/// Stay bounds for POI presence counting (10 minutes to 4 hours by default).
struct PoiStayBounds {
    double min_stay_s = 600.0;
    double max_stay_s = 4.0 * 3600.0;
};

/// Distinct devices with at least one POI-level stay at `poi` whose weight
/// lies in [min_stay_s, max_stay_s]. Throws UnknownPoi when the registry has
/// no such POI.
std::size_t count_poi_devices(std::span<const Stay> poi_stays, std::string_view poi, const CellRegistry& registry,
                              PoiStayBounds bounds = {});

/// Same, detecting POI-level stays from a cleaned day first.
std::size_t count_poi_devices(std::span<const SignallingEvent> events, std::string_view poi,
                              const CellRegistry& registry, PoiStayBounds bounds = {},
                              double gap_tolerance_s = kDefaultGapTolerance);

} // namespace mobiflow
