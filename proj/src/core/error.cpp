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
#include "core/error.hpp"

namespace mobiflow {

const char* errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::zero_total_weight: return "ZeroTotalWeight";
    case Errc::empty_input: return "EmptyInput";
    case Errc::missing_day_key: return "MissingDayKey";
    case Errc::malformed_line: return "MalformedLine";
    case Errc::missing_registry: return "MissingRegistry";
    case Errc::unknown_poi: return "UnknownPoi";
    case Errc::unsorted_input: return "UnsortedInput";
    case Errc::empty_week: return "EmptyWeek";
    case Errc::level_mismatch: return "LevelMismatch";
    case Errc::empty_points: return "EmptyPoints";
    case Errc::unknown_region: return "UnknownRegion";
    case Errc::unmapped_area: return "UnmappedArea";
    case Errc::unknown_node: return "UnknownNode";
    case Errc::no_triplets: return "NoTriplets";
    case Errc::partial_partition: return "PartialPartition";
    case Errc::empty_graph: return "EmptyGraph";
    case Errc::unknown_seed: return "UnknownSeed";
    case Errc::missing_population: return "MissingPopulation";
    case Errc::empty_sample: return "EmptySample";
    case Errc::no_dates: return "NoDates";
    case Errc::invalid_scenario: return "InvalidScenario";
    case Errc::missing_input: return "MissingInput";
    case Errc::missing_aggregates: return "MissingAggregates";
    case Errc::usage: return "Usage";
    case Errc::io: return "Io";
    }
    return "Unknown";
}

void fail(Errc code, const std::string& message)
{
    throw Error(code, std::string(errc_name(code)) + ": " + message);
}

} // namespace mobiflow
