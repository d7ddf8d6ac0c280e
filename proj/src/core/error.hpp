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

#include <stdexcept>
#include <string>

namespace mobiflow {

/// Error categories raised by the analysis modules. The C API and the CLI map
/// these onto status and exit codes.
enum class Errc {
    invalid_argument,
    zero_total_weight,
    empty_input,
    missing_day_key,
    malformed_line,
    missing_registry,
    unknown_poi,
    unsorted_input,
    empty_week,
    level_mismatch,
    empty_points,
    unknown_region,
    unmapped_area,
    unknown_node,
    no_triplets,
    partial_partition,
    empty_graph,
    unknown_seed,
    missing_population,
    empty_sample,
    no_dates,
    invalid_scenario,
    missing_input,
    missing_aggregates,
    usage,
    io,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message)
        , code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

} // namespace mobiflow
