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

#include "pipeline/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mobiflow {

/// Report kinds accepted by run_report; "all" expands to every kind whose
/// inputs are configured.
const std::vector<std::string>& report_kinds();

struct ReportRequest {
    std::string kind;
    Date first;
    Date last;
    /// Restricts period-based reports (ellipse, communities) to one phase.
    std::string period;
};

/// Emits `<out>/reports/<kind>_<first>_<last>.csv` (plus companion tables)
/// from the daily aggregates only. Throws Usage for an unknown kind and
/// MissingAggregates when a required day is absent or stale.
std::vector<std::filesystem::path> run_report(const PipelineConfig& config, const ReportRequest& request);

} // namespace mobiflow
