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

#include "pipeline/aggregates.hpp"
#include "pipeline/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mobiflow {

/// Loads the configured cell registry; MissingInput when it is absent.
CellRegistry load_registry(const PipelineConfig& config);

/// Ingests `<events_dir>/<day>.jsonl` and writes `<out>/<day>/` atomically:
/// the directory is assembled under a temporary name and renamed into place,
/// so a failure leaves no partial output. Re-running overwrites identically.
/// Returns the day directory.
std::filesystem::path run_day(const PipelineConfig& config, Date day);

/// run_day over [first, last], days in parallel. The first failure is
/// rethrown after all days finished.
void run_days(const PipelineConfig& config, Date first, Date last);

/// Cleans one events file into `<out_dir>/events.csv`, `ingest_report.csv`
/// and `quarantine.csv`.
IngestReport ingest_file(const PipelineConfig& config, const std::filesystem::path& events, Date day,
                         const std::filesystem::path& out_dir);

} // namespace mobiflow
