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
#include "pipeline/pipeline.hpp"

#include "core/error.hpp"
#include "core/parallel.hpp"

#include <unistd.h>

namespace mobiflow {

namespace fs = std::filesystem;

CellRegistry load_registry(const PipelineConfig& config)
{
    if (config.cells.empty() || !fs::exists(config.cells)) {
        fail(Errc::missing_input, "cell registry not found: '" + config.cells.string() + "'");
    }
    return CellRegistry::load_csv(config.cells);
}

fs::path run_day(const PipelineConfig& config, Date day)
{
    const CellRegistry registry = load_registry(config);
    const fs::path events = config.events_file(day);
    if (config.events_dir.empty() || !fs::exists(events)) {
        fail(Errc::missing_input, "events file not found: '" + events.string() + "'");
    }
    const LocalCalendar calendar = config.calendar();
    const KeySchedule keys = config.key_schedule();
    const std::string hash = config.aggregate_hash();

    DayEvents cleaned = parse_events(events, day, registry, config.policy, keys, calendar);
    DayAggregates agg;
    try {
        agg = aggregate_day(std::move(cleaned), config, registry, calendar);
    }
    catch (const Error& e) {
        fail(e.code(), format_date(day) + ": " + e.what());
    }

    const fs::path final_dir = config.day_dir(day);
    const fs::path tmp_dir = config.out / ("." + format_date(day) + ".tmp." + std::to_string(::getpid()));
    std::error_code ec;
    fs::remove_all(tmp_dir, ec);
    fs::create_directories(tmp_dir, ec);
    if (ec) {
        fail(Errc::io, "cannot create " + tmp_dir.string() + ": " + ec.message());
    }
    try {
        write_day_aggregates(tmp_dir, agg, config, registry, hash);
        fs::remove_all(final_dir);
        fs::rename(tmp_dir, final_dir);
    }
    catch (...) {
        fs::remove_all(tmp_dir, ec);
        throw;
    }
    return final_dir;
}

void run_days(const PipelineConfig& config, Date first, Date last)
{
    const auto days = date_range(first, last);
    parallel_chunks(
        days.size(),
        [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                run_day(config, days[i]);
            }
        },
        1);
}

IngestReport ingest_file(const PipelineConfig& config, const fs::path& events, Date day, const fs::path& out_dir)
{
    const CellRegistry registry = load_registry(config);
    if (!fs::exists(events)) {
        fail(Errc::missing_input, "events file not found: '" + events.string() + "'");
    }
    DayEvents cleaned = parse_events(events, day, registry, config.policy, config.key_schedule(), config.calendar());
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        fail(Errc::io, "cannot create " + out_dir.string() + ": " + ec.message());
    }
    write_events_csv(out_dir / "events.csv", cleaned.events, registry);
    write_ingest_report_csv(out_dir / kIngestReportFile, day, cleaned.report);
    write_quarantine_csv(out_dir / kQuarantineFile, cleaned.quarantine);
    return cleaned.report;
}

} // namespace mobiflow
