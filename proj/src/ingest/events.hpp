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
#include "ingest/pseudonym.hpp"
#include "ingest/registry.hpp"

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mobiflow {

enum class EventKind : std::uint8_t { voice, sms, data, signalling };
enum class SubscriberClass : std::uint8_t { handset, iot_sensor, roamer, virtual_operator };

std::string_view event_kind_name(EventKind kind) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view name) noexcept;
std::string_view subscriber_class_name(SubscriberClass cls) noexcept;
std::optional<SubscriberClass> parse_subscriber_class(std::string_view name) noexcept;

/// One cleaned device/network interaction.
struct SignallingEvent {
    Pseudonym device;
    Timestamp ts;
    CellIndex cell;
    EventKind kind;
};

struct DeviceFilterPolicy {
    std::set<SubscriberClass> include{SubscriberClass::handset};
    std::set<SubscriberClass> exclude{SubscriberClass::iot_sensor, SubscriberClass::roamer,
                                      SubscriberClass::virtual_operator};

    /// Throws InvalidArgument when include and exclude overlap.
    void validate() const;
    bool admits(SubscriberClass cls) const { return include.count(cls) > 0 && exclude.count(cls) == 0; }
};

struct QuarantineEntry {
    std::size_t line;
    std::string reason;
};

/// Per-file accounting. Every line read lands in exactly one of kept,
/// filtered_by_policy or one quarantine bucket.
struct IngestReport {
    std::size_t read = 0;
    std::size_t kept = 0;
    std::size_t filtered_by_policy = 0;
    std::size_t quarantined_unknown_cell = 0;
    std::size_t quarantined_malformed = 0;
    std::size_t quarantined_out_of_day = 0;

    std::size_t quarantined() const noexcept
    {
        return quarantined_unknown_cell + quarantined_malformed + quarantined_out_of_day;
    }
    bool conserved() const noexcept { return read == kept + filtered_by_policy + quarantined(); }

    IngestReport& operator+=(const IngestReport& other) noexcept;
};

/// Cleaned events of one day, ordered by (device, timestamp).
struct DayEvents {
    Date day;
    std::vector<SignallingEvent> events;
    IngestReport report;
    std::vector<QuarantineEntry> quarantine;
};

/// Views of the per-device runs of a (device, ts)-sorted event vector.
std::vector<std::span<const SignallingEvent>> device_runs(std::span<const SignallingEvent> events);

/// Applies policy, day-window and registry checks to raw records and
/// pseudonymizes the survivors. Instances can be merged, so a file may be
/// split into partitions that are cleaned independently.
class EventCleaner {
public:
    EventCleaner(const CellRegistry& registry, const DeviceFilterPolicy& policy, const DayPseudonymizer& pseudonymizer,
                 TimeWindow day_window);

    void add(std::string_view raw_id, Timestamp ts, std::string_view cell_id, EventKind kind, SubscriberClass cls,
             std::size_t line);
    void add_malformed(std::size_t line, std::string reason);

    /// Appends `other`'s events and report; call in input order for
    /// reproducible tie ordering.
    void merge(EventCleaner&& other);

    DayEvents finish(Date day) &&;

private:
    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    };

    const CellRegistry* registry_;
    const DeviceFilterPolicy* policy_;
    const DayPseudonymizer* pseudonymizer_;
    TimeWindow window_;
    std::unordered_map<std::string, Pseudonym, StringHash, std::equal_to<>> cache_;
    std::vector<SignallingEvent> events_;
    IngestReport report_;
    std::vector<QuarantineEntry> quarantine_;
};

struct RawEventFields {
    std::string id;
    Timestamp ts = 0;
    std::string cell;
    EventKind kind = EventKind::signalling;
    SubscriberClass subscriber_class = SubscriberClass::handset;
};
/// Parses one JSON-lines record `{id, ts, cell, kind, subscriber_class}`.
/// Returns false and sets `why` when the line is malformed.
bool parse_event_line(std::string_view line, RawEventFields& out, std::string& why);

/// Reads, cleans and sorts one day's JSON-lines event file. Malformed lines
/// are quarantined with their line number, never fatal.
DayEvents parse_events(const std::filesystem::path& path, Date day, const CellRegistry& registry,
                       const DeviceFilterPolicy& policy, const KeySchedule& keys, const LocalCalendar& calendar);

/// Cleaned-event table `pseudonym,ts,cell,kind` (ts in Unix seconds).
void write_events_csv(const std::filesystem::path& path, std::span<const SignallingEvent> events,
                      const CellRegistry& registry);
std::vector<SignallingEvent> read_events_csv(const std::filesystem::path& path, const CellRegistry& registry);

void write_ingest_report_csv(const std::filesystem::path& path, Date day, const IngestReport& report);
void write_quarantine_csv(const std::filesystem::path& path, std::span<const QuarantineEntry> entries);

} // namespace mobiflow
