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
#include "ingest/events.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mobiflow {

namespace {

constexpr std::array<std::string_view, 4> kKindNames = {"voice", "sms", "data", "signalling"};
constexpr std::array<std::string_view, 4> kClassNames = {"handset", "iot_sensor", "roamer", "virtual_operator"};

} // namespace

std::string_view event_kind_name(EventKind kind) noexcept
{
    return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<EventKind> parse_event_kind(std::string_view name) noexcept
{
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) {
            return static_cast<EventKind>(i);
        }
    }
    return std::nullopt;
}

std::string_view subscriber_class_name(SubscriberClass cls) noexcept
{
    return kClassNames[static_cast<std::size_t>(cls)];
}

std::optional<SubscriberClass> parse_subscriber_class(std::string_view name) noexcept
{
    for (std::size_t i = 0; i < kClassNames.size(); ++i) {
        if (kClassNames[i] == name) {
            return static_cast<SubscriberClass>(i);
        }
    }
    return std::nullopt;
}

void DeviceFilterPolicy::validate() const
{
    for (auto cls : include) {
        if (exclude.count(cls) > 0) {
            fail(Errc::invalid_argument,
                 "subscriber class '" + std::string(subscriber_class_name(cls)) + "' both included and excluded");
        }
    }
}

IngestReport& IngestReport::operator+=(const IngestReport& other) noexcept
{
    read += other.read;
    kept += other.kept;
    filtered_by_policy += other.filtered_by_policy;
    quarantined_unknown_cell += other.quarantined_unknown_cell;
    quarantined_malformed += other.quarantined_malformed;
    quarantined_out_of_day += other.quarantined_out_of_day;
    return *this;
}

std::vector<std::span<const SignallingEvent>> device_runs(std::span<const SignallingEvent> events)
{
    std::vector<std::span<const SignallingEvent>> runs;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= events.size(); ++i) {
        if (i == events.size() || events[i].device != events[begin].device) {
            if (i > begin) {
                runs.push_back(events.subspan(begin, i - begin));
            }
            begin = i;
        }
    }
    return runs;
}

EventCleaner::EventCleaner(const CellRegistry& registry, const DeviceFilterPolicy& policy,
                           const DayPseudonymizer& pseudonymizer, TimeWindow day_window)
    : registry_(&registry)
    , policy_(&policy)
    , pseudonymizer_(&pseudonymizer)
    , window_(day_window)
{
}

void EventCleaner::add(std::string_view raw_id, Timestamp ts, std::string_view cell_id, EventKind kind,
                       SubscriberClass cls, std::size_t line)
{
    ++report_.read;
    if (!policy_->admits(cls)) {
        ++report_.filtered_by_policy;
        return;
    }
    if (!window_.contains(ts)) {
        ++report_.quarantined_out_of_day;
        quarantine_.push_back({line, "timestamp outside day"});
        return;
    }
    const auto cell = registry_->find(cell_id);
    if (!cell) {
        ++report_.quarantined_unknown_cell;
        quarantine_.push_back({line, "unknown cell"});
        return;
    }
    auto it = cache_.find(raw_id);
    if (it == cache_.end()) {
        it = cache_.emplace(std::string(raw_id), (*pseudonymizer_)(raw_id)).first;
    }
    events_.push_back(SignallingEvent{it->second, ts, *cell, kind});
    ++report_.kept;
}

void EventCleaner::add_malformed(std::size_t line, std::string reason)
{
    ++report_.read;
    ++report_.quarantined_malformed;
    quarantine_.push_back({line, std::move(reason)});
}

void EventCleaner::merge(EventCleaner&& other)
{
    events_.insert(events_.end(), other.events_.begin(), other.events_.end());
    quarantine_.insert(quarantine_.end(), std::make_move_iterator(other.quarantine_.begin()),
                       std::make_move_iterator(other.quarantine_.end()));
    report_ += other.report_;
    other.events_.clear();
    other.quarantine_.clear();
    other.report_ = {};
}

DayEvents EventCleaner::finish(Date day) &&
{
    std::stable_sort(events_.begin(), events_.end(), [](const SignallingEvent& a, const SignallingEvent& b) {
        if (a.device != b.device) {
            return a.device < b.device;
        }
        return a.ts < b.ts;
    });
    std::stable_sort(quarantine_.begin(), quarantine_.end(),
                     [](const QuarantineEntry& a, const QuarantineEntry& b) { return a.line < b.line; });
    return DayEvents{day, std::move(events_), report_, std::move(quarantine_)};
}

bool parse_event_line(std::string_view line, RawEventFields& out, std::string& why)
{
    nlohmann::json j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        why = "invalid JSON";
        return false;
    }
    auto string_field = [&](const char* name, std::string& dst) {
        auto it = j.find(name);
        if (it == j.end() || !it->is_string()) {
            why = std::string("missing or non-string field '") + name + "'";
            return false;
        }
        dst = it->get<std::string>();
        return true;
    };
    std::string ts;
    std::string kind;
    std::string cls;
    if (!string_field("id", out.id) || !string_field("ts", ts) || !string_field("cell", out.cell) ||
        !string_field("kind", kind) || !string_field("subscriber_class", cls)) {
        return false;
    }
    if (out.id.empty()) {
        why = "empty id";
        return false;
    }
    auto parsed_ts = parse_iso8601(ts);
    if (!parsed_ts) {
        why = "invalid timestamp";
        return false;
    }
    auto parsed_kind = parse_event_kind(kind);
    if (!parsed_kind) {
        why = "unknown kind";
        return false;
    }
    auto parsed_cls = parse_subscriber_class(cls);
    if (!parsed_cls) {
        why = "unknown subscriber_class";
        return false;
    }
    out.ts = *parsed_ts;
    out.kind = *parsed_kind;
    out.subscriber_class = *parsed_cls;
    return true;
}

DayEvents parse_events(const std::filesystem::path& path, Date day, const CellRegistry& registry,
                       const DeviceFilterPolicy& policy, const KeySchedule& keys, const LocalCalendar& calendar)
{
    policy.validate();
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(Errc::missing_input, "cannot open events file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = std::move(buffer).str();

    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        lines.emplace_back(text.data() + start, end - start);
        start = end + 1;
    }

    const DayPseudonymizer pseudonymizer(keys, day);
    const TimeWindow window = calendar.day_window(day);

    // Contiguous partitions cleaned independently, merged in file order.
    const std::size_t partitions = std::max<std::size_t>(1, std::min<std::size_t>(worker_count(), lines.size() / 4096));
    std::vector<EventCleaner> cleaners;
    cleaners.reserve(partitions);
    for (std::size_t p = 0; p < partitions; ++p) {
        cleaners.emplace_back(registry, policy, pseudonymizer, window);
    }
    const std::size_t per = (lines.size() + partitions - 1) / partitions;
    parallel_chunks(
        partitions,
        [&](std::size_t begin, std::size_t end) {
            RawEventFields fields;
            std::string why;
            for (std::size_t p = begin; p < end; ++p) {
                const std::size_t first = p * per;
                const std::size_t last = std::min(lines.size(), first + per);
                for (std::size_t i = first; i < last; ++i) {
                    const auto body = trim(lines[i]);
                    if (body.empty()) {
                        continue;
                    }
                    if (parse_event_line(body, fields, why)) {
                        cleaners[p].add(fields.id, fields.ts, fields.cell, fields.kind, fields.subscriber_class, i + 1);
                    }
                    else {
                        cleaners[p].add_malformed(i + 1, why);
                    }
                }
            }
        },
        1);
    for (std::size_t p = 1; p < partitions; ++p) {
        cleaners[0].merge(std::move(cleaners[p]));
    }
    return std::move(cleaners[0]).finish(day);
}

void write_events_csv(const std::filesystem::path& path, std::span<const SignallingEvent> events,
                      const CellRegistry& registry)
{
    AtomicFile file(path);
    auto& out = file.stream();
    out << "pseudonym,ts,cell,kind\n";
    for (const auto& e : events) {
        out << e.device.to_hex() << ',' << e.ts << ',' << registry.cell(e.cell).id << ',' << event_kind_name(e.kind)
            << '\n';
    }
    file.commit();
}

std::vector<SignallingEvent> read_events_csv(const std::filesystem::path& path, const CellRegistry& registry)
{
    std::vector<SignallingEvent> events;
    read_csv(path, [&](const std::vector<std::string_view>& f, std::size_t line) {
        const std::string where = path.string() + ":" + std::to_string(line);
        if (f.size() != 4) {
            fail(Errc::malformed_line, where + ": expected pseudonym,ts,cell,kind");
        }
        auto device = Pseudonym::from_hex(f[0]);
        auto cell = registry.find(f[2]);
        auto kind = parse_event_kind(f[3]);
        if (!device || !cell || !kind) {
            fail(Errc::malformed_line, where + ": invalid event record");
        }
        events.push_back(SignallingEvent{*device, parse_int(f[1], "ts"), *cell, *kind});
    });
    return events;
}

void write_ingest_report_csv(const std::filesystem::path& path, Date day, const IngestReport& r)
{
    AtomicFile file(path);
    file.stream() << "day,read,kept,filtered_by_policy,quarantined_unknown_cell,quarantined_malformed,"
                     "quarantined_out_of_day\n"
                  << format_date(day) << ',' << r.read << ',' << r.kept << ',' << r.filtered_by_policy << ','
                  << r.quarantined_unknown_cell << ',' << r.quarantined_malformed << ',' << r.quarantined_out_of_day
                  << '\n';
    file.commit();
}

void write_quarantine_csv(const std::filesystem::path& path, std::span<const QuarantineEntry> entries)
{
    AtomicFile file(path);
    file.stream() << "line,reason\n";
    for (const auto& q : entries) {
        file.stream() << q.line << ',' << q.reason << '\n';
    }
    file.commit();
}

} // namespace mobiflow
