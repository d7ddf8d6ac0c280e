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
#include "pipeline/config.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace mobiflow {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& msg)
{
    fail(Errc::usage, "config '" + key + "': " + msg);
}

Date date_of(const std::string& key, const std::string& text)
{
    const auto d = try_parse_date(trim(text));
    if (!d) {
        bad(key, "expected YYYY-MM-DD, got '" + text + "'");
    }
    return *d;
}

Period range_of(const std::string& key, const std::string& text)
{
    const auto parts = split_list(text);
    if (parts.size() != 2) {
        bad(key, "expected 'first,last'");
    }
    Period p{key, date_of(key, parts[0]), date_of(key, parts[1])};
    if (p.last < p.first) {
        bad(key, "range ends before it starts");
    }
    return p;
}

double number_of(const std::string& key, const std::string& text)
{
    try {
        return parse_double(trim(text), key);
    }
    catch (const Error&) {
        bad(key, "expected a number, got '" + text + "'");
    }
}

std::vector<Level> levels_of(const std::string& key, const std::string& text)
{
    std::vector<Level> out;
    for (const auto& name : split_list(text)) {
        const auto l = parse_level(name);
        if (!l) {
            bad(key, "unknown level '" + name + "'");
        }
        if (std::find(out.begin(), out.end(), *l) == out.end()) {
            out.push_back(*l);
        }
    }
    return out;
}

int minute_of_day(const std::string& key, const std::string& text)
{
    int h = 0;
    int m = 0;
    char colon = 0;
    std::istringstream in(text);
    in >> h >> colon >> m;
    if (!in || colon != ':' || h < 0 || h > 24 || m < 0 || m > 59 || (h == 24 && m != 0)) {
        bad(key, "expected HH:MM, got '" + text + "'");
    }
    return h * 60 + m;
}

std::set<SubscriberClass> classes_of(const std::string& key, const std::string& text)
{
    std::set<SubscriberClass> out;
    for (const auto& name : split_list(text)) {
        const auto c = parse_subscriber_class(name);
        if (!c) {
            bad(key, "unknown subscriber class '" + name + "'");
        }
        out.insert(*c);
    }
    return out;
}

std::string file_digest(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return "absent";
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

std::string join_levels(const std::vector<Level>& levels)
{
    std::string out;
    for (Level l : levels) {
        if (!out.empty()) {
            out += ',';
        }
        out += level_name(l);
    }
    return out;
}

} // namespace

std::vector<std::string> PipelineConfig::known_keys()
{
    return {"timezone",     "cells",          "events_dir",    "out",          "secret",       "day_keys",
            "first_day",    "last_day",       "levels",        "od_levels",    "sk",           "gap_tolerance",
            "buckets",      "min_devices",    "night_start",   "night_end",    "hourly_mode",  "include_classes",
            "exclude_classes",         "poi_min_stay",  "poi_max_stay", "phase",        "week_a",
            "week_b",       "ellipse_level",  "ellipse_mode",  "graph_level",  "freeze_partition", "infections",
            "population",   "epi_seed",       "epi_window",    "epi_mode",     "alpha"};
}

PipelineConfig PipelineConfig::from_config(const KeyValueFile& kv)
{
    const auto unknown = kv.unknown_keys(known_keys());
    if (!unknown.empty()) {
        fail(Errc::usage, kv.origin() + ": unknown configuration key '" + unknown.front() + "'");
    }
    PipelineConfig c;
    const auto base = kv.base_dir();
    auto path = [&](const std::string& key, const std::filesystem::path& fallback) -> std::filesystem::path {
        const auto v = kv.get(key);
        if (!v) {
            return fallback.empty() || fallback.is_absolute() ? fallback : base / fallback;
        }
        const std::filesystem::path p(*v);
        return p.is_absolute() ? p : base / p;
    };
    c.timezone = kv.get_string("timezone", c.timezone);
    c.cells = path("cells", "");
    c.events_dir = path("events_dir", "");
    c.out = path("out", c.out);
    c.secret = kv.get_string("secret", "");
    c.day_keys = path("day_keys", "");
    if (auto v = kv.get("first_day")) {
        c.first_day = date_of("first_day", *v);
    }
    if (auto v = kv.get("last_day")) {
        c.last_day = date_of("last_day", *v);
    }
    if (auto v = kv.get("levels")) {
        c.levels = levels_of("levels", *v);
    }
    if (auto v = kv.get("od_levels")) {
        c.od_levels = levels_of("od_levels", *v);
        if (std::find(c.od_levels.begin(), c.od_levels.end(), Level::poi) != c.od_levels.end()) {
            bad("od_levels", "OD matrices need a dense level, not poi");
        }
    }
    c.sk = kv.get_double("sk", c.sk);
    c.gap_tolerance = kv.get_double("gap_tolerance", c.gap_tolerance);
    if (!(c.sk >= 0.0) || !(c.gap_tolerance >= 0.0)) {
        bad("sk", "thresholds must be non-negative");
    }
    if (auto v = kv.get("buckets")) {
        const auto parts = split_list(*v);
        if (parts.size() != 2) {
            bad("buckets", "expected 'small_upper,medium_upper'");
        }
        c.buckets.small_upper = number_of("buckets", parts[0]);
        c.buckets.medium_upper = number_of("buckets", parts[1]);
        if (!(c.buckets.small_upper > 0.0) || !(c.buckets.medium_upper > c.buckets.small_upper)) {
            bad("buckets", "bounds must satisfy 0 < small < medium");
        }
    }
    const long long min_devices = kv.get_int("min_devices", static_cast<long long>(c.min_devices));
    if (min_devices < 1) {
        bad("min_devices", "must be at least 1");
    }
    c.min_devices = static_cast<std::size_t>(min_devices);
    if (auto v = kv.get("night_start")) {
        c.night.start_minute = minute_of_day("night_start", *v);
    }
    if (auto v = kv.get("night_end")) {
        c.night.end_minute = minute_of_day("night_end", *v);
    }
    if (c.night.start_minute >= c.night.end_minute) {
        bad("night_start", "night window must end after it starts");
    }
    const std::string hourly = kv.get_string("hourly_mode", "hour_restricted");
    if (hourly == "hour_restricted") {
        c.hourly_mode = HourlyMode::hour_restricted;
    }
    else if (hourly == "full_day") {
        c.hourly_mode = HourlyMode::full_day;
    }
    else {
        bad("hourly_mode", "expected hour_restricted or full_day");
    }
    if (auto v = kv.get("include_classes")) {
        c.policy.include = classes_of("include_classes", *v);
    }
    if (auto v = kv.get("exclude_classes")) {
        c.policy.exclude = classes_of("exclude_classes", *v);
    }
    try {
        c.policy.validate();
    }
    catch (const Error& e) {
        bad("include_classes", e.what());
    }
    c.poi_bounds.min_stay_s = kv.get_double("poi_min_stay", c.poi_bounds.min_stay_s);
    c.poi_bounds.max_stay_s = kv.get_double("poi_max_stay", c.poi_bounds.max_stay_s);
    if (!(c.poi_bounds.min_stay_s >= 0.0) || c.poi_bounds.max_stay_s < c.poi_bounds.min_stay_s) {
        bad("poi_min_stay", "POI stay bounds must satisfy 0 <= min <= max");
    }
    for (const auto& line : kv.get_all("phase")) {
        std::istringstream in(line);
        std::string name, first, last, extra;
        in >> name >> first >> last;
        if (!in || (in >> extra)) {
            bad("phase", "expected 'name first last', got '" + line + "'");
        }
        Period p{name, date_of("phase", first), date_of("phase", last)};
        if (p.last < p.first) {
            bad("phase", "phase '" + name + "' ends before it starts");
        }
        for (const auto& q : c.phases) {
            if (q.name == p.name) {
                bad("phase", "duplicate phase '" + name + "'");
            }
            if (!(p.last < q.first || q.last < p.first)) {
                bad("phase", "phases '" + q.name + "' and '" + name + "' overlap");
            }
        }
        c.phases.push_back(std::move(p));
    }
    std::sort(c.phases.begin(), c.phases.end(), [](const Period& a, const Period& b) { return a.first < b.first; });
    if (auto v = kv.get("week_a")) {
        c.week_a = range_of("week_a", *v);
    }
    if (auto v = kv.get("week_b")) {
        c.week_b = range_of("week_b", *v);
    }
    if (auto v = kv.get("ellipse_level")) {
        c.ellipse_level = parse_level_or_throw(*v);
    }
    const std::string ellipse_mode = kv.get_string("ellipse_mode", "destinations");
    if (ellipse_mode == "destinations") {
        c.ellipse_mode = EllipsePoints::destinations;
    }
    else if (ellipse_mode == "all_visited") {
        c.ellipse_mode = EllipsePoints::all_visited;
    }
    else {
        bad("ellipse_mode", "expected destinations or all_visited");
    }
    if (auto v = kv.get("graph_level")) {
        c.graph_level = parse_level_or_throw(*v);
    }
    for (Level l : {c.ellipse_level, c.graph_level}) {
        if (std::find(c.od_levels.begin(), c.od_levels.end(), l) == c.od_levels.end()) {
            bad("od_levels", std::string("level '") + std::string(level_name(l)) +
                                 "' is used by a report but has no daily OD matrix");
        }
    }
    c.freeze_partition = kv.get_string("freeze_partition", "");
    if (!c.freeze_partition.empty() &&
        std::none_of(c.phases.begin(), c.phases.end(), [&](const Period& p) { return p.name == c.freeze_partition; })) {
        bad("freeze_partition", "no phase named '" + c.freeze_partition + "'");
    }
    c.infections = path("infections", "");
    c.population = path("population", "");
    c.epi_seed = kv.get_string("epi_seed", "");
    if (auto v = kv.get("epi_window")) {
        c.epi_window = range_of("epi_window", *v);
    }
    const std::string epi_mode = kv.get_string("epi_mode", "cumulative");
    if (epi_mode == "cumulative") {
        c.epi_mode = RateMode::cumulative;
    }
    else if (epi_mode == "daily_new") {
        c.epi_mode = RateMode::daily_new;
    }
    else {
        bad("epi_mode", "expected cumulative or daily_new");
    }
    c.alpha = kv.get_double("alpha", c.alpha);
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) {
        bad("alpha", "must lie in (0, 1)");
    }
    return c;
}

KeySchedule PipelineConfig::key_schedule() const
{
    if (!day_keys.empty()) {
        return KeySchedule::load_csv(day_keys);
    }
    if (!secret.empty()) {
        return KeySchedule::from_master_secret(secret);
    }
    fail(Errc::missing_day_key, "configure either 'secret' or 'day_keys'");
}

std::vector<Level> PipelineConfig::stay_levels() const
{
    std::vector<Level> out = levels;
    for (Level l : od_levels) {
        out.push_back(l);
    }
    out.push_back(Level::postcode); // night locations
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::filesystem::path PipelineConfig::day_dir(Date day) const
{
    return out / format_date(day);
}

std::filesystem::path PipelineConfig::events_file(Date day) const
{
    return events_dir / (format_date(day) + ".jsonl");
}

std::string PipelineConfig::aggregate_hash() const
{
    std::ostringstream canon;
    canon << "timezone=" << timezone << '\n'
          << "cells=" << file_digest(cells) << '\n'
          << "keys=" << (day_keys.empty() ? sha256_hex("secret:" + secret) : file_digest(day_keys)) << '\n'
          << "levels=" << join_levels(levels) << '\n'
          << "od_levels=" << join_levels(od_levels) << '\n'
          << "sk=" << format_fixed(sk, 6) << '\n'
          << "gap_tolerance=" << format_fixed(gap_tolerance, 6) << '\n'
          << "night=" << night.start_minute << '-' << night.end_minute << '\n'
          << "hourly_mode=" << (hourly_mode == HourlyMode::full_day ? "full_day" : "hour_restricted") << '\n'
          << "poi_bounds=" << format_fixed(poi_bounds.min_stay_s, 6) << ','
          << format_fixed(poi_bounds.max_stay_s, 6) << '\n';
    canon << "include=";
    for (auto cls : policy.include) {
        canon << subscriber_class_name(cls) << ';';
    }
    canon << "\nexclude=";
    for (auto cls : policy.exclude) {
        canon << subscriber_class_name(cls) << ';';
    }
    canon << '\n';
    return sha256_hex(canon.str());
}

std::vector<Period> PipelineConfig::periods_within(Date first, Date last) const
{
    std::vector<Period> out;
    for (const auto& p : phases) {
        const Date lo = std::max(p.first, first);
        const Date hi = std::min(p.last, last);
        if (lo <= hi) {
            out.push_back({p.name, lo, hi});
        }
    }
    if (out.empty()) {
        out.push_back({format_date(first) + "_" + format_date(last), first, last});
    }
    return out;
}

} // namespace mobiflow
