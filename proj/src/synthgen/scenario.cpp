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
#include "synthgen/scenario.hpp"

#include "core/error.hpp"

#include <charconv>
#include <sstream>

namespace mobiflow {

namespace {

[[noreturn]] void invalid(const std::string& msg)
{
    fail(Errc::invalid_scenario, msg);
}

std::string shortest(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Date date_value(const KeyValueFile& kv, const std::string& key, Date fallback)
{
    const auto v = kv.get(key);
    if (!v) {
        return fallback;
    }
    const auto d = try_parse_date(*v);
    if (!d) {
        invalid(key + ": expected YYYY-MM-DD, got '" + *v + "'");
    }
    return *d;
}

Phase parse_phase(const std::string& text)
{
    std::istringstream in(text);
    std::string name, first, last;
    Phase p;
    in >> name >> first >> last >> p.rate >> p.length;
    if (!in) {
        invalid("phase: expected 'name first last rate length', got '" + text + "'");
    }
    const auto f = try_parse_date(first);
    const auto l = try_parse_date(last);
    if (!f || !l) {
        invalid("phase '" + name + "': bad date");
    }
    p.name = name;
    p.first = *f;
    p.last = *l;
    return p;
}

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys = {
        "seed", "timezone", "first_day", "last_day", "phase", "agents", "blocks_x", "blocks_y", "areas_per_block",
        "municipalities_per_area", "cells_per_municipality", "blocks_per_state", "block_spacing_km", "origin_lon",
        "origin_lat", "poi", "commute_prob", "work_in_block", "leave_block_prob", "excursion_rate", "errand_rate",
        "night_out_prob", "near_km", "far_km", "heartbeat_s", "truth_sk", "outbreak_seed", "outbreak_first_case",
        "outbreak_lag", "outbreak_visit_first", "outbreak_visit_last", "outbreak_visitors_per_day",
        "outbreak_onset_per_1000", "outbreak_growth", "background_per_100k", "iot_share", "roamer_share",
        "virtual_share", "malformed_rate", "unknown_cell_rate", "out_of_day_rate"};
    return keys;
}

} // namespace

void Scenario::validate() const
{
    if (last_day < first_day) {
        invalid("last_day precedes first_day");
    }
    if (agents == 0) {
        invalid("agents must be positive");
    }
    if (blocks_x == 0 || blocks_y == 0 || areas_per_block == 0 || municipalities_per_area == 0 ||
        cells_per_municipality == 0 || blocks_per_state == 0) {
        invalid("geography counts must be positive");
    }
    if (municipality_count() > 9999 || municipality_count() * cells_per_municipality > 99999) {
        invalid("geography too large for the region naming scheme");
    }
    if (!(block_spacing_km > 0.0) || !(near_km > 0.0) || !(far_km > 0.0)) {
        invalid("distances must be positive");
    }
    if (origin_lon < -170.0 || origin_lon > 170.0 || origin_lat < -80.0 || origin_lat > 80.0) {
        invalid("origin out of range");
    }
    for (double p : {commute_prob, work_in_block, leave_block_prob, night_out_prob, noise.iot_share,
                     noise.roamer_share, noise.virtual_share, noise.malformed_rate, noise.unknown_cell_rate,
                     noise.out_of_day_rate}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            invalid("probabilities must lie in [0, 1]");
        }
    }
    if (noise.iot_share + noise.roamer_share + noise.virtual_share > 1.0) {
        invalid("subscriber class shares exceed 1");
    }
    if (!(excursion_rate >= 0.0) || !(errand_rate >= 0.0)) {
        invalid("rates must be non-negative");
    }
    if (heartbeat_s < 1 || heartbeat_s > 3600) {
        invalid("heartbeat_s must lie in [1, 3600]");
    }
    if (!(truth_sk >= 0.0)) {
        invalid("truth_sk must be non-negative");
    }
    if (phases.empty()) {
        invalid("no phases");
    }
    Date expected = first_day;
    for (const auto& p : phases) {
        if (!(p.rate > 0.0 && p.rate <= 1.0) || !(p.length > 0.0)) {
            invalid("phase '" + p.name + "': rate must lie in (0, 1] and length be positive");
        }
        if (p.first != expected || p.last < p.first) {
            invalid("phases must partition the date range without gaps or overlaps");
        }
        expected = p.last + 1;
    }
    if (expected != last_day + 1) {
        invalid("phases must cover the date range");
    }
    if (outbreak.enabled()) {
        if (outbreak.lag_days < 0) {
            invalid("outbreak_lag must be non-negative");
        }
        if (outbreak.visit_last < outbreak.visit_first || outbreak.visit_first < first_day ||
            outbreak.visit_last > last_day) {
            invalid("outbreak visit window must lie inside the date range");
        }
        if (outbreak.first_case < first_day || outbreak.first_case > last_day) {
            invalid("outbreak_first_case outside the date range");
        }
        if (!(outbreak.visitors_per_day >= 0.0) || !(outbreak.onset_per_1000 > 0.0) || !(outbreak.growth > 0.0) ||
            !(outbreak.background_per_100k >= 0.0)) {
            invalid("outbreak rates out of range");
        }
    }
}

const Phase& Scenario::phase_on(Date day) const
{
    for (const auto& p : phases) {
        if (day >= p.first && day <= p.last) {
            return p;
        }
    }
    invalid("no phase covers " + format_date(day));
}

std::vector<Date> Scenario::days() const
{
    return date_range(first_day, last_day);
}

Scenario Scenario::from_config(const KeyValueFile& kv)
{
    const auto unknown = kv.unknown_keys(known_keys());
    if (!unknown.empty()) {
        invalid(kv.origin() + ": unknown key '" + unknown.front() + "'");
    }
    Scenario s;
    try {
        auto count = [&](const std::string& key, std::size_t fallback) {
            const long long v = kv.get_int(key, static_cast<long long>(fallback));
            if (v < 0) {
                invalid(key + " must be non-negative");
            }
            return static_cast<std::size_t>(v);
        };
        s.seed = static_cast<std::uint64_t>(kv.get_int("seed", 1));
        s.timezone = kv.get_string("timezone", s.timezone);
        s.first_day = date_value(kv, "first_day", s.first_day);
        s.last_day = date_value(kv, "last_day", s.last_day);
        for (const auto& line : kv.get_all("phase")) {
            s.phases.push_back(parse_phase(line));
        }
        if (s.phases.empty()) {
            s.phases.push_back(Phase{"all", s.first_day, s.last_day, 1.0, 1.0});
        }
        s.agents = count("agents", s.agents);
        s.blocks_x = count("blocks_x", s.blocks_x);
        s.blocks_y = count("blocks_y", s.blocks_y);
        s.areas_per_block = count("areas_per_block", s.areas_per_block);
        s.municipalities_per_area = count("municipalities_per_area", s.municipalities_per_area);
        s.cells_per_municipality = count("cells_per_municipality", s.cells_per_municipality);
        s.blocks_per_state = count("blocks_per_state", s.blocks_per_state);
        s.block_spacing_km = kv.get_double("block_spacing_km", s.block_spacing_km);
        s.origin_lon = kv.get_double("origin_lon", s.origin_lon);
        s.origin_lat = kv.get_double("origin_lat", s.origin_lat);
        s.poi_name = kv.get_string("poi", s.poi_name);
        s.commute_prob = kv.get_double("commute_prob", s.commute_prob);
        s.work_in_block = kv.get_double("work_in_block", s.work_in_block);
        s.leave_block_prob = kv.get_double("leave_block_prob", s.leave_block_prob);
        s.excursion_rate = kv.get_double("excursion_rate", s.excursion_rate);
        s.errand_rate = kv.get_double("errand_rate", s.errand_rate);
        s.night_out_prob = kv.get_double("night_out_prob", s.night_out_prob);
        s.near_km = kv.get_double("near_km", s.near_km);
        s.far_km = kv.get_double("far_km", s.far_km);
        s.heartbeat_s = kv.get_int("heartbeat_s", s.heartbeat_s);
        s.truth_sk = kv.get_double("truth_sk", s.truth_sk);

        auto& o = s.outbreak;
        o.seed_municipality = kv.get_string("outbreak_seed", "");
        o.first_case = date_value(kv, "outbreak_first_case", s.first_day);
        o.lag_days = static_cast<int>(kv.get_int("outbreak_lag", o.lag_days));
        o.visit_first = date_value(kv, "outbreak_visit_first", o.first_case);
        o.visit_last = date_value(kv, "outbreak_visit_last", o.visit_first);
        o.visitors_per_day = kv.get_double("outbreak_visitors_per_day", o.visitors_per_day);
        o.onset_per_1000 = kv.get_double("outbreak_onset_per_1000", o.onset_per_1000);
        o.growth = kv.get_double("outbreak_growth", o.growth);
        o.background_per_100k = kv.get_double("background_per_100k", o.background_per_100k);

        auto& n = s.noise;
        n.iot_share = kv.get_double("iot_share", n.iot_share);
        n.roamer_share = kv.get_double("roamer_share", n.roamer_share);
        n.virtual_share = kv.get_double("virtual_share", n.virtual_share);
        n.malformed_rate = kv.get_double("malformed_rate", n.malformed_rate);
        n.unknown_cell_rate = kv.get_double("unknown_cell_rate", n.unknown_cell_rate);
        n.out_of_day_rate = kv.get_double("out_of_day_rate", n.out_of_day_rate);
    }
    catch (const Error& e) {
        if (e.code() == Errc::invalid_scenario) {
            throw;
        }
        invalid(e.what());
    }
    s.validate();
    return s;
}

Scenario Scenario::load(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path)) {
        fail(Errc::missing_input, "scenario file not found: " + path.string());
    }
    return from_config(KeyValueFile::load(path));
}

std::string Scenario::to_config() const
{
    std::ostringstream out;
    out << "seed = " << seed << '\n'
        << "timezone = " << timezone << '\n'
        << "first_day = " << format_date(first_day) << '\n'
        << "last_day = " << format_date(last_day) << '\n';
    for (const auto& p : phases) {
        out << "phase = " << p.name << ' ' << format_date(p.first) << ' ' << format_date(p.last) << ' '
            << shortest(p.rate) << ' ' << shortest(p.length) << '\n';
    }
    out << "agents = " << agents << '\n'
        << "blocks_x = " << blocks_x << '\n'
        << "blocks_y = " << blocks_y << '\n'
        << "areas_per_block = " << areas_per_block << '\n'
        << "municipalities_per_area = " << municipalities_per_area << '\n'
        << "cells_per_municipality = " << cells_per_municipality << '\n'
        << "blocks_per_state = " << blocks_per_state << '\n'
        << "block_spacing_km = " << shortest(block_spacing_km) << '\n'
        << "origin_lon = " << shortest(origin_lon) << '\n'
        << "origin_lat = " << shortest(origin_lat) << '\n'
        << "poi = " << poi_name << '\n'
        << "commute_prob = " << shortest(commute_prob) << '\n'
        << "work_in_block = " << shortest(work_in_block) << '\n'
        << "leave_block_prob = " << shortest(leave_block_prob) << '\n'
        << "excursion_rate = " << shortest(excursion_rate) << '\n'
        << "errand_rate = " << shortest(errand_rate) << '\n'
        << "night_out_prob = " << shortest(night_out_prob) << '\n'
        << "near_km = " << shortest(near_km) << '\n'
        << "far_km = " << shortest(far_km) << '\n'
        << "heartbeat_s = " << heartbeat_s << '\n'
        << "truth_sk = " << shortest(truth_sk) << '\n';
    if (outbreak.enabled()) {
        out << "outbreak_seed = " << outbreak.seed_municipality << '\n'
            << "outbreak_first_case = " << format_date(outbreak.first_case) << '\n'
            << "outbreak_lag = " << outbreak.lag_days << '\n'
            << "outbreak_visit_first = " << format_date(outbreak.visit_first) << '\n'
            << "outbreak_visit_last = " << format_date(outbreak.visit_last) << '\n'
            << "outbreak_visitors_per_day = " << shortest(outbreak.visitors_per_day) << '\n'
            << "outbreak_onset_per_1000 = " << shortest(outbreak.onset_per_1000) << '\n'
            << "outbreak_growth = " << shortest(outbreak.growth) << '\n'
            << "background_per_100k = " << shortest(outbreak.background_per_100k) << '\n';
    }
    out << "iot_share = " << shortest(noise.iot_share) << '\n'
        << "roamer_share = " << shortest(noise.roamer_share) << '\n'
        << "virtual_share = " << shortest(noise.virtual_share) << '\n'
        << "malformed_rate = " << shortest(noise.malformed_rate) << '\n'
        << "unknown_cell_rate = " << shortest(noise.unknown_cell_rate) << '\n'
        << "out_of_day_rate = " << shortest(noise.out_of_day_rate) << '\n';
    return out.str();
}

} // namespace mobiflow
