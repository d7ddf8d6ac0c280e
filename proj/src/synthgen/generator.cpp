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
#include "synthgen/generator.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>

namespace mobiflow {

namespace {

// Stream purposes of the counter-based RNG.
enum : std::uint64_t {
    kGeographyStream = 1,
    kAgentStream = 2,
    kPlanStream = 3,
    kEmitStream = 4,
    kMalformedStream = 5,
    kInfectionStream = 6,
};

constexpr std::int64_t kHour = 3600;
constexpr std::int64_t kMinute = 60;

std::uint64_t day_number(Date day)
{
    return static_cast<std::uint64_t>(day - Date(1970, 1, 1));
}

std::string numbered(const char* prefix, int width, std::size_t n)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, n);
    return buf;
}

GeoPoint jitter(StreamRng& rng, const GeoPoint& center, double min_km, double max_km)
{
    const double bearing = rng.uniform(0.0, 360.0);
    const double dist = rng.uniform(min_km, max_km) * 1000.0;
    return destination_point(center, bearing, dist);
}

EventKind draw_kind(StreamRng& rng)
{
    const double u = rng.uniform();
    if (u < 0.6) {
        return EventKind::signalling;
    }
    if (u < 0.9) {
        return EventKind::data;
    }
    return u < 0.95 ? EventKind::voice : EventKind::sms;
}

struct Activity {
    CellIndex cell;
    std::int64_t start; // local seconds after midnight
    std::int64_t end;
    bool restricted;    // thinned by the phase's trip rate
};

} // namespace

Generator::Generator(Scenario scenario)
    : scenario_(std::move(scenario))
    , calendar_(scenario_.timezone)
{
    scenario_.validate();
    build_geography();
    build_agents();
}

void Generator::build_geography()
{
    const Scenario& s = scenario_;
    const GeoPoint origin(s.origin_lon, s.origin_lat);
    const std::size_t postcodes_per_area = (s.municipalities_per_area + 1) / 2;
    std::vector<CellRecord> cells;
    std::size_t cell_no = 0;
    for (std::size_t b = 0; b < block_count(); ++b) {
        const std::size_t bx = b % s.blocks_x;
        const std::size_t by = b / s.blocks_x;
        const GeoPoint block_center =
            destination_point(destination_point(origin, 90.0, static_cast<double>(bx) * s.block_spacing_km * 1000.0),
                              0.0, static_cast<double>(by) * s.block_spacing_km * 1000.0);
        const std::string state = numbered("S", 2, b / s.blocks_per_state + 1);
        for (std::size_t a = 0; a < s.areas_per_block; ++a) {
            const std::size_t ga = b * s.areas_per_block + a;
            StreamRng rng(s.seed, kGeographyStream, ga);
            const GeoPoint area_center =
                s.areas_per_block == 1 ? block_center : jitter(rng, block_center, 3.0, 10.0);
            const std::string area = numbered("A", 3, ga + 1);
            for (std::size_t k = 0; k < s.municipalities_per_area; ++k) {
                const std::size_t gm = ga * s.municipalities_per_area + k;
                Municipality m{numbered("M", 4, gm + 1), b, {}, jitter(rng, area_center, 1.0, 4.0),
                               500 + rng.below(4501)};
                const std::string postcode = std::to_string(1000 + ga * postcodes_per_area + k / 2);
                for (std::size_t c = 0; c < s.cells_per_municipality; ++c) {
                    const GeoPoint loc = c == 0 ? m.center : jitter(rng, m.center, 0.1, 0.6);
                    CellRecord rec{numbered("C", 5, cell_no + 1), loc, state, area, postcode, m.name, ""};
                    if (cell_no == 0) {
                        rec.poi = s.poi_name;
                    }
                    m.cells.push_back(static_cast<CellIndex>(cell_no));
                    cells.push_back(std::move(rec));
                    ++cell_no;
                }
                municipalities_.push_back(std::move(m));
                muni_area_.push_back(ga);
            }
        }
    }
    registry_ = std::make_unique<CellRegistry>(std::move(cells));
    if (s.outbreak.enabled()) {
        for (std::size_t i = 0; i < municipalities_.size(); ++i) {
            if (municipalities_[i].name == s.outbreak.seed_municipality) {
                seed_muni_ = i;
            }
        }
        if (seed_muni_ == static_cast<std::size_t>(-1)) {
            fail(Errc::invalid_scenario, "outbreak seed '" + s.outbreak.seed_municipality + "' is not a municipality");
        }
        if (municipalities_.size() < 2) {
            fail(Errc::invalid_scenario, "an outbreak needs at least two municipalities");
        }
    }
}

void Generator::build_agents()
{
    const Scenario& s = scenario_;
    // The outbreak seed is a destination for visitors only, so that its
    // outflows are exactly the visitors' return trips.
    std::vector<double> cumulative;
    double total = 0.0;
    for (std::size_t i = 0; i < municipalities_.size(); ++i) {
        if (i != seed_muni_) {
            total += static_cast<double>(municipalities_[i].population);
        }
        cumulative.push_back(total);
    }
    agents_.reserve(s.agents);
    for (std::size_t i = 0; i < s.agents; ++i) {
        StreamRng rng(s.seed, kAgentStream, i);
        Agent a;
        a.raw_id = numbered("IMSI2320", 11, i + 1);
        const double u = rng.uniform();
        if (u < s.noise.iot_share) {
            a.subscriber_class = SubscriberClass::iot_sensor;
        }
        else if (u < s.noise.iot_share + s.noise.roamer_share) {
            a.subscriber_class = SubscriberClass::roamer;
        }
        else if (u < s.noise.iot_share + s.noise.roamer_share + s.noise.virtual_share) {
            a.subscriber_class = SubscriberClass::virtual_operator;
        }
        else {
            a.subscriber_class = SubscriberClass::handset;
        }
        const double pick = rng.uniform() * total;
        a.home = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), pick) -
                                          cumulative.begin());
        a.home = std::min(a.home, municipalities_.size() - 1);
        if (a.home == seed_muni_) {
            a.home = seed_muni_ == 0 ? 1 : seed_muni_ - 1;
        }
        const auto& home = municipalities_[a.home];
        a.home_cell = home.cells[rng.below(home.cells.size())];
        if (rng.bernoulli(s.work_in_block)) {
            const std::size_t per_block = s.areas_per_block * s.municipalities_per_area;
            a.work = home.block * per_block + rng.below(per_block);
            if (a.work == seed_muni_) {
                a.work = a.home;
            }
        }
        else {
            a.work = pick_destination(rng, a.home, 1.0, true, true);
        }
        const auto& work = municipalities_[a.work];
        a.work_cell = work.cells[rng.below(work.cells.size())];
        a.commuter = rng.bernoulli(s.commute_prob);
        agents_.push_back(std::move(a));
    }
}

std::size_t Generator::pick_destination(StreamRng& rng, std::size_t home, double length, bool leave_block,
                                        bool within_state) const
{
    const auto& h = municipalities_[home];
    const std::size_t state = h.block / scenario_.blocks_per_state;
    auto eligible = [&](std::size_t i, bool outside) {
        if (i == home || i == seed_muni_) {
            return false;
        }
        const std::size_t b = municipalities_[i].block;
        if (outside && within_state && b / scenario_.blocks_per_state != state) {
            return false;
        }
        return (b != h.block) == outside;
    };
    bool outside = leave_block;
    bool any = false;
    if (outside && within_state) {
        for (std::size_t i = 0; i < municipalities_.size() && !any; ++i) {
            any = eligible(i, true);
        }
        within_state = any;
        any = false;
    }
    for (std::size_t i = 0; i < municipalities_.size() && !any; ++i) {
        any = eligible(i, outside);
    }
    if (!any) {
        outside = !outside;
        for (std::size_t i = 0; i < municipalities_.size() && !any; ++i) {
            any = eligible(i, outside);
        }
        if (!any) {
            return home;
        }
    }
    const double scale = (outside ? scenario_.far_km : scenario_.near_km) * 1000.0 * length;
    std::vector<double> cumulative(municipalities_.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < municipalities_.size(); ++i) {
        if (eligible(i, outside)) {
            total += std::exp(-haversine_m(h.center, municipalities_[i].center) / scale);
        }
        cumulative[i] = total;
    }
    if (!(total > 0.0)) {
        // Every candidate underflowed; fall back to the nearest one.
        std::size_t best = home;
        double best_d = 0.0;
        for (std::size_t i = 0; i < municipalities_.size(); ++i) {
            const double d = haversine_m(h.center, municipalities_[i].center);
            if (eligible(i, outside) && (best == home || d < best_d)) {
                best = i;
                best_d = d;
            }
        }
        return best;
    }
    const double pick = rng.uniform() * total;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), pick) -
                                              cumulative.begin());
    // The cumulative table only grows at eligible entries, so the first
    // entry exceeding `pick` is eligible.
    return std::min(i, municipalities_.size() - 1);
}

std::vector<std::size_t> Generator::region_blocks(Level level) const
{
    const auto& regions = registry_->regions(level);
    std::vector<std::size_t> blocks(regions.size(), 0);
    for (const auto& m : municipalities_) {
        for (CellIndex c : m.cells) {
            const RegionId r = registry_->region_of(c, level);
            if (r != kNoRegion) {
                blocks[static_cast<std::size_t>(r)] = m.block;
            }
        }
    }
    return blocks;
}

std::vector<Visit> Generator::plan_day(std::size_t agent_index, Date day) const
{
    const Scenario& s = scenario_;
    const Agent& a = agents_.at(agent_index);
    const TimeWindow window = calendar_.day_window(day);
    std::vector<Activity> acts;

    if (a.subscriber_class != SubscriberClass::iot_sensor) {
        StreamRng rng(s.seed, kPlanStream, agent_index, day_number(day));
        const Phase& phase = s.phase_on(day);
        const bool weekend = calendar_.is_weekend(day);
        auto cell_in = [&](std::size_t muni) {
            const auto& cells = municipalities_[muni].cells;
            return cells[rng.below(cells.size())];
        };
        auto seconds = [&](double lo, double hi) { return static_cast<std::int64_t>(rng.uniform(lo, hi)); };

        // Tours are laid out as if the phase did not restrict trip making,
        // then each restricted tour survives with probability `rate`. This
        // scales the expected number of trips by exactly `rate` at every level.
        std::int64_t t = 0;
        const auto& o = s.outbreak;
        const bool visiting = o.enabled() && day >= o.visit_first && day <= o.visit_last &&
                              rng.bernoulli(o.visitors_per_day / static_cast<double>(agents_.size()));
        if (visiting) {
            const std::int64_t start = seconds(9 * kHour, 11 * kHour);
            const std::int64_t end = start + seconds(2 * kHour, 4 * kHour);
            acts.push_back({cell_in(seed_muni_), start, end, false});
            t = end;
        }
        else if (a.commuter && !weekend) {
            const std::int64_t start = seconds(6.5 * kHour, 8.5 * kHour);
            const std::int64_t end = start + seconds(7 * kHour, 9 * kHour);
            CellIndex cell = a.work_cell;
            // Shorter reach keeps some out-of-block commutes inside the home block.
            if (municipalities_[a.work].block != municipalities_[a.home].block && phase.length < 1.0 &&
                !rng.bernoulli(phase.length)) {
                cell = cell_in(pick_destination(rng, a.home, phase.length, false));
            }
            acts.push_back({cell, start, end, true});
            t = end;
        }

        std::uint64_t excursions = rng.poisson(s.excursion_rate * (weekend ? 1.5 : 1.0));
        std::uint64_t errands = rng.poisson(s.errand_rate);
        while (excursions + errands > 0) {
            const bool excursion = rng.below(excursions + errands) < excursions;
            (excursion ? excursions : errands) -= 1;
            const std::int64_t start = std::max<std::int64_t>(t, 8 * kHour) + seconds(30 * kMinute, 120 * kMinute);
            const std::int64_t end =
                start + (excursion ? seconds(30 * kMinute, 150 * kMinute) : seconds(20 * kMinute, 60 * kMinute));
            if (end > 19 * kHour + 30 * kMinute) {
                break;
            }
            CellIndex cell;
            if (excursion) {
                const bool leave = rng.bernoulli(std::min(1.0, s.leave_block_prob * phase.length));
                cell = cell_in(pick_destination(rng, a.home, phase.length, leave));
            }
            else {
                cell = cell_in(a.home);
            }
            acts.push_back({cell, start, end, excursion});
            t = end;
        }

        if (rng.bernoulli(std::min(1.0, s.night_out_prob * (weekend ? 2.0 : 1.0)))) {
            const std::int64_t start =
                std::max<std::int64_t>(t + 30 * kMinute, 20 * kHour + 30 * kMinute + seconds(0, 30 * kMinute));
            const std::int64_t end = start + seconds(60 * kMinute, 90 * kMinute);
            if (end <= 23 * kHour) {
                acts.push_back({cell_in(pick_destination(rng, a.home, phase.length, false)), start, end, true});
            }
        }
        std::vector<Activity> kept;
        for (const auto& act : acts) {
            if (rng.bernoulli(phase.rate) || !act.restricted) {
                kept.push_back(act);
            }
        }
        acts = std::move(kept);
    }

    std::vector<Visit> visits;
    auto push = [&](CellIndex cell, Timestamp start, Timestamp end) {
        if (end <= start) {
            return;
        }
        if (!visits.empty() && visits.back().cell == cell) {
            visits.back().end = end;
            return;
        }
        visits.push_back({cell, start, end});
    };
    Timestamp prev = window.start;
    for (const auto& act : acts) {
        const Timestamp start = calendar_.local_instant(day, act.start);
        const Timestamp end = calendar_.local_instant(day, act.end);
        push(a.home_cell, prev, start);
        push(act.cell, start, end);
        prev = end;
    }
    push(a.home_cell, prev, window.end);
    return visits;
}

std::vector<Timestamp> Generator::emission_times(const Visit& v) const
{
    std::vector<Timestamp> out;
    for (Timestamp t = v.start; t < v.end; t += scenario_.heartbeat_s) {
        out.push_back(t);
    }
    return out;
}

void Generator::emit_day(Date day, const EventSink& sink) const
{
    const auto& noise = scenario_.noise;
    const TimeWindow window = calendar_.day_window(day);
    static constexpr std::string_view kUnknownCell = "CX0000";
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        const Agent& a = agents_[i];
        StreamRng rng(scenario_.seed, kEmitStream, i, day_number(day));
        for (const Visit& v : plan_day(i, day)) {
            const std::string& cell = registry_->cell(v.cell).id;
            for (Timestamp t = v.start; t < v.end; t += scenario_.heartbeat_s) {
                sink({a.raw_id, t, cell, draw_kind(rng), a.subscriber_class});
                if (noise.unknown_cell_rate > 0.0 && rng.bernoulli(noise.unknown_cell_rate)) {
                    sink({a.raw_id, t, kUnknownCell, EventKind::signalling, a.subscriber_class});
                }
                if (noise.out_of_day_rate > 0.0 && rng.bernoulli(noise.out_of_day_rate)) {
                    const Timestamp late = window.end + static_cast<Timestamp>(rng.below(3600));
                    sink({a.raw_id, late, cell, EventKind::signalling, a.subscriber_class});
                }
            }
        }
    }
}

std::string Generator::day_file(Date day) const
{
    std::string out;
    StreamRng rng(scenario_.seed, kMalformedStream, day_number(day));
    const double malformed = scenario_.noise.malformed_rate;
    std::size_t broken = 0;
    emit_day(day, [&](const EmittedEvent& e) {
        const std::string ts = format_iso8601_utc(e.ts);
        out += R"({"id":")";
        out += e.raw_id;
        out += R"(","ts":")";
        out += ts;
        out += R"(","cell":")";
        out += e.cell;
        out += R"(","kind":")";
        out += event_kind_name(e.kind);
        out += R"(","subscriber_class":")";
        out += subscriber_class_name(e.subscriber_class);
        out += "\"}\n";
        if (malformed > 0.0 && rng.bernoulli(malformed)) {
            // Rotate through truncation, a missing field and a bad timestamp.
            switch (broken++ % 3) {
            case 0:
                out += R"({"id":")";
                out += e.raw_id;
                out += R"(","ts":")";
                out += "\n";
                break;
            case 1:
                out += R"({"id":")";
                out += e.raw_id;
                out += R"(","ts":")" + ts + R"(","kind":"data","subscriber_class":"handset"})" + "\n";
                break;
            default:
                out += R"({"id":")";
                out += e.raw_id;
                out += R"(","ts":"yesterday","cell":")";
                out += e.cell;
                out += R"(","kind":"data","subscriber_class":"handset"})" + std::string("\n");
                break;
            }
        }
    });
    return out;
}

ODMatrix Generator::truth_od(Date day, Level level) const
{
    if (level == Level::poi) {
        fail(Errc::invalid_argument, "truth OD is defined for dense levels only");
    }
    ODMatrix od(format_date(day), level, registry_->regions(level));
    struct Group {
        RegionId region;
        Timestamp enter;
        Timestamp exit;
    };
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        if (agents_[i].subscriber_class != SubscriberClass::handset) {
            continue;
        }
        std::vector<Group> groups;
        for (const Visit& v : plan_day(i, day)) {
            const RegionId r = registry_->region_of(v.cell, level);
            const Timestamp last_emit = v.start + (v.end - 1 - v.start) / scenario_.heartbeat_s * scenario_.heartbeat_s;
            if (!groups.empty() && groups.back().region == r) {
                groups.back().exit = last_emit;
            }
            else {
                groups.push_back({r, v.start, last_emit});
            }
        }
        std::optional<RegionId> previous;
        for (const auto& g : groups) {
            if (static_cast<double>(g.exit - g.enter) < scenario_.truth_sk) {
                continue;
            }
            if (previous) {
                od.at(static_cast<std::size_t>(*previous), static_cast<std::size_t>(g.region)) += 1;
            }
            previous = g.region;
        }
    }
    return od;
}

std::map<Level, ODMatrix> Generator::truth_ods(Date day, const std::vector<Level>& levels) const
{
    std::map<Level, ODMatrix> out;
    for (Level l : levels) {
        out.emplace(l, truth_od(day, l));
    }
    return out;
}

std::map<std::string, std::uint64_t> Generator::truth_arrivals() const
{
    std::map<std::string, std::uint64_t> arrivals;
    const auto& o = scenario_.outbreak;
    if (!o.enabled()) {
        return arrivals;
    }
    std::vector<ODMatrix> ods;
    for (Date d : date_range(o.visit_first, o.visit_last)) {
        ods.push_back(truth_od(d, Level::municipality));
    }
    return arrivals_from_seed(ods, o.seed_municipality, o.visit_first, o.visit_last);
}

InfectionSeries Generator::infections() const
{
    const Scenario& s = scenario_;
    const auto& o = s.outbreak;
    const auto arrivals = truth_arrivals();
    const Date onset = o.first_case + o.lag_days;
    InfectionSeries series;
    for (std::size_t i = 0; i < municipalities_.size(); ++i) {
        const auto& m = municipalities_[i];
        series.population[m.name] = m.population;
        StreamRng rng(s.seed, kInfectionStream, i);
        const double per_1000 = static_cast<double>(m.population) / 1000.0;
        const bool seed = i == seed_muni_;
        const bool treated = arrivals.count(m.name) > 0;
        std::uint64_t cumulative = 0;
        auto& entries = series.cumulative[m.name];
        for (Date d : s.days()) {
            std::uint64_t fresh = 0;
            if (seed && d >= o.first_case) {
                const double k = static_cast<double>(d - o.first_case);
                fresh = rng.poisson(o.onset_per_1000 * per_1000 * std::pow(o.growth, k));
                if (d == o.first_case) {
                    fresh = std::max<std::uint64_t>(fresh, 1);
                }
            }
            else if (!seed) {
                if (treated && d >= onset) {
                    const double k = static_cast<double>(d - onset);
                    fresh += rng.poisson(o.onset_per_1000 * per_1000 * std::pow(o.growth, k));
                }
                fresh += rng.poisson(o.background_per_100k * static_cast<double>(m.population) / 100000.0);
            }
            cumulative += fresh;
            entries.emplace_back(d, cumulative);
        }
    }
    return series;
}

void Generator::write(const std::filesystem::path& out_dir) const
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir / "events", ec);
    fs::create_directories(out_dir / "truth", ec);
    if (ec) {
        fail(Errc::io, "cannot create " + out_dir.string() + ": " + ec.message());
    }
    registry_->write_csv(out_dir / "cells.csv");

    const std::vector<Level> truth_levels = {Level::federal_state, Level::political_area, Level::postcode,
                                             Level::municipality};
    for (Date day : scenario_.days()) {
        const std::string name = format_date(day);
        {
            AtomicFile f(out_dir / "events" / (name + ".jsonl"));
            f.stream() << day_file(day);
            f.commit();
        }
        for (const auto& [level, od] : truth_ods(day, truth_levels)) {
            write_od_csv(out_dir / "truth" / ("od_" + std::string(level_name(level)) + "_" + name + ".csv"), od);
        }
        AtomicFile visits(out_dir / "truth" / ("visits_" + name + ".csv"));
        visits.stream() << "agent,cell,start_ts,end_ts\n";
        for (std::size_t i = 0; i < agents_.size(); ++i) {
            for (const Visit& v : plan_day(i, day)) {
                visits.stream() << i << ',' << registry_->cell(v.cell).id << ',' << v.start << ',' << v.end << '\n';
            }
        }
        visits.commit();
    }

    {
        AtomicFile f(out_dir / "truth" / "blocks.csv");
        f.stream() << "level,region,block\n";
        for (Level level : truth_levels) {
            const auto blocks = region_blocks(level);
            const auto& regions = registry_->regions(level);
            for (std::size_t r = 0; r < regions.size(); ++r) {
                f.stream() << level_name(level) << ',' << regions[r] << ',' << blocks[r] << '\n';
            }
        }
        f.commit();
    }
    {
        AtomicFile f(out_dir / "truth" / "agents.csv");
        f.stream() << "agent,subscriber_class,home,work,commuter\n";
        for (std::size_t i = 0; i < agents_.size(); ++i) {
            const Agent& a = agents_[i];
            f.stream() << i << ',' << subscriber_class_name(a.subscriber_class) << ','
                       << municipalities_[a.home].name << ',' << municipalities_[a.work].name << ','
                       << (a.commuter ? 1 : 0) << '\n';
        }
        f.commit();
    }
    const InfectionSeries series = infections();
    write_infections_csv(out_dir / "infections.csv", series);
    write_population_csv(out_dir / "population.csv", series);
    {
        AtomicFile f(out_dir / "scenario.conf");
        f.stream() << scenario_.to_config();
        f.commit();
    }
    {
        AtomicFile f(out_dir / "mobiflow.conf");
        auto& c = f.stream();
        c << "# Pipeline configuration for this generated scenario.\n"
          << "timezone = " << scenario_.timezone << '\n'
          << "cells = cells.csv\n"
          << "events_dir = events\n"
          << "out = aggregates\n"
          << "secret = synthetic-secret-" << scenario_.seed << '\n'
          << "first_day = " << format_date(scenario_.first_day) << '\n'
          << "last_day = " << format_date(scenario_.last_day) << '\n';
        for (const auto& p : scenario_.phases) {
            c << "phase = " << p.name << ' ' << format_date(p.first) << ' ' << format_date(p.last) << '\n';
        }
        c << "infections = infections.csv\n"
          << "population = population.csv\n";
        if (scenario_.outbreak.enabled()) {
            const auto& o = scenario_.outbreak;
            c << "epi_seed = " << o.seed_municipality << '\n'
              << "epi_window = " << format_date(o.visit_first) << ',' << format_date(o.visit_last) << '\n';
        }
        f.commit();
    }
}

} // namespace mobiflow
