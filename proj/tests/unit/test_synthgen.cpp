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
#include "fixtures.hpp"

#include "core/error.hpp"
#include "core/kv_file.hpp"
#include "mobility/rog.hpp"
#include "pipeline/aggregates.hpp"
#include "pipeline/config.hpp"
#include "synthgen/generator.hpp"
#include "synthgen/rng.hpp"

#include <doctest.h>

using namespace mobiflow;
using namespace mobiflow::test;

namespace {

Scenario small(std::size_t agents)
{
    Scenario s;
    s.seed = 3;
    s.agents = agents;
    s.first_day = Date(2020, 3, 9);
    s.last_day = Date(2020, 3, 10);
    s.blocks_x = 2;
    s.blocks_y = 2;
    s.areas_per_block = 2;
    s.phases = {{"all", s.first_day, s.last_day, 1.0, 1.0}};
    return s;
}

DayAggregates run_in_memory(const Generator& gen, Date day, const PipelineConfig& cfg)
{
    const KeySchedule keys = KeySchedule::from_master_secret("unit");
    const DayPseudonymizer pz(keys, day);
    EventCleaner cleaner(gen.registry(), cfg.policy, pz, gen.calendar().day_window(day));
    std::size_t line = 0;
    gen.emit_day(day, [&](const EmittedEvent& e) {
        cleaner.add(e.raw_id, e.ts, e.cell, e.kind, e.subscriber_class, ++line);
    });
    return aggregate_day(std::move(cleaner).finish(day), cfg, gen.registry(), gen.calendar());
}

} // namespace

TEST_CASE("counter-based streams are reproducible and independent")
{
    StreamRng a(1, 2, 3), b(1, 2, 3), c(1, 2, 4);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        differs = differs || x != c.next();
    }
    CHECK(differs);
    StreamRng r(9, 9);
    double sum = 0.0;
    std::uint64_t below_hits = 0;
    for (int i = 0; i < 20000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        below_hits += r.below(10) < 3 ? 1 : 0;
    }
    CHECK(sum / 20000.0 == doctest::Approx(0.5).epsilon(0.02));
    CHECK(static_cast<double>(below_hits) / 20000.0 == doctest::Approx(0.3).epsilon(0.05));
    double psum = 0.0;
    for (int i = 0; i < 5000; ++i) {
        psum += static_cast<double>(r.poisson(45.0));
    }
    CHECK(psum / 5000.0 == doctest::Approx(45.0).epsilon(0.02));
}

TEST_CASE("same seed gives byte-identical event files")
{
    const Generator a(small(50)), b(small(50));
    CHECK(a.day_file(Date(2020, 3, 9)) == b.day_file(Date(2020, 3, 9)));
    Scenario other = small(50);
    other.seed = 4;
    CHECK(Generator(other).day_file(Date(2020, 3, 9)) != a.day_file(Date(2020, 3, 9)));
}

TEST_CASE("events are per-device time-sorted and inside the day")
{
    const Generator gen(small(80));
    const Date day(2020, 3, 10);
    const TimeWindow w = gen.calendar().day_window(day);
    std::string last_id;
    Timestamp last_ts = 0;
    std::size_t n = 0;
    gen.emit_day(day, [&](const EmittedEvent& e) {
        if (std::string(e.raw_id) == last_id) {
            CHECK(e.ts >= last_ts);
        }
        CHECK(w.contains(e.ts));
        last_id = std::string(e.raw_id);
        last_ts = e.ts;
        ++n;
    });
    CHECK(n > 80);
}

TEST_CASE("a single agent in a single cell has zero radius of gyration")
{
    Scenario s = small(1);
    s.blocks_x = s.blocks_y = 1;
    s.areas_per_block = s.municipalities_per_area = s.cells_per_municipality = 1;
    s.first_day = s.last_day = Date(2020, 3, 9);
    s.phases = {{"all", s.first_day, s.last_day, 1.0, 1.0}};
    const Generator gen(s);
    std::set<std::string> cells;
    gen.emit_day(s.first_day, [&](const EmittedEvent& e) { cells.insert(std::string(e.cell)); });
    CHECK(cells.size() == 1);
    PipelineConfig cfg;
    const DayAggregates agg = run_in_memory(gen, s.first_day, cfg);
    REQUIRE(agg.rog.size() == 1);
    CHECK(agg.rog[0].rog_m == 0.0);
}

TEST_CASE("truth OD equals the pipeline OD")
{
    const Generator gen(small(400));
    PipelineConfig cfg;
    for (Date day : gen.scenario().days()) {
        const DayAggregates agg = run_in_memory(gen, day, cfg);
        for (Level level : cfg.od_levels) {
            CHECK(agg.od.at(level) == gen.truth_od(day, level));
        }
    }
}

TEST_CASE("trip rate scales the truth OD total")
{
    Scenario s = small(10000);
    s.first_day = Date(2020, 3, 2);
    s.last_day = Date(2020, 3, 15);
    s.phases = {{"I", Date(2020, 3, 2), Date(2020, 3, 8), 1.0, 1.0},
                {"III", Date(2020, 3, 9), Date(2020, 3, 15), 0.2, 0.3}};
    const Generator gen(s);
    std::uint64_t first = 0, third = 0;
    for (Date d : s.days()) {
        const std::uint64_t total = gen.truth_od(d, Level::municipality).total();
        (d < Date(2020, 3, 9) ? first : third) += total;
    }
    const double ratio = static_cast<double>(third) / static_cast<double>(first);
    CHECK(ratio == doctest::Approx(0.2).epsilon(0.05));
}

TEST_CASE("planted outbreak starts on the configured dates")
{
    Scenario s = small(300);
    s.first_day = Date(2020, 3, 1);
    s.last_day = Date(2020, 3, 20);
    s.phases = {{"all", s.first_day, s.last_day, 1.0, 1.0}};
    s.outbreak.seed_municipality = "M0004";
    s.outbreak.first_case = Date(2020, 3, 4);
    s.outbreak.lag_days = 5;
    s.outbreak.visit_first = Date(2020, 3, 2);
    s.outbreak.visit_last = Date(2020, 3, 3);
    s.outbreak.background_per_100k = 0.0;
    const Generator gen(s);
    const InfectionSeries inf = gen.infections();
    CHECK(first_case_date(inf, "M0004") == Date(2020, 3, 4));
    const auto arrivals = gen.truth_arrivals();
    CHECK_FALSE(arrivals.empty());
    for (const auto& [m, series] : inf.cumulative) {
        const auto fc = first_case_date(inf, m);
        if (m == "M0004" || !fc) {
            continue;
        }
        CHECK(arrivals.count(m) == 1);
        CHECK(*fc >= Date(2020, 3, 9));
    }
    for (const auto& a : gen.agents()) {
        CHECK(a.home != 3);
    }
}

TEST_CASE("scenario files")
{
    const Scenario s = small(10);
    const Scenario back = Scenario::from_config(KeyValueFile::parse(s.to_config()));
    CHECK(back.to_config() == s.to_config());
    CHECK_THROWS_AS(Scenario::from_config(KeyValueFile::parse("agents = 5\nbogus = 1\n")), Error);
    CHECK_THROWS_AS(Scenario::from_config(KeyValueFile::parse("agents = -5\n")), Error);
    CHECK_THROWS_AS(Scenario::from_config(KeyValueFile::parse(
                        "first_day = 2020-03-01\nlast_day = 2020-03-05\nphase = a 2020-03-01 2020-03-02 1 1\n")),
                    Error);
    CHECK_THROWS_AS(Scenario::from_config(KeyValueFile::parse(
                        "first_day = 2020-03-01\nlast_day = 2020-03-01\nphase = a 2020-03-01 2020-03-01 0 1\n")),
                    Error);
    CHECK_THROWS_AS(Scenario::load("/nonexistent/scenario.conf"), Error);
    Scenario bad = small(10);
    bad.outbreak.seed_municipality = "M9999";
    bad.outbreak.first_case = bad.first_day;
    bad.outbreak.visit_first = bad.outbreak.visit_last = bad.first_day;
    CHECK_THROWS_AS(Generator{bad}, Error);
}
