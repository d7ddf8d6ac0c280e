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
#include "mobility/rog.hpp"
#include "stays/stays.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mobiflow;
using namespace mobiflow::test;

namespace {

const Timestamp t0 = LocalCalendar().day_window(Date(2020, 3, 10)).start;

std::vector<std::pair<std::string, std::pair<Timestamp, Timestamp>>> summary(const CellRegistry& reg,
                                                                             const std::vector<Stay>& stays)
{
    std::vector<std::pair<std::string, std::pair<Timestamp, Timestamp>>> out;
    for (const auto& s : stays) {
        out.push_back({reg.region_name(s.level, s.region), {s.enter - t0, s.exit - t0}});
    }
    return out;
}

using Summary = std::vector<std::pair<std::string, std::pair<Timestamp, Timestamp>>>;

} // namespace

TEST_CASE("stays span the first to last event of a same-region run")
{
    const CellRegistry reg = small_registry();
    const auto ev = track(reg, device(1),
                          {{t0 + 0, "C1"}, {t0 + 600, "C2"}, {t0 + 1200, "C3"}, {t0 + 3000, "C6"}, {t0 + 4000, "C1"}});
    CHECK(summary(reg, detect_stays(ev, reg, Level::municipality)) ==
          Summary{{"M1", {0, 600}}, {"M2", {1200, 3000}}, {"M1", {4000, 4000}}});
    CHECK(summary(reg, detect_stays(ev, reg, Level::federal_state)) == Summary{{"S1", {0, 4000}}});
    CHECK(summary(reg, detect_stays(ev, reg, Level::poi)) == Summary{{"VIE", {3000, 3000}}});
}

TEST_CASE("short single-run excursions are absorbed")
{
    const CellRegistry reg = small_registry();
    const auto ping = track(reg, device(1), {{t0, "C1"}, {t0 + 600, "C1"}, {t0 + 650, "C3"}, {t0 + 700, "C1"},
                                             {t0 + 2000, "C1"}});
    CHECK(summary(reg, detect_stays(ping, reg, Level::municipality)) == Summary{{"M1", {0, 2000}}});
    // The same excursion lasting 100 s is a real visit.
    const auto visit = track(reg, device(1), {{t0, "C1"}, {t0 + 600, "C1"}, {t0 + 650, "C3"}, {t0 + 750, "C1"},
                                              {t0 + 2000, "C1"}});
    CHECK(detect_stays(visit, reg, Level::municipality).size() == 3);
    CHECK(detect_stays(visit, reg, Level::municipality, 120.0).size() == 1);
    // Excursion into a different region on each side is never absorbed.
    const auto move = track(reg, device(1), {{t0, "C1"}, {t0 + 650, "C3"}, {t0 + 660, "C4"}});
    CHECK(detect_stays(move, reg, Level::municipality).size() == 3);
}

TEST_CASE("unsorted events are rejected")
{
    const CellRegistry reg = small_registry();
    const auto ev = track(reg, device(1), {{t0 + 10, "C1"}, {t0, "C2"}});
    CHECK_THROWS_AS(detect_stays(ev, reg, Level::municipality), Error);
}

TEST_CASE("stays are ordered, disjoint and cover every event")
{
    const CellRegistry reg = small_registry();
    std::mt19937_64 gen(11);
    const char* cells[] = {"C1", "C2", "C3", "C4", "C5", "C6"};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<Timestamp, std::string>> pts;
        Timestamp t = t0;
        for (int i = 0; i < 40; ++i) {
            t += 1 + static_cast<Timestamp>(gen() % 300);
            pts.push_back({t, cells[gen() % 6]});
        }
        const auto ev = track(reg, device(2), pts);
        for (Level level : {Level::federal_state, Level::political_area, Level::postcode, Level::municipality}) {
            const auto stays = detect_stays(ev, reg, level);
            for (std::size_t i = 1; i < stays.size(); ++i) {
                CHECK(stays[i - 1].exit < stays[i].enter);
            }
            for (const auto& e : ev) {
                const bool covered = std::any_of(stays.begin(), stays.end(), [&](const Stay& s) {
                    return s.enter <= e.ts && e.ts <= s.exit;
                });
                CHECK(covered);
            }
        }
    }
}

TEST_CASE("night location picks the postcode with the most evening time")
{
    const CellRegistry reg = small_registry();
    const LocalCalendar cal;
    const TimeWindow night = NightWindow{}.on(Date(2020, 3, 10), cal);
    CHECK(night.length() == 4 * 3600);
    const auto ev = track(reg, device(3), {{night.start - 3600, "C1"}, {night.start + 600, "C1"},
                                           {night.start + 1200, "C4"}, {night.start + 9000, "C4"}});
    const auto stays = detect_stays(ev, reg, Level::postcode);
    const auto loc = night_location(stays, night, reg);
    REQUIRE(loc.has_value());
    CHECK(reg.region_name(Level::postcode, loc->postcode) == "8010");
    CHECK(loc->supporting_weight_s == 7800.0);
    CHECK_FALSE(night_location(std::vector<Stay>{}, night, reg).has_value());
}

TEST_CASE("radius of gyration against a direct computation")
{
    const CellRegistry reg = small_registry();
    const auto ev = track(reg, device(1), {{t0, "C1"}, {t0 + 3600, "C4"}, {t0 + 4 * 3600, "C1"}});
    const Timestamp day_end = t0 + 86400;
    const auto locs = event_localizations(ev, reg, day_end);
    REQUIRE(locs.size() == 3);
    CHECK(locs[0].weight == 3600.0);
    CHECK(locs[1].weight == 3 * 3600.0);
    CHECK(locs[2].weight == 20 * 3600.0);
    // Two locations with weights 21 h and 3 h.
    const GeoPoint a = reg.location(*reg.find("C1"));
    const GeoPoint b = reg.location(*reg.find("C4"));
    const double wa = 21.0, wb = 3.0;
    const GeoPoint c((wa * a.longitude() + wb * b.longitude()) / 24.0, (wa * a.latitude() + wb * b.latitude()) / 24.0);
    const double da = haversine_m(a, c), db = haversine_m(b, c);
    const double want = std::sqrt((wa * da * da + wb * db * db) / 24.0);
    CHECK(radius_of_gyration(locs) == doctest::Approx(want).epsilon(1e-12));

    const auto home = track(reg, device(1), {{t0, "C1"}, {t0 + 5000, "C1"}});
    CHECK(radius_of_gyration(event_localizations(home, reg, day_end)) == 0.0);
}

TEST_CASE("radius of gyration is invariant to a common weight scale")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> off(-0.5, 0.5), w(0.1, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<WeightedPoint> pts, scaled;
        for (int i = 0; i < 8; ++i) {
            const WeightedPoint p{GeoPoint(16.0 + off(gen), 48.0 + off(gen)), w(gen)};
            pts.push_back(p);
            scaled.push_back({p.point, p.weight * 7.5});
        }
        CHECK(radius_of_gyration(scaled) == doctest::Approx(radius_of_gyration(pts)).epsilon(1e-12));
    }
}

TEST_CASE("hourly ROG restricts weights to the clock hour")
{
    const CellRegistry reg = small_registry();
    const LocalCalendar cal;
    const Date day(2020, 3, 10);
    const auto grid = cal.hour_grid(day);
    const auto ev = track(reg, device(1), {{t0 + 8 * 3600, "C1"}, {t0 + 8 * 3600 + 1800, "C4"},
                                           {t0 + 10 * 3600, "C4"}});
    const DeviceDayRog r = device_day_rog(ev, reg, day, grid);
    REQUIRE(r.hourly_rog_m[8].has_value());
    CHECK(*r.hourly_rog_m[8] == doctest::Approx(haversine_m(reg.location(0), reg.location(3)) / 2.0).epsilon(1e-3));
    CHECK(*r.hourly_rog_m[10] == 0.0);
    CHECK_FALSE(r.hourly_rog_m[9].has_value());
    const DeviceDayRog full = device_day_rog(ev, reg, day, grid, HourlyMode::full_day);
    CHECK(full.hourly_rog_m[8] == full.rog_m);
    CHECK_FALSE(full.hourly_rog_m[9].has_value());
}

TEST_CASE("bucket counts use half-open bounds")
{
    const std::vector<double> rogs = {0.0, 499.999, 500.0, 4999.0, 5000.0, 1e6};
    const auto b = bucket_rog(rogs, Date(2020, 3, 10));
    CHECK(b.small == 2);
    CHECK(b.medium == 2);
    CHECK(b.large == 2);
    CHECK_THROWS_AS(bucket_rog(rogs, Date(2020, 3, 10), BucketBounds{500.0, 100.0}), Error);
}

TEST_CASE("regional relative change and suppression")
{
    std::vector<DeviceDayRog> a, b;
    for (std::uint8_t i = 0; i < 40; ++i) {
        a.push_back({device(i), Date(2020, 3, 2), 1000.0, std::string("1010"), {}});
        b.push_back({device(i), Date(2020, 3, 16), 400.0, std::string("1010"), {}});
    }
    a.push_back({device(99), Date(2020, 3, 2), 50.0, std::string("2000"), {}});
    b.push_back({device(99), Date(2020, 3, 16), 10.0, std::string("2000"), {}});
    const auto changes = regional_relative_change(a, b);
    REQUIRE(changes.size() == 2);
    CHECK(changes[0].postcode == "1010");
    CHECK(changes[0].rel_change == doctest::Approx(-0.6));
    CHECK(changes[1].flag == ChangeFlag::suppressed);
    CHECK_THROWS_AS(regional_relative_change(a, std::vector<DeviceDayRog>{}), Error);
}

TEST_CASE("hourly series is the floored geometric mean")
{
    std::vector<DeviceDayRog> recs(2);
    recs[0].hourly_rog_m[5] = 0.0;
    recs[1].hourly_rog_m[5] = 400.0;
    const auto s = hourly_rog_series(recs);
    CHECK(*s[5] == doctest::Approx(20.0));
    CHECK_FALSE(s[6].has_value());
}
