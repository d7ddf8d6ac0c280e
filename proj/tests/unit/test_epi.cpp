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
#include "epi/epi.hpp"
#include "od/od.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

using namespace mobiflow;
using namespace mobiflow::test;

namespace {

// Two-sided exact p by enumerating group assignments, U from pair counts.
double brute_force_p(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n = pooled.size(), na = a.size();
    auto u2 = [&](const std::vector<bool>& in_a) {
        long long s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (in_a[i] && !in_a[j]) {
                    s += pooled[i] > pooled[j] ? 2 : pooled[i] == pooled[j] ? 1 : 0;
                }
            }
        }
        return s;
    };
    std::vector<bool> sel(n, false);
    std::fill(sel.begin(), sel.begin() + static_cast<long>(na), true);
    const long long mid = static_cast<long long>(na * (n - na));
    const long long obs = std::llabs(u2(sel) - mid);
    double hit = 0.0, all = 0.0;
    do {
        all += 1.0;
        hit += std::llabs(u2(sel) - mid) >= obs ? 1.0 : 0.0;
    } while (std::prev_permutation(sel.begin(), sel.end()));
    return hit / all;
}

} // namespace

TEST_CASE("Mann-Whitney anchors")
{
    const std::vector<double> a = {1, 2, 3}, b = {10, 20, 30};
    const auto r = mann_whitney_u(a, b);
    CHECK(r.exact);
    CHECK(r.u == 0.0);
    CHECK(r.p == doctest::Approx(0.1).epsilon(1e-15));
    const std::vector<double> same = {5, 5, 5};
    CHECK(mann_whitney_u(same, same).p == 1.0);
    CHECK(mann_whitney_u(same, same).u == 4.5);
}

TEST_CASE("Mann-Whitney exact p equals enumeration, with ties")
{
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t na = 1 + gen() % 7, nb = 1 + gen() % 7;
        std::vector<double> a, b;
        for (std::size_t i = 0; i < na; ++i) {
            a.push_back(static_cast<double>(gen() % 5));
        }
        for (std::size_t i = 0; i < nb; ++i) {
            b.push_back(static_cast<double>(gen() % 5));
        }
        const auto r = mann_whitney_u(a, b, MannWhitneyMethod::exact);
        CHECK(r.p == doctest::Approx(brute_force_p(a, b)).epsilon(1e-14));
        // U of the swapped samples complements U.
        const auto s = mann_whitney_u(b, a, MannWhitneyMethod::exact);
        CHECK(r.u + s.u == static_cast<double>(na * nb));
        CHECK(r.p == doctest::Approx(s.p).epsilon(1e-14));
    }
}

TEST_CASE("normal approximation is close to the exact p at fifteen per group")
{
    std::mt19937_64 gen(23);
    std::normal_distribution<double> n(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a, b;
        for (int i = 0; i < 15; ++i) {
            a.push_back(n(gen));
        }
        for (int i = 0; i < 15; ++i) {
            b.push_back(n(gen) + 0.8);
        }
        const double pe = mann_whitney_u(a, b, MannWhitneyMethod::exact).p;
        const double pn = mann_whitney_u(a, b, MannWhitneyMethod::normal).p;
        worst = std::max(worst, std::fabs(pe - pn));
    }
    CHECK(worst < 0.01);
}

TEST_CASE("normal approximation matches the tie-corrected formula")
{
    const std::vector<double> a = {1, 2, 2, 3, 4, 4, 4, 5, 6, 7, 8, 9};
    const std::vector<double> b = {2, 4, 6, 8, 10, 10, 11, 12, 13, 14};
    const auto r = mann_whitney_u(a, b);
    CHECK_FALSE(r.exact);
    // U by pair counts; ties: 2 (x3), 4 (x4), 6, 8, 10 (x2 each).
    double u = 0.0;
    for (double x : a) {
        for (double y : b) {
            u += x > y ? 1.0 : x == y ? 0.5 : 0.0;
        }
    }
    CHECK(r.u == u);
    const double na = 12, nb = 10, n = 22;
    const double ties = (27 - 3) + (64 - 4) + 3 * (8 - 2);
    const double sigma = std::sqrt(na * nb / 12.0 * ((n + 1) - ties / (n * (n - 1))));
    const double z = std::max(0.0, std::fabs(u - na * nb / 2.0) - 0.5) / sigma;
    CHECK(r.p == doctest::Approx(std::erfc(z / std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("p shrinks as one sample shifts away")
{
    const std::vector<double> a = {1.0, 2.5, 3.1, 4.7, 5.2, 6.8};
    double last = 1.0;
    for (double shift = 0.0; shift <= 8.0; shift += 0.5) {
        std::vector<double> b;
        for (double x : a) {
            b.push_back(x + shift + 0.01);
        }
        const double p = mann_whitney_u(a, b).p;
        CHECK(p <= last + 1e-15);
        last = p;
    }
    CHECK(last == doctest::Approx(2.0 / 924.0));
}

TEST_CASE("Mann-Whitney errors")
{
    const std::vector<double> a = {1.0}, none;
    CHECK_THROWS_AS(mann_whitney_u(a, none), Error);
    const std::vector<double> nan = {std::nan("")};
    CHECK_THROWS_AS(mann_whitney_u(a, nan), Error);
    const std::vector<double> big(40, 1.0);
    CHECK_THROWS_AS(mann_whitney_u(big, big, MannWhitneyMethod::exact), Error);
    CHECK(mann_whitney_u(big, big).p == 1.0);
}

TEST_CASE("per-capita series difference clamped cumulative counts")
{
    InfectionSeries s;
    s.cumulative["M1"] = {{Date(2020, 3, 1), 2}, {Date(2020, 3, 2), 5}, {Date(2020, 3, 3), 4}, {Date(2020, 3, 4), 10}};
    s.population["M1"] = 1000;
    const auto daily = daily_new_per_capita(s).at("M1");
    REQUIRE(daily.size() == 4);
    CHECK(daily[0].second == doctest::Approx(0.002));
    CHECK(daily[1].second == doctest::Approx(0.003));
    CHECK(daily[2].second == 0.0);
    CHECK(daily[3].second == doctest::Approx(0.006));
    const auto cum = cumulative_per_capita(s).at("M1");
    CHECK(cum[3].second == doctest::Approx(0.011));
    s.cumulative["M2"] = {{Date(2020, 3, 1), 1}};
    CHECK_THROWS_AS(cumulative_per_capita(s), Error);
}

TEST_CASE("infection tables round trip")
{
    InfectionSeries s;
    s.cumulative["M1"] = {{Date(2020, 3, 1), 2}, {Date(2020, 3, 2), 5}};
    s.cumulative["M2"] = {{Date(2020, 3, 1), 0}};
    s.population = {{"M1", 1000}, {"M2", 500}};
    const auto dir = temp_dir("epi");
    write_infections_csv(dir / "inf.csv", s);
    write_population_csv(dir / "pop.csv", s);
    const InfectionSeries back = load_infection_series(dir / "inf.csv", dir / "pop.csv");
    CHECK(back.cumulative == s.cumulative);
    CHECK(back.population == s.population);
    CHECK(first_case_date(back, "M1") == Date(2020, 3, 1));
    CHECK_FALSE(first_case_date(back, "M2").has_value());
    {
        std::ofstream out(dir / "dup.csv");
        out << "date,municipality,cumulative_cases\n2020-03-01,M1,1\n2020-03-01,M1,2\n";
    }
    CHECK_THROWS_AS(load_infection_series(dir / "dup.csv", dir / "pop.csv"), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("arrivals from the seed and the exposure split")
{
    ODMatrix d1("2020-03-02", Level::municipality, {"M1", "M2", "M3", "M4"});
    d1.at(0, 1) = 3;
    d1.at(0, 0) = 7;
    d1.at(2, 1) = 1;
    ODMatrix d2 = d1;
    d2.period = "2020-03-09";
    const std::vector<ODMatrix> ods = {d1, d2};
    const auto arr = arrivals_from_seed(ods, "M1", Date(2020, 3, 1), Date(2020, 3, 5));
    CHECK(arr == std::map<std::string, std::uint64_t>{{"M2", 3}});
    CHECK_THROWS_AS(arrivals_from_seed(ods, "M9", Date(2020, 3, 1), Date(2020, 3, 5)), Error);
    const auto split = split_exposure(arr, {"M1", "M2", "M3", "M4"}, "M1");
    CHECK(split.treatment == std::set<std::string>{"M2"});
    CHECK(split.control == std::set<std::string>{"M3", "M4"});
}

TEST_CASE("lag scan finds the first separating date")
{
    RateSeries rates;
    const std::vector<Date> dates = date_range(Date(2020, 3, 1), Date(2020, 3, 20));
    ExposureSplit split;
    for (int m = 0; m < 12; ++m) {
        const std::string name = "M" + std::to_string(m);
        const bool treated = m % 2 == 0;
        (treated ? split.treatment : split.control).insert(name);
        for (Date d : dates) {
            const int day = static_cast<int>(d - Date(2020, 3, 1));
            const double base = 0.001 * m;
            rates[name].push_back({d, treated && day >= 10 ? 1.0 + base : base});
        }
    }
    const LagScan scan = lag_scan(split, rates, dates, 0.01, Date(2020, 3, 3));
    REQUIRE(scan.first_significant.has_value());
    CHECK(*scan.first_significant == Date(2020, 3, 11));
    CHECK(*scan.lag_days == 8);
    CHECK_FALSE(scan.low_power);
    CHECK(scan.points.size() == dates.size());
    CHECK_THROWS_AS(lag_scan(split, rates, std::vector<Date>{}, 0.01), Error);
    CHECK_THROWS_AS(lag_scan(ExposureSplit{{"M0"}, {}}, rates, dates, 0.01), Error);
    const std::vector<Date> later = {Date(2020, 4, 1)};
    CHECK_THROWS_AS(lag_scan(split, rates, later, 0.01), Error);
}
