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
#include "epi/epi.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"

#include <algorithm>
#include <tuple>

namespace mobiflow {

namespace {

double median_of(std::vector<double> v)
{
    if (v.empty()) {
        return 0.0;
    }
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::uint64_t population_of(const InfectionSeries& series, const std::string& region)
{
    auto it = series.population.find(region);
    if (it == series.population.end() || it->second == 0) {
        fail(Errc::missing_population, "no positive population for '" + region + "'");
    }
    return it->second;
}

template <class Fn>
RateSeries per_capita(const InfectionSeries& series, Fn&& accumulate)
{
    RateSeries out;
    for (const auto& [region, entries] : series.cumulative) {
        const double pop = static_cast<double>(population_of(series, region));
        auto& dst = out[region];
        dst.reserve(entries.size());
        std::uint64_t previous = 0;
        std::uint64_t running = 0;
        for (const auto& [date, cum] : entries) {
            const std::uint64_t fresh = cum > previous ? cum - previous : 0;
            previous = cum;
            running += fresh;
            dst.emplace_back(date, static_cast<double>(accumulate(fresh, running)) / pop);
        }
    }
    return out;
}

} // namespace

InfectionSeries load_infection_series(const std::filesystem::path& infections, const std::filesystem::path& population)
{
    InfectionSeries s;
    read_csv(population, [&](const std::vector<std::string_view>& f, std::size_t line) {
        if (f.size() != 2) {
            fail(Errc::malformed_line, population.string() + ":" + std::to_string(line) + ": expected 2 fields");
        }
        s.population[std::string(trim(f[0]))] = static_cast<std::uint64_t>(parse_int(trim(f[1]), "population"));
    });
    read_csv(infections, [&](const std::vector<std::string_view>& f, std::size_t line) {
        const std::string where = infections.string() + ":" + std::to_string(line);
        if (f.size() != 3) {
            fail(Errc::malformed_line, where + ": expected 3 fields");
        }
        const auto date = try_parse_date(trim(f[0]));
        if (!date) {
            fail(Errc::malformed_line, where + ": bad date");
        }
        s.cumulative[std::string(trim(f[1]))].emplace_back(
            *date, static_cast<std::uint64_t>(parse_int(trim(f[2]), "cumulative_cases")));
    });
    for (auto& [region, entries] : s.cumulative) {
        std::sort(entries.begin(), entries.end());
        for (std::size_t i = 1; i < entries.size(); ++i) {
            if (entries[i].first == entries[i - 1].first) {
                fail(Errc::malformed_line, "duplicate date " + format_date(entries[i].first) + " for '" + region + "'");
            }
        }
    }
    return s;
}

void write_infections_csv(const std::filesystem::path& path, const InfectionSeries& series)
{
    // Date-major order, as case registries publish them.
    std::vector<std::tuple<Date, std::string, std::uint64_t>> rows;
    for (const auto& [region, entries] : series.cumulative) {
        for (const auto& [date, cum] : entries) {
            rows.emplace_back(date, region, cum);
        }
    }
    std::sort(rows.begin(), rows.end());
    AtomicFile file(path);
    auto& out = file.stream();
    out << "date,municipality,cumulative_cases\n";
    for (const auto& [date, region, cum] : rows) {
        out << format_date(date) << ',' << region << ',' << cum << '\n';
    }
    file.commit();
}

void write_population_csv(const std::filesystem::path& path, const InfectionSeries& series)
{
    AtomicFile file(path);
    auto& out = file.stream();
    out << "municipality,population\n";
    for (const auto& [region, pop] : series.population) {
        out << region << ',' << pop << '\n';
    }
    file.commit();
}

RateSeries daily_new_per_capita(const InfectionSeries& series)
{
    return per_capita(series, [](std::uint64_t fresh, std::uint64_t) { return fresh; });
}

RateSeries cumulative_per_capita(const InfectionSeries& series)
{
    return per_capita(series, [](std::uint64_t, std::uint64_t running) { return running; });
}

std::map<std::string, std::uint64_t> arrivals_from_seed(std::span<const ODMatrix> daily_ods, const std::string& seed,
                                                        Date first, Date last)
{
    std::map<std::string, std::uint64_t> out;
    for (const auto& od : daily_ods) {
        const auto it = std::lower_bound(od.regions.begin(), od.regions.end(), seed);
        if (it == od.regions.end() || *it != seed) {
            fail(Errc::unknown_seed, "seed '" + seed + "' is not in the OD region universe");
        }
        const auto day = try_parse_date(od.period);
        if (!day || *day < first || *day > last) {
            continue;
        }
        const std::size_t s = static_cast<std::size_t>(it - od.regions.begin());
        for (std::size_t m = 0; m < od.size(); ++m) {
            if (m != s && od.at(s, m) > 0) {
                out[od.regions[m]] += od.at(s, m);
            }
        }
    }
    return out;
}

ExposureSplit split_exposure(const std::map<std::string, std::uint64_t>& arrivals,
                             const std::set<std::string>& universe, const std::string& seed)
{
    ExposureSplit split;
    for (const auto& m : universe) {
        if (m == seed) {
            continue;
        }
        auto it = arrivals.find(m);
        if (it != arrivals.end() && it->second > 0) {
            split.treatment.insert(m);
        }
        else {
            split.control.insert(m);
        }
    }
    return split;
}

std::optional<Date> first_case_date(const InfectionSeries& series, const std::string& municipality)
{
    auto it = series.cumulative.find(municipality);
    if (it == series.cumulative.end()) {
        return std::nullopt;
    }
    for (const auto& [date, cum] : it->second) {
        if (cum > 0) {
            return date;
        }
    }
    return std::nullopt;
}

LagScan lag_scan(const ExposureSplit& split, const RateSeries& rates, std::span<const Date> dates, double alpha,
                 std::optional<Date> seed_first_case)
{
    if (dates.empty()) {
        fail(Errc::no_dates, "lag scan needs at least one date");
    }
    if (split.treatment.empty() || split.control.empty()) {
        fail(Errc::empty_sample, "treatment and control groups must both be non-empty");
    }
    auto value_on = [&](const std::string& region, Date d) {
        auto it = rates.find(region);
        if (it != rates.end()) {
            const auto& v = it->second;
            auto pos = std::lower_bound(v.begin(), v.end(), d,
                                        [](const std::pair<Date, double>& e, Date key) { return e.first < key; });
            if (pos != v.end() && pos->first == d) {
                return pos->second;
            }
        }
        fail(Errc::invalid_argument, "no rate for '" + region + "' on " + format_date(d));
    };

    LagScan scan;
    scan.low_power = split.treatment.size() < 3 || split.control.size() < 3;
    scan.points.resize(dates.size());
    parallel_chunks(
        dates.size(),
        [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                std::vector<double> t;
                std::vector<double> c;
                for (const auto& m : split.treatment) {
                    t.push_back(value_on(m, dates[i]));
                }
                for (const auto& m : split.control) {
                    c.push_back(value_on(m, dates[i]));
                }
                const MannWhitneyResult mw = mann_whitney_u(t, c);
                scan.points[i] = {dates[i], mw.p, mw.u, median_of(std::move(t)), median_of(std::move(c))};
            }
        },
        1);
    for (const auto& pt : scan.points) {
        if (pt.p < alpha) {
            scan.first_significant = pt.date;
            break;
        }
    }
    if (scan.first_significant && seed_first_case) {
        scan.lag_days = static_cast<int>(*scan.first_significant - *seed_first_case);
    }
    return scan;
}

} // namespace mobiflow
