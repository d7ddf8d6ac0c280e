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
#include "od/od.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mobiflow {

enum class MannWhitneyMethod {
    /// Exact below kExactMaxTotal combined observations, normal otherwise.
    automatic,
    exact,
    normal,
};

/// Largest combined sample size handled exactly in automatic mode.
inline constexpr std::size_t kExactMaxTotal = 20;

struct MannWhitneyResult {
    double u = 0.0; // pairs with a > b, ties counted one half
    double p = 1.0; // two-sided
    bool exact = false;
};

/// Rank-sum test with midranks for ties. The exact p enumerates every split
/// of the pooled (tied) ranks; the normal approximation uses continuity and
/// tie corrections. Throws EmptySample.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                 MannWhitneyMethod method = MannWhitneyMethod::automatic);

struct InfectionSeries {
    /// Per municipality, (date, cumulative cases) with strictly increasing dates.
    std::map<std::string, std::vector<std::pair<Date, std::uint64_t>>> cumulative;
    std::map<std::string, std::uint64_t> population;
};

/// CSV `date,municipality,cumulative_cases` and `municipality,population`.
InfectionSeries load_infection_series(const std::filesystem::path& infections, const std::filesystem::path& population);
void write_infections_csv(const std::filesystem::path& path, const InfectionSeries& series);
void write_population_csv(const std::filesystem::path& path, const InfectionSeries& series);

using RateSeries = std::map<std::string, std::vector<std::pair<Date, double>>>;

/// Clamped first differences of the cumulative counts divided by population.
/// The first entry is differenced against zero. Throws MissingPopulation.
RateSeries daily_new_per_capita(const InfectionSeries& series);

/// Running sum of the clamped daily differences divided by population.
RateSeries cumulative_per_capita(const InfectionSeries& series);

/// Flows leaving `seed` summed over the OD matrices whose period is a day in
/// [first, last]. Destinations without arrivals are omitted. Throws
/// UnknownSeed when a matrix does not contain the seed.
std::map<std::string, std::uint64_t> arrivals_from_seed(std::span<const ODMatrix> daily_ods, const std::string& seed,
                                                        Date first, Date last);

struct ExposureSplit {
    std::set<std::string> treatment;
    std::set<std::string> control;
};

/// Municipalities of `universe` with at least one arrival form the treatment
/// group, the rest the control group. The seed is in neither.
ExposureSplit split_exposure(const std::map<std::string, std::uint64_t>& arrivals,
                             const std::set<std::string>& universe, const std::string& seed);

struct LagPoint {
    Date date;
    double p = 1.0;
    double u = 0.0;
    double median_treatment = 0.0;
    double median_control = 0.0;
};

struct LagScan {
    std::vector<LagPoint> points;
    std::optional<Date> first_significant;
    /// Days from the seed's first case to first_significant.
    std::optional<int> lag_days;
    /// A group has fewer than three members.
    bool low_power = false;
};

/// Mann-Whitney of treatment vs control rates on each date. Throws NoDates
/// and EmptySample; InvalidArgument when a group member lacks a date.
LagScan lag_scan(const ExposureSplit& split, const RateSeries& rates, std::span<const Date> dates, double alpha = 0.01,
                 std::optional<Date> seed_first_case = std::nullopt);

/// First date with a positive cumulative count, if any.
std::optional<Date> first_case_date(const InfectionSeries& series, const std::string& municipality);

} // namespace mobiflow
