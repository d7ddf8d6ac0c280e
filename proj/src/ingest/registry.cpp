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
#include "ingest/registry.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace mobiflow {

namespace {

constexpr std::array<std::string_view, kLevelCount> kLevelNames = {"country",  "federal_state", "political_area",
                                                                   "postcode", "municipality",  "poi"};

const std::string& record_region(const CellRecord& c, Level level)
{
    static const std::string country(kCountryRegion);
    switch (level) {
    case Level::country: return country;
    case Level::federal_state: return c.state;
    case Level::political_area: return c.political_area;
    case Level::postcode: return c.postcode;
    case Level::municipality: return c.municipality;
    case Level::poi: return c.poi;
    }
    return country;
}

} // namespace

std::string_view level_name(Level level) noexcept
{
    return kLevelNames[static_cast<std::size_t>(level)];
}

std::optional<Level> parse_level(std::string_view name) noexcept
{
    for (std::size_t i = 0; i < kLevelCount; ++i) {
        if (kLevelNames[i] == name) {
            return static_cast<Level>(i);
        }
    }
    if (name == "state") {
        return Level::federal_state;
    }
    return std::nullopt;
}

Level parse_level_or_throw(std::string_view name)
{
    auto level = parse_level(name);
    if (!level) {
        fail(Errc::usage, "unknown level '" + std::string(name) + "'");
    }
    return *level;
}

CellRegistry::CellRegistry(std::vector<CellRecord> cells)
    : cells_(std::move(cells))
{
    for (CellIndex i = 0; i < cells_.size(); ++i) {
        const auto& c = cells_[i];
        if (c.id.empty()) {
            fail(Errc::invalid_argument, "cell with empty id");
        }
        if (!by_id_.emplace(c.id, i).second) {
            fail(Errc::invalid_argument, "duplicate cell id '" + c.id + "'");
        }
        for (Level level : kAllLevels) {
            if (level != Level::poi && record_region(c, level).empty()) {
                fail(Errc::invalid_argument, "cell '" + c.id + "' lacks a " + std::string(level_name(level)));
            }
        }
    }
    for (Level level : kAllLevels) {
        std::set<std::string> names;
        for (const auto& c : cells_) {
            const auto& r = record_region(c, level);
            if (!r.empty()) {
                names.insert(r);
            }
        }
        regions_[static_cast<std::size_t>(level)].assign(names.begin(), names.end());
    }
    cell_regions_.assign(cells_.size() * kLevelCount, kNoRegion);
    for (CellIndex i = 0; i < cells_.size(); ++i) {
        for (Level level : kAllLevels) {
            const auto& r = record_region(cells_[i], level);
            if (!r.empty()) {
                cell_regions_[i * kLevelCount + static_cast<std::size_t>(level)] = *find_region(level, r);
            }
        }
    }
}

CellRegistry CellRegistry::load_csv(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path)) {
        fail(Errc::missing_registry, "cell registry not found: " + path.string());
    }
    std::vector<CellRecord> cells;
    read_csv(path, [&](const std::vector<std::string_view>& f, std::size_t line) {
        if (f.size() != 7 && f.size() != 8) {
            fail(Errc::malformed_line, path.string() + ":" + std::to_string(line) + ": expected 7 or 8 fields");
        }
        cells.push_back(CellRecord{std::string(f[0]),
                                   GeoPoint(parse_double(f[1], "longitude"), parse_double(f[2], "latitude")),
                                   std::string(f[3]), std::string(f[4]), std::string(f[5]), std::string(f[6]),
                                   f.size() == 8 ? std::string(f[7]) : std::string()});
    });
    return CellRegistry(std::move(cells));
}

void CellRegistry::write_csv(const std::filesystem::path& path) const
{
    AtomicFile file(path);
    auto& out = file.stream();
    out << "cell_id,longitude,latitude,state,political_area,postcode,municipality,poi\n";
    for (const auto& c : cells_) {
        out << c.id << ',' << format_fixed(c.location.longitude(), 6) << ',' << format_fixed(c.location.latitude(), 6)
            << ',' << c.state << ',' << c.political_area << ',' << c.postcode << ',' << c.municipality << ',' << c.poi
            << '\n';
    }
    file.commit();
}

std::optional<CellIndex> CellRegistry::find(std::string_view cell_id) const
{
    auto it = by_id_.find(std::string(cell_id));
    if (it == by_id_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<RegionId> CellRegistry::find_region(Level level, std::string_view name) const
{
    const auto& list = regions(level);
    auto it = std::lower_bound(list.begin(), list.end(), name);
    if (it == list.end() || *it != name) {
        return std::nullopt;
    }
    return static_cast<RegionId>(it - list.begin());
}

GeoPoint CellRegistry::region_centroid(Level level, RegionId id) const
{
    CompensatedSum lon;
    CompensatedSum lat;
    std::size_t n = 0;
    for (CellIndex i = 0; i < cells_.size(); ++i) {
        if (region_of(i, level) == id) {
            lon.add(cells_[i].location.longitude());
            lat.add(cells_[i].location.latitude());
            ++n;
        }
    }
    if (n == 0) {
        fail(Errc::unknown_region, "region without cells");
    }
    return GeoPoint(lon.value() / static_cast<double>(n), lat.value() / static_cast<double>(n));
}

std::vector<GeoPoint> CellRegistry::region_centroids(Level level) const
{
    std::vector<GeoPoint> out;
    const auto n = regions(level).size();
    out.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        out.push_back(region_centroid(level, static_cast<RegionId>(r)));
    }
    return out;
}

std::optional<RegionId> CellRegistry::parent_region(Level level, RegionId id, Level parent) const
{
    std::optional<RegionId> found;
    for (CellIndex i = 0; i < cells_.size(); ++i) {
        if (region_of(i, level) != id) {
            continue;
        }
        const RegionId p = region_of(i, parent);
        if (p == kNoRegion || (found && *found != p)) {
            return std::nullopt;
        }
        found = p;
    }
    return found;
}

} // namespace mobiflow
