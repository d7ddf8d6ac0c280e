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

#include "core/geo.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mobiflow {

/// Spatial resolutions, coarse to fine.
enum class Level : std::uint8_t {
    country,
    federal_state,
    political_area,
    postcode,
    municipality,
    poi,
};

inline constexpr std::size_t kLevelCount = 6;
inline constexpr std::array<Level, kLevelCount> kAllLevels = {Level::country,  Level::federal_state,
                                                             Level::political_area, Level::postcode,
                                                             Level::municipality, Level::poi};

std::string_view level_name(Level level) noexcept;
std::optional<Level> parse_level(std::string_view name) noexcept;
Level parse_level_or_throw(std::string_view name);

using CellIndex = std::uint32_t;
/// Index into CellRegistry::regions(level); kNoRegion for cells outside a
/// sparse level (only `poi` is sparse).
using RegionId = std::int32_t;
inline constexpr RegionId kNoRegion = -1;

/// Every cell lies in the single country region of this name.
inline constexpr std::string_view kCountryRegion = "country";

struct CellRecord {
    std::string id;
    GeoPoint location;
    std::string state;
    std::string political_area;
    std::string postcode;
    std::string municipality;
    std::string poi; // empty when the cell is not part of a POI
};

/// Cell-id to location and region lookup, with dense per-level region
/// indices. Region lists are sorted and duplicate-free.
class CellRegistry {
public:
    explicit CellRegistry(std::vector<CellRecord> cells);

    /// CSV `cell_id,longitude,latitude,state,political_area,postcode,municipality[,poi]`.
    static CellRegistry load_csv(const std::filesystem::path& path);
    void write_csv(const std::filesystem::path& path) const;

    std::size_t cell_count() const noexcept { return cells_.size(); }
    std::optional<CellIndex> find(std::string_view cell_id) const;
    const CellRecord& cell(CellIndex index) const { return cells_.at(index); }
    const GeoPoint& location(CellIndex index) const { return cells_[index].location; }

    RegionId region_of(CellIndex cell, Level level) const noexcept
    {
        return cell_regions_[cell * kLevelCount + static_cast<std::size_t>(level)];
    }

    const std::vector<std::string>& regions(Level level) const { return regions_[static_cast<std::size_t>(level)]; }
    const std::string& region_name(Level level, RegionId id) const { return regions(level).at(static_cast<std::size_t>(id)); }
    std::optional<RegionId> find_region(Level level, std::string_view name) const;

    /// Arithmetic mean of the member cells' coordinates.
    GeoPoint region_centroid(Level level, RegionId id) const;
    std::vector<GeoPoint> region_centroids(Level level) const;

    /// The unique coarser region containing `id`; nullopt when the region's
    /// cells disagree or the parent level is sparse.
    std::optional<RegionId> parent_region(Level level, RegionId id, Level parent) const;

private:
    std::vector<CellRecord> cells_;
    std::unordered_map<std::string, CellIndex> by_id_;
    std::array<std::vector<std::string>, kLevelCount> regions_;
    std::vector<RegionId> cell_regions_;
};

} // namespace mobiflow
