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

#include "graph/graph.hpp"
#include "ingest/registry.hpp"
#include "stays/stays.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mobiflow {

inline constexpr double kDefaultImportantStay = 600.0;

/// Square origin-destination count matrix over a fixed region universe.
/// The diagonal holds consecutive important stays within one region.
struct ODMatrix {
    std::string period; // ISO day or period name
    Level level = Level::political_area;
    std::vector<std::string> regions;
    std::vector<std::uint64_t> flows;

    ODMatrix() = default;
    ODMatrix(std::string period, Level level, std::vector<std::string> regions);

    std::size_t size() const noexcept { return regions.size(); }
    std::uint64_t& at(std::size_t o, std::size_t d) { return flows[o * regions.size() + d]; }
    std::uint64_t at(std::size_t o, std::size_t d) const { return flows[o * regions.size() + d]; }
    std::uint64_t total() const;
    std::uint64_t off_diagonal_total() const;
    std::size_t index_of(const std::string& region) const; // throws UnknownRegion

    friend bool operator==(const ODMatrix&, const ODMatrix&) = default;
};

/// Stays with weight >= s_k, order preserved.
std::vector<Stay> important_stays(std::span<const Stay> stays, double s_k = kDefaultImportantStay);

/// One count per consecutive pair of important stays of each device. `stays`
/// must be grouped by device and time-ordered within each device.
ODMatrix build_od(std::span<const Stay> stays, const CellRegistry& registry, Level level, const std::string& period,
                  double s_k = kDefaultImportantStay);

/// Undirected graph with A_mn = flows[m][n] + flows[n][m]; self-loops and
/// zero weights are dropped.
MobilityGraph symmetrize(const ODMatrix& od);

/// Entrywise sum. Throws LevelMismatch on differing levels or region sets,
/// EmptyInput on an empty list.
ODMatrix aggregate_period(std::span<const ODMatrix> ods, const std::string& period);

/// Sparse CSV `origin,destination,count`, zero entries omitted.
void write_od_csv(const std::filesystem::path& path, const ODMatrix& od);
/// Reads a sparse CSV into the given region universe.
ODMatrix read_od_csv(const std::filesystem::path& path, Level level, std::vector<std::string> regions,
                     const std::string& period);

} // namespace mobiflow
