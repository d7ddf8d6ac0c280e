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

#include <cstdint>
#include <vector>

namespace mobiflow {

struct PlantedGraph {
    MobilityGraph graph;
    std::vector<int> blocks; // planted block of each node
};

/// Random weighted graph with `blocks` groups of `block_size` nodes. Each
/// node spreads unit strength, `intra_fraction` of it over random partners in
/// its own block and the rest over random nodes elsewhere.
PlantedGraph planted_block_graph(std::size_t blocks, std::size_t block_size, double intra_fraction,
                                 std::uint64_t seed, std::size_t intra_links = 4, std::size_t inter_links = 2);

/// Two 4-cliques of unit weight joined by one unit bridge between nodes 3 and 4.
PlantedGraph two_cliques_with_bridge();

/// Share of nodes whose detected community maps to their planted block under
/// the best one-to-one matching found greedily by overlap size.
double block_agreement(const std::vector<int>& planted, const std::vector<int>& detected);

} // namespace mobiflow
