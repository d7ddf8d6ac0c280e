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
#include "synthgen/planted.hpp"

#include "core/error.hpp"
#include "synthgen/rng.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>

namespace mobiflow {

PlantedGraph planted_block_graph(std::size_t blocks, std::size_t block_size, double intra_fraction,
                                 std::uint64_t seed, std::size_t intra_links, std::size_t inter_links)
{
    if (blocks == 0 || block_size < 2 || !(intra_fraction >= 0.0 && intra_fraction <= 1.0) || intra_links == 0 ||
        (blocks > 1 && inter_links == 0)) {
        fail(Errc::invalid_argument, "planted graph parameters out of range");
    }
    const std::size_t n = blocks * block_size;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("n" + std::to_string(i));
    }
    PlantedGraph out{MobilityGraph(names), std::vector<int>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        out.blocks[i] = static_cast<int>(i / block_size);
    }
    for (std::size_t i = 0; i < n; ++i) {
        StreamRng rng(seed, i);
        const std::size_t b = i / block_size;
        for (std::size_t k = 0; intra_fraction > 0.0 && k < intra_links; ++k) {
            std::size_t j = b * block_size + rng.below(block_size - 1);
            if (j >= i) {
                ++j;
            }
            out.graph.add_weight(i, j, intra_fraction / static_cast<double>(intra_links) * rng.uniform(0.5, 1.5));
        }
        if (blocks == 1 || intra_fraction >= 1.0) {
            continue;
        }
        for (std::size_t k = 0; k < inter_links; ++k) {
            std::size_t j = rng.below(n - block_size);
            if (j >= b * block_size) {
                j += block_size;
            }
            out.graph.add_weight(i, j,
                                 (1.0 - intra_fraction) / static_cast<double>(inter_links) * rng.uniform(0.5, 1.5));
        }
    }
    return out;
}

PlantedGraph two_cliques_with_bridge()
{
    PlantedGraph out{MobilityGraph({"a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3"}), {0, 0, 0, 0, 1, 1, 1, 1}};
    for (std::size_t base : {0u, 4u}) {
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = i + 1; j < 4; ++j) {
                out.graph.add_weight(base + i, base + j, 1.0);
            }
        }
    }
    out.graph.add_weight(3, 4, 1.0);
    return out;
}

double block_agreement(const std::vector<int>& planted, const std::vector<int>& detected)
{
    if (planted.size() != detected.size() || planted.empty()) {
        fail(Errc::invalid_argument, "label vectors must be non-empty and of equal length");
    }
    std::map<std::pair<int, int>, std::size_t> overlap;
    for (std::size_t i = 0; i < planted.size(); ++i) {
        ++overlap[{planted[i], detected[i]}];
    }
    std::vector<std::tuple<std::size_t, int, int>> pairs;
    for (const auto& [key, count] : overlap) {
        pairs.emplace_back(count, key.first, key.second);
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) {
            return std::get<0>(a) > std::get<0>(b);
        }
        return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
    });
    std::set<int> used_planted;
    std::set<int> used_detected;
    std::size_t matched = 0;
    for (const auto& [count, p, d] : pairs) {
        if (used_planted.count(p) || used_detected.count(d)) {
            continue;
        }
        used_planted.insert(p);
        used_detected.insert(d);
        matched += count;
    }
    return static_cast<double>(matched) / static_cast<double>(planted.size());
}

} // namespace mobiflow
