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
#include "core/error.hpp"
#include "graph/graph.hpp"

#include <cmath>
#include <limits>

namespace mobiflow {

namespace {

// Relative width within which two gains count as tied. Keeps the merge order
// stable under uniform weight scaling, where rounding differs per scale.
constexpr double kTieTolerance = 1e-12;

} // namespace

CommunityResult greedy_communities(const MobilityGraph& g)
{
    const std::size_t n = g.node_count();
    if (n == 0) {
        fail(Errc::empty_graph, "community detection on a graph without nodes");
    }
    CommunityResult result;
    const double two_m = g.total_strength();
    if (!(two_m > 0.0)) {
        result.partition = Partition::singletons(n);
        return result;
    }

    // between[i*n+j]: summed weight between communities i and j (i != j).
    std::vector<double> between(n * n, 0.0);
    std::vector<double> total(n, 0.0);
    std::vector<bool> active(n, true);
    std::vector<int> label(n);
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        label[i] = static_cast<int>(i);
        total[i] = g.strength(i);
        for (auto j : g.neighbors(i)) {
            between[i * n + j] = g.weight(i, j);
        }
        const double a = total[i] / two_m;
        q -= a * a;
    }

    while (true) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t bi = n;
        std::size_t bj = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) {
                continue;
            }
            for (std::size_t j = i + 1; j < n; ++j) {
                const double w = between[i * n + j];
                if (!active[j] || w <= 0.0) {
                    continue;
                }
                const double gain = 2.0 * (w / two_m - (total[i] / two_m) * (total[j] / two_m));
                if (bi == n || gain > best + kTieTolerance * std::abs(best)) {
                    best = gain;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == n || !(best > 0.0)) {
            break;
        }
        // Fold bj into bi.
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) {
                continue;
            }
            between[bi * n + k] += between[bj * n + k];
            between[k * n + bi] = between[bi * n + k];
            between[bj * n + k] = 0.0;
            between[k * n + bj] = 0.0;
        }
        between[bi * n + bj] = 0.0;
        between[bj * n + bi] = 0.0;
        total[bi] += total[bj];
        total[bj] = 0.0;
        active[bj] = false;
        for (auto& l : label) {
            if (l == static_cast<int>(bj)) {
                l = static_cast<int>(bi);
            }
        }
        q += best;
        result.steps.push_back(DendrogramStep{static_cast<int>(bi), static_cast<int>(bj), q});
    }

    result.partition = Partition::from_labels(label);
    result.modularity = modularity(g, result.partition);
    return result;
}

} // namespace mobiflow
