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
#include "graph/graph.hpp"

#include "core/error.hpp"
#include "core/geo.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace mobiflow {

MobilityGraph::MobilityGraph(std::vector<std::string> nodes)
    : nodes_(std::move(nodes))
    , weights_(nodes_.size() * nodes_.size(), 0.0)
    , neighbors_(nodes_.size())
{
}

std::size_t MobilityGraph::index_of(const std::string& node) const
{
    auto it = std::find(nodes_.begin(), nodes_.end(), node);
    if (it == nodes_.end()) {
        fail(Errc::unknown_node, "node '" + node + "' not in graph");
    }
    return static_cast<std::size_t>(it - nodes_.begin());
}

void MobilityGraph::add_weight(std::size_t m, std::size_t n, double w)
{
    const std::size_t k = nodes_.size();
    if (m >= k || n >= k) {
        fail(Errc::unknown_node, "edge endpoint out of range");
    }
    if (m == n) {
        fail(Errc::invalid_argument, "self-loops are not allowed");
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
        fail(Errc::invalid_argument, "edge weights must be positive and finite");
    }
    if (weights_[m * k + n] == 0.0) {
        auto insert_sorted = [](std::vector<std::size_t>& v, std::size_t x) {
            v.insert(std::lower_bound(v.begin(), v.end(), x), x);
        };
        insert_sorted(neighbors_[m], n);
        insert_sorted(neighbors_[n], m);
    }
    weights_[m * k + n] += w;
    weights_[n * k + m] += w;
}

double MobilityGraph::strength(std::size_t m) const
{
    CompensatedSum s;
    for (auto n : neighbors_.at(m)) {
        s.add(weight(m, n));
    }
    return s.value();
}

double MobilityGraph::total_strength() const
{
    CompensatedSum s;
    for (std::size_t m = 0; m < nodes_.size(); ++m) {
        s.add(strength(m));
    }
    return s.value();
}

std::size_t MobilityGraph::edge_count() const
{
    std::size_t deg = 0;
    for (const auto& nb : neighbors_) {
        deg += nb.size();
    }
    return deg / 2;
}

MobilityGraph MobilityGraph::scaled(double factor) const
{
    if (!(factor > 0.0)) {
        fail(Errc::invalid_argument, "scale factor must be positive");
    }
    MobilityGraph g = *this;
    for (auto& w : g.weights_) {
        w *= factor;
    }
    return g;
}

Partition Partition::from_labels(const std::vector<int>& labels)
{
    Partition p;
    std::unordered_map<int, int> dense;
    p.assignment.reserve(labels.size());
    for (int label : labels) {
        auto [it, inserted] = dense.emplace(label, static_cast<int>(dense.size()));
        p.assignment.push_back(it->second);
    }
    p.community_count = static_cast<int>(dense.size());
    return p;
}

Partition Partition::singletons(std::size_t n)
{
    Partition p;
    p.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.assignment[i] = static_cast<int>(i);
    }
    p.community_count = static_cast<int>(n);
    return p;
}

double local_clustering(const MobilityGraph& g, std::size_t m)
{
    if (m >= g.node_count()) {
        fail(Errc::unknown_node, "node index " + std::to_string(m) + " out of range");
    }
    const auto& nb = g.neighbors(m);
    const std::size_t k = nb.size();
    if (k < 2) {
        return 0.0;
    }
    CompensatedSum closed;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            if (g.linked(nb[a], nb[b])) {
                closed.add(g.weight(m, nb[a]) + g.weight(m, nb[b]));
            }
        }
    }
    return closed.value() / (g.strength(m) * static_cast<double>(k - 1));
}

double global_clustering(const MobilityGraph& g)
{
    CompensatedSum closed;
    CompensatedSum all;
    bool any = false;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        const auto& nb = g.neighbors(v);
        for (std::size_t a = 0; a < nb.size(); ++a) {
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                const double w = 0.5 * (g.weight(v, nb[a]) + g.weight(v, nb[b]));
                all.add(w);
                any = true;
                if (g.linked(nb[a], nb[b])) {
                    closed.add(w);
                }
            }
        }
    }
    if (!any) {
        fail(Errc::no_triplets, "graph has no connected triplet");
    }
    return closed.value() / all.value();
}

double modularity(const MobilityGraph& g, const Partition& p)
{
    const std::size_t n = g.node_count();
    if (p.assignment.size() != n) {
        fail(Errc::partial_partition, "partition covers " + std::to_string(p.assignment.size()) + " of " +
                                          std::to_string(n) + " nodes");
    }
    int communities = 0;
    for (int c : p.assignment) {
        if (c < 0) {
            fail(Errc::partial_partition, "negative community id");
        }
        communities = std::max(communities, c + 1);
    }
    const double two_m = g.total_strength();
    if (!(two_m > 0.0)) {
        fail(Errc::empty_graph, "modularity of a graph without edges");
    }
    std::vector<CompensatedSum> internal(static_cast<std::size_t>(communities));
    std::vector<CompensatedSum> total(static_cast<std::size_t>(communities));
    for (std::size_t m = 0; m < n; ++m) {
        const auto cm = static_cast<std::size_t>(p.assignment[m]);
        total[cm].add(g.strength(m));
        for (auto k : g.neighbors(m)) {
            if (p.assignment[k] == p.assignment[m]) {
                internal[cm].add(g.weight(m, k));
            }
        }
    }
    CompensatedSum q;
    for (std::size_t c = 0; c < internal.size(); ++c) {
        const double a = total[c].value() / two_m;
        q.add(internal[c].value() / two_m - a * a);
    }
    return q.value();
}

} // namespace mobiflow
