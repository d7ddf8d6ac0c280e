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

#include <cstddef>
#include <string>
#include <vector>

namespace mobiflow {

/// Weighted undirected graph without self-loops. Stored densely: the node
/// sets here are administrative regions (a few hundred at most).
class MobilityGraph {
public:
    MobilityGraph() = default;
    explicit MobilityGraph(std::vector<std::string> nodes);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    std::size_t index_of(const std::string& node) const; // throws UnknownNode

    /// Adds `w > 0` to the weight of edge {m, n}, m != n.
    void add_weight(std::size_t m, std::size_t n, double w);

    double weight(std::size_t m, std::size_t n) const noexcept { return weights_[m * nodes_.size() + n]; }
    bool linked(std::size_t m, std::size_t n) const noexcept { return weight(m, n) > 0.0; }
    const std::vector<std::size_t>& neighbors(std::size_t m) const { return neighbors_.at(m); }
    std::size_t degree(std::size_t m) const { return neighbors_.at(m).size(); }
    double strength(std::size_t m) const;

    /// Sum of all strengths, i.e. twice the total edge weight.
    double total_strength() const;
    std::size_t edge_count() const;

    /// Same topology with every weight multiplied by `factor > 0`.
    MobilityGraph scaled(double factor) const;

private:
    std::vector<std::string> nodes_;
    std::vector<double> weights_;
    std::vector<std::vector<std::size_t>> neighbors_;
};

/// Community assignment with ids dense from zero, numbered in order of the
/// first node that belongs to each community.
struct Partition {
    std::vector<int> assignment;
    int community_count = 0;

    /// Relabels arbitrary labels densely.
    static Partition from_labels(const std::vector<int>& labels);
    static Partition singletons(std::size_t n);
};

struct DendrogramStep {
    int merged_into;
    int merged_from;
    double modularity;
};

struct CommunityResult {
    Partition partition;
    std::vector<DendrogramStep> steps;
    double modularity = 0.0;
};

/// Weighted local clustering of node m: sum over unordered neighbor pairs
/// {n, h} that are themselves linked of (A_mn + A_mh), divided by
/// s_m (k_m - 1). Zero when k_m < 2. Throws UnknownNode.
double local_clustering(const MobilityGraph& g, std::size_t m);

/// Closed-triplet weight over total triplet weight; a triplet centered at v
/// weighs the arithmetic mean of its two ties. Throws NoTriplets.
double global_clustering(const MobilityGraph& g);

/// Newman modularity with weighted strengths as degrees. Throws
/// PartialPartition when the partition does not cover every node and
/// EmptyGraph when the graph carries no weight.
double modularity(const MobilityGraph& g, const Partition& p);

/// Agglomerative greedy maximization: start from singletons, merge the pair
/// with the largest modularity gain (ties to the smaller id pair) while the
/// gain is positive. Throws EmptyGraph for a graph without nodes.
CommunityResult greedy_communities(const MobilityGraph& g);

} // namespace mobiflow
