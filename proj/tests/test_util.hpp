#pragma once

#include <random>
#include <sstream>
#include <vector>

#include "r2v/graph.hpp"
#include "r2v/null_model.hpp"
#include "r2v/rng.hpp"

namespace r2v::testutil {

inline Graph from_pairs(std::size_t n,
                        const std::vector<std::tuple<NodeId, NodeId, double>>& es) {
    std::vector<WeightedEdge> edges;
    for (const auto& [a, b, w] : es) edges.push_back({a, b, w});
    return graph_from_edges(n, edges);
}

inline Graph triangle() { return from_pairs(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}); }

inline Graph path4() { return from_pairs(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}); }

inline Graph star(std::size_t leaves) {
    std::vector<std::tuple<NodeId, NodeId, double>> es;
    for (NodeId l = 1; l <= leaves; ++l) es.emplace_back(0, l, 1.0);
    return from_pairs(leaves + 1, es);
}

inline Graph cycle(std::size_t n) {
    std::vector<std::tuple<NodeId, NodeId, double>> es;
    for (NodeId i = 0; i < n; ++i)
        es.emplace_back(i, static_cast<NodeId>((i + 1) % n), 1.0);
    return from_pairs(n, es);
}

// Random connected graph: a random spanning tree plus extra uniform edges.
inline Graph random_connected(std::size_t n, double extra_edge_factor,
                              std::uint64_t seed) {
    auto rng = make_rng(seed, "test-random-graph");
    std::vector<std::tuple<NodeId, NodeId, double>> es;
    for (NodeId i = 1; i < n; ++i) {
        std::uniform_int_distribution<NodeId> parent(0, i - 1);
        es.emplace_back(parent(rng), i, 1.0);
    }
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    auto n_extra = static_cast<std::size_t>(extra_edge_factor * n);
    for (std::size_t e = 0; e < n_extra; ++e) {
        NodeId a = pick(rng), b = pick(rng);
        if (a == b) continue;
        es.emplace_back(a, b, 1.0);
    }
    return from_pairs(n, es);
}

inline NodeGrouping random_grouping(std::size_t n, GroupId B, std::uint64_t seed) {
    auto rng = make_rng(seed, "test-random-grouping");
    NodeGrouping grp;
    grp.n_groups = B;
    grp.labels.resize(n);
    // round-robin base assignment guarantees nonempty groups, then shuffle
    for (std::size_t i = 0; i < n; ++i)
        grp.labels[i] = static_cast<GroupId>(i % B);
    std::shuffle(grp.labels.begin(), grp.labels.end(), rng);
    return grp;
}

}  // namespace r2v::testutil
