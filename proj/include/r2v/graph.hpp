#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace r2v {

using NodeId = std::uint32_t;

// Sparse weighted undirected graph. Self-loops contribute two stubs to the
// degree, so total_weight() == sum of degrees == 2m.
struct Graph {
    // Per-node neighbor lists, sorted by neighbor id; symmetric. A self-loop
    // (i,i) is stored once in adj[i].
    std::vector<std::vector<std::pair<NodeId, double>>> adj;
    std::vector<double> deg;
    double total_weight_2m = 0.0;

    std::size_t n() const { return adj.size(); }
    std::size_t edge_count() const;  // unique undirected edges (incl. self-loops)
    double weight(NodeId i, NodeId j) const;
    bool has_edge(NodeId i, NodeId j) const { return weight(i, j) > 0.0; }
};

struct WeightedEdge {
    NodeId src;
    NodeId dst;
    double weight;
};

// Accumulates duplicate (i,j) entries; throws on negative weight.
Graph graph_from_edges(std::size_t n_nodes, std::span<const WeightedEdge> edges);

struct EdgeListData {
    Graph graph;
    // names[k] is the original id of dense index k. When all input ids are
    // integers they are relabeled in ascending numeric order.
    std::vector<std::string> names;
};

// Parses `src dst [weight]` lines (whitespace separated, `#` comments
// skipped). With weighted=false the third column is ignored and every line
// counts weight 1.
EdgeListData load_edge_list(std::istream& in, bool weighted = true);

std::vector<double> degrees(const Graph& g);

// Row-stochastic simple-random-walk operator; P(i,i) = 2 w(i,i) / d(i).
struct TransitionMatrix {
    std::vector<std::vector<std::pair<NodeId, double>>> rows;
    std::size_t n() const { return rows.size(); }
};

TransitionMatrix transition_matrix(const Graph& g);

// Seeded Kruskal on unit costs (edge order shuffled by seed). Requires a
// connected graph; returns N-1 edges as (min,max) pairs.
std::vector<std::pair<NodeId, NodeId>> spanning_tree_edges(const Graph& g,
                                                           std::uint64_t seed);

bool is_connected(const Graph& g);
std::size_t component_count(const Graph& g);

// Induced subgraph on the largest connected component, with the map from new
// to original node ids.
std::pair<Graph, std::vector<NodeId>> largest_component(const Graph& g);

}  // namespace r2v
