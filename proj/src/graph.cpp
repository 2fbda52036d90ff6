#include "r2v/graph.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "r2v/rng.hpp"

namespace r2v {

std::size_t Graph::edge_count() const {
    std::size_t m = 0;
    for (NodeId i = 0; i < adj.size(); ++i)
        for (const auto& [j, w] : adj[i])
            if (j >= i) ++m;
    return m;
}

double Graph::weight(NodeId i, NodeId j) const {
    const auto& row = adj[i];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const auto& e, NodeId x) { return e.first < x; });
    if (it != row.end() && it->first == j) return it->second;
    return 0.0;
}

Graph graph_from_edges(std::size_t n_nodes, std::span<const WeightedEdge> edges) {
    // Accumulate duplicates on canonical (min,max) keys.
    std::map<std::pair<NodeId, NodeId>, double> acc;
    for (const auto& e : edges) {
        if (e.src >= n_nodes || e.dst >= n_nodes)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.weight < 0.0)
            throw std::invalid_argument("negative edge weight");
        if (e.weight == 0.0) continue;
        auto key = std::minmax(e.src, e.dst);
        acc[{key.first, key.second}] += e.weight;
    }
    Graph g;
    g.adj.resize(n_nodes);
    g.deg.assign(n_nodes, 0.0);
    for (const auto& [key, w] : acc) {
        auto [i, j] = key;
        g.adj[i].emplace_back(j, w);
        if (i != j) g.adj[j].emplace_back(i, w);
        g.deg[i] += w;
        g.deg[j] += w;  // self-loop counts two stubs
    }
    for (auto& row : g.adj)
        std::sort(row.begin(), row.end());
    g.total_weight_2m = std::accumulate(g.deg.begin(), g.deg.end(), 0.0);
    return g;
}

namespace {

bool parse_uint(const std::string& s, unsigned long long& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

EdgeListData load_edge_list(std::istream& in, bool weighted) {
    struct RawEdge {
        std::uint32_t src, dst;
        double weight;
    };
    std::vector<RawEdge> raw;
    std::vector<std::string> names;
    std::unordered_map<std::string, std::uint32_t> intern;
    auto intern_id = [&](const std::string& tok) {
        auto [it, inserted] = intern.emplace(tok, static_cast<std::uint32_t>(names.size()));
        if (inserted) names.push_back(tok);
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    bool all_numeric = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string a, b, c;
        if (!(ls >> a)) continue;        // blank line
        if (a[0] == '#') continue;       // comment
        if (!(ls >> b))
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": expected `src dst [weight]`");
        double w = 1.0;
        if (weighted && (ls >> c)) {
            try {
                std::size_t pos = 0;
                w = std::stod(c, &pos);
                if (pos != c.size()) throw std::invalid_argument(c);
            } catch (const std::exception&) {
                throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                         ": bad weight `" + c + "`");
            }
            if (w < 0.0)
                throw std::runtime_error("validation error at line " + std::to_string(line_no) +
                                         ": negative weight");
        }
        unsigned long long tmp;
        if (!parse_uint(a, tmp) || !parse_uint(b, tmp)) all_numeric = false;
        raw.push_back({intern_id(a), intern_id(b), w});
    }

    // Pure-integer inputs are relabeled in ascending numeric order so that
    // 0..N-1 edge lists map to themselves.
    std::vector<std::uint32_t> relabel(names.size());
    std::iota(relabel.begin(), relabel.end(), 0u);
    if (all_numeric && !names.empty()) {
        std::vector<std::uint32_t> order(names.size());
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
            unsigned long long vx = 0, vy = 0;
            parse_uint(names[x], vx);
            parse_uint(names[y], vy);
            return vx < vy;
        });
        std::vector<std::string> sorted_names(names.size());
        for (std::uint32_t rank = 0; rank < order.size(); ++rank) {
            relabel[order[rank]] = rank;
            sorted_names[rank] = names[order[rank]];
        }
        names = std::move(sorted_names);
    }

    std::vector<WeightedEdge> edges;
    edges.reserve(raw.size());
    for (const auto& e : raw)
        edges.push_back({relabel[e.src], relabel[e.dst], e.weight});
    return {graph_from_edges(names.size(), edges), std::move(names)};
}

std::vector<double> degrees(const Graph& g) { return g.deg; }

TransitionMatrix transition_matrix(const Graph& g) {
    TransitionMatrix P;
    P.rows.resize(g.n());
    for (NodeId i = 0; i < g.n(); ++i) {
        if (g.deg[i] <= 0.0)
            throw std::invalid_argument("isolated node " + std::to_string(i) +
                                        " has no transition row");
        P.rows[i].reserve(g.adj[i].size());
        for (const auto& [j, w] : g.adj[i])
            P.rows[i].emplace_back(j, (i == j ? 2.0 * w : w) / g.deg[i]);
    }
    return P;
}

namespace {

struct UnionFind {
    std::vector<NodeId> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    NodeId find(NodeId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(NodeId a, NodeId b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

}  // namespace

std::vector<std::pair<NodeId, NodeId>> spanning_tree_edges(const Graph& g,
                                                           std::uint64_t seed) {
    std::size_t comps = component_count(g);
    if (comps != 1)
        throw std::invalid_argument("graph is disconnected (" + std::to_string(comps) +
                                    " components)");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < g.n(); ++i)
        for (const auto& [j, w] : g.adj[i])
            if (j > i) edges.emplace_back(i, j);  // self-loops never span
    auto rng = make_rng(seed, "spanning-tree");
    std::shuffle(edges.begin(), edges.end(), rng);

    UnionFind uf(g.n());
    std::vector<std::pair<NodeId, NodeId>> tree;
    tree.reserve(g.n() - 1);
    for (const auto& [i, j] : edges)
        if (uf.unite(i, j)) tree.emplace_back(i, j);
    return tree;
}

std::size_t component_count(const Graph& g) {
    if (g.n() == 0) return 0;
    std::vector<std::uint8_t> seen(g.n(), 0);
    std::size_t comps = 0;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < g.n(); ++s) {
        if (seen[s]) continue;
        ++comps;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (const auto& [v, w] : g.adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
    }
    return comps;
}

bool is_connected(const Graph& g) { return component_count(g) <= 1; }

std::pair<Graph, std::vector<NodeId>> largest_component(const Graph& g) {
    std::vector<std::uint32_t> comp(g.n(), UINT32_MAX);
    std::uint32_t n_comp = 0;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < g.n(); ++s) {
        if (comp[s] != UINT32_MAX) continue;
        comp[s] = n_comp;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (const auto& [v, w] : g.adj[u])
                if (comp[v] == UINT32_MAX) {
                    comp[v] = n_comp;
                    stack.push_back(v);
                }
        }
        ++n_comp;
    }
    std::vector<std::size_t> sizes(n_comp, 0);
    for (auto c : comp) ++sizes[c];
    std::uint32_t best = static_cast<std::uint32_t>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

    std::vector<NodeId> to_old;
    std::vector<NodeId> to_new(g.n(), UINT32_MAX);
    for (NodeId i = 0; i < g.n(); ++i)
        if (comp[i] == best) {
            to_new[i] = static_cast<NodeId>(to_old.size());
            to_old.push_back(i);
        }
    std::vector<WeightedEdge> edges;
    for (NodeId i = 0; i < g.n(); ++i) {
        if (comp[i] != best) continue;
        for (const auto& [j, w] : g.adj[i])
            if (j >= i) edges.push_back({to_new[i], to_new[j], w});
    }
    return {graph_from_edges(to_old.size(), edges), std::move(to_old)};
}

}  // namespace r2v
