#include "r2v/null_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "r2v/rng.hpp"

namespace r2v {

NodeGrouping single_group(std::size_t n) {
    return {std::vector<GroupId>(n, 0), 1};
}

NodeGrouping identity_grouping(std::size_t n) {
    NodeGrouping p;
    p.labels.resize(n);
    std::iota(p.labels.begin(), p.labels.end(), 0u);
    p.n_groups = static_cast<GroupId>(n);
    return p;
}

namespace {

void validate_grouping(const Graph& g, const NodeGrouping& grouping) {
    if (grouping.n() != g.n())
        throw std::invalid_argument("grouping does not cover all nodes");
    std::vector<std::size_t> sizes(grouping.n_groups, 0);
    for (auto l : grouping.labels) {
        if (l >= grouping.n_groups)
            throw std::invalid_argument("group label out of range");
        ++sizes[l];
    }
    for (GroupId b = 0; b < grouping.n_groups; ++b)
        if (sizes[b] == 0)
            throw std::invalid_argument("empty group " + std::to_string(b));
}

}  // namespace

BaselineModel fit_dcsbm(const Graph& g, const NodeGrouping& grouping) {
    validate_grouping(g, grouping);
    for (NodeId i = 0; i < g.n(); ++i)
        if (g.deg[i] <= 0.0)
            throw std::invalid_argument("node " + std::to_string(i) +
                                        " has zero degree; dcSBM fit undefined");

    const GroupId B = grouping.n_groups;
    BaselineModel m;
    m.grouping = grouping;
    m.node_degrees = g.deg;
    m.group_stubs.assign(B, 0.0);
    for (NodeId i = 0; i < g.n(); ++i)
        m.group_stubs[grouping.labels[i]] += g.deg[i];

    // Stub counts per ordered group pair; a self-loop contributes two stubs
    // to its own (g,g) cell.
    std::vector<std::map<GroupId, double>> stubs(B);
    for (NodeId i = 0; i < g.n(); ++i) {
        GroupId gi = grouping.labels[i];
        for (const auto& [j, w] : g.adj[i]) {
            if (j < i) continue;
            GroupId gj = grouping.labels[j];
            if (i == j) {
                stubs[gi][gi] += 2.0 * w;
            } else {
                stubs[gi][gj] += w;
                stubs[gj][gi] += w;
            }
        }
    }
    m.block_rows.resize(B);
    for (GroupId b = 0; b < B; ++b) {
        m.block_rows[b].reserve(stubs[b].size());
        for (const auto& [gp, s] : stubs[b])
            m.block_rows[b].emplace_back(gp, s / m.group_stubs[b]);
    }
    m.descriptor = B == 1 ? "config" : "dcsbm(B=" + std::to_string(B) + ")";
    return m;
}

BaselineModel config_model_baseline(const Graph& g) {
    return fit_dcsbm(g, single_group(g.n()));
}

BaselineModel erdos_renyi_baseline(std::size_t n) {
    if (n < 1) throw std::invalid_argument("erdos_renyi_baseline: n must be >= 1");
    BaselineModel m;
    m.grouping = single_group(n);
    m.node_degrees.assign(n, 1.0);
    m.group_stubs = {static_cast<double>(n)};
    m.block_rows = {{{0, 1.0}}};
    m.descriptor = "erdos-renyi";
    return m;
}

std::vector<double> averaged_block_row(const BaselineModel& m, GroupId g, int T,
                                       int t_start) {
    const GroupId B = m.n_groups();
    std::vector<double> cur(B, 0.0), next(B, 0.0), acc(B, 0.0);
    cur[g] = 1.0;
    for (int t = 1; t <= T; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (GroupId b = 0; b < B; ++b) {
            if (cur[b] == 0.0) continue;
            for (const auto& [bp, p] : m.block_rows[b])
                next[bp] += cur[b] * p;
        }
        cur.swap(next);
        if (t >= t_start)
            for (GroupId b = 0; b < B; ++b) acc[b] += cur[b];
    }
    for (auto& x : acc) x /= T;
    return acc;
}

std::vector<double> baseline_row(const BaselineModel& m, NodeId i, int T) {
    if (T < 1) throw std::invalid_argument("window size T must be >= 1");
    auto block = averaged_block_row(m, m.grouping.labels[i], T);
    std::vector<double> row(m.n_nodes());
    for (NodeId j = 0; j < m.n_nodes(); ++j) {
        GroupId gj = m.grouping.labels[j];
        row[j] = m.node_degrees[j] / m.group_stubs[gj] * block[gj];
    }
    return row;
}

Graph sample_dcsbm(const BaselineModel& m, std::uint64_t seed) {
    const GroupId B = m.n_groups();
    const std::size_t n = m.n_nodes();

    // Cumulative degree mass per group, for O(log) endpoint draws.
    std::vector<std::vector<NodeId>> members(B);
    std::vector<std::vector<double>> cum(B);
    for (NodeId i = 0; i < n; ++i) members[m.grouping.labels[i]].push_back(i);
    for (GroupId b = 0; b < B; ++b) {
        cum[b].reserve(members[b].size());
        double s = 0.0;
        for (NodeId i : members[b]) {
            s += m.node_degrees[i];
            cum[b].push_back(s);
        }
    }
    auto rng = make_rng(seed, "sample-dcsbm");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto draw = [&](GroupId b) {
        double x = unif(rng) * cum[b].back();
        auto it = std::upper_bound(cum[b].begin(), cum[b].end(), x);
        std::size_t idx = std::min<std::size_t>(it - cum[b].begin(), cum[b].size() - 1);
        return members[b][idx];
    };

    // Edge counts per group pair are Poisson with mean equal to the fitted
    // stub counts (halved on the diagonal so a self-loop keeps two stubs);
    // endpoints are drawn proportionally to degree within each group.
    std::vector<WeightedEdge> edges;
    for (GroupId b = 0; b < B; ++b) {
        for (const auto& [bp, p] : m.block_rows[b]) {
            if (bp < b) continue;
            double stub_count = m.group_stubs[b] * p;
            double lambda = (bp == b) ? stub_count / 2.0 : stub_count;
            std::poisson_distribution<long> pois(lambda);
            long n_edges = pois(rng);
            for (long e = 0; e < n_edges; ++e) {
                NodeId u = draw(b);
                NodeId v = draw(bp);
                edges.push_back({u, v, 1.0});
            }
        }
    }
    return graph_from_edges(n, edges);
}

NodeGrouping load_grouping(std::istream& in, const std::vector<std::string>& names,
                           bool default_group) {
    std::unordered_map<std::string, NodeId> index;
    for (NodeId i = 0; i < names.size(); ++i) index[names[i]] = i;

    std::vector<GroupId> labels(names.size(), UINT32_MAX);
    std::unordered_map<std::string, GroupId> groups;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string node, label;
        if (!(ls >> node)) continue;
        if (node[0] == '#') continue;
        if (!(ls >> label))
            throw std::runtime_error("grouping parse error at line " +
                                     std::to_string(line_no));
        auto it = index.find(node);
        if (it == index.end()) continue;  // label for a node not in the graph
        auto [git, inserted] = groups.emplace(label, static_cast<GroupId>(groups.size()));
        labels[it->second] = git->second;
    }
    GroupId B = static_cast<GroupId>(groups.size());
    for (NodeId i = 0; i < labels.size(); ++i) {
        if (labels[i] != UINT32_MAX) continue;
        if (!default_group)
            throw std::runtime_error("node `" + names[i] +
                                     "` missing from grouping file (use --default-group "
                                     "to map it to group 0)");
        labels[i] = 0;
        if (B == 0) B = 1;
    }
    return {std::move(labels), B};
}

}  // namespace r2v
