#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "r2v/graph.hpp"

namespace r2v {

using GroupId = std::uint32_t;

struct NodeGrouping {
    std::vector<GroupId> labels;  // length N, values in [0, n_groups)
    GroupId n_groups = 0;

    std::size_t n() const { return labels.size(); }
};

NodeGrouping single_group(std::size_t n);
NodeGrouping identity_grouping(std::size_t n);

// dcSBM null model fitted from stub counts. block_rows holds P_SBM as a
// sparse row-stochastic B x B matrix; detailed balance D_g P(g,g') =
// D_g' P(g',g) holds by construction.
struct BaselineModel {
    NodeGrouping grouping;
    std::vector<double> group_stubs;  // D_g
    std::vector<std::vector<std::pair<GroupId, double>>> block_rows;
    std::vector<double> node_degrees;
    std::string descriptor;

    std::size_t n_nodes() const { return grouping.n(); }
    GroupId n_groups() const { return grouping.n_groups; }
};

// P_SBM(g,g') = stubs of group g on edges into g' / D_g; a self-loop inside g
// contributes two stubs to the (g,g) count.
BaselineModel fit_dcsbm(const Graph& g, const NodeGrouping& grouping);

// dcSBM with B=1: baseline d_j / 2m.
BaselineModel config_model_baseline(const Graph& g);

// Uniform baseline 1/N (degree-regular single group).
BaselineModel erdos_renyi_baseline(std::size_t n);

// Row g of (1/T) sum_{t=t_start..T} P_SBM^t, dense over groups.
std::vector<double> averaged_block_row(const BaselineModel& m, GroupId g, int T,
                                       int t_start = 1);

// P0(. | i) = (d_j / D_{g_j}) * [(1/T) sum_t P_SBM^t]_{g_i, g_j}.
std::vector<double> baseline_row(const BaselineModel& m, NodeId i, int T);

// Poisson multigraph sample with E[degree of i] = d_i and expected group stub
// counts D_g P_SBM(g,g'). Deterministic given seed.
Graph sample_dcsbm(const BaselineModel& m, std::uint64_t seed);

// Parses `node_id<TAB>group_label`; labels interned in first-seen order.
// Nodes absent from the file go to group 0 when default_group is set,
// otherwise this throws.
NodeGrouping load_grouping(std::istream& in, const std::vector<std::string>& names,
                           bool default_group = false);

}  // namespace r2v
