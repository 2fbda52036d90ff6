#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "r2v/graph.hpp"
#include "r2v/null_model.hpp"
#include "r2v/residual.hpp"

namespace r2v {

struct LinkPredictionSplit {
    Graph train_graph;  // connected
    std::vector<std::pair<NodeId, NodeId>> positives;  // removed edges
    std::vector<std::pair<NodeId, NodeId>> negatives;  // non-edges of the original
    double rho = 0.5;
    std::uint64_t seed = 0;
    bool capped = false;  // fewer removable edges than round(rho * M)
};

// MST edges (seeded Kruskal) are protected; round(rho*M) of the rest are
// removed. Negatives are sampled uniformly from non-edges of the original
// graph, self-pairs excluded, |negatives| = |positives|.
LinkPredictionSplit split_for_link_prediction(const Graph& g, double rho,
                                              std::uint64_t seed);

// score(i,j) = u_i.u_j + z_i + z_j; offsets=nullptr means z=0.
std::vector<double> link_scores(const Embedding& e,
                                const std::vector<double>* offsets,
                                std::span<const std::pair<NodeId, NodeId>> pairs);

// z_j = ln(d_j / 2m), the config-null log-baseline.
std::vector<double> log_degree_offsets(const Graph& g);

// Pairwise-offset variant z(i,j) = ln P0(j|i) for a dcSBM null.
std::vector<double> link_scores_pairwise(const Embedding& e,
                                         const BaselineModel& base, int T,
                                         std::span<const std::pair<NodeId, NodeId>> pairs);

// Mann-Whitney AUC, ties half-credited; O(n log n).
double auc_roc(std::span<const double> positive_scores,
               std::span<const double> negative_scores);

struct DegreeSpec {
    bool power_law = true;
    double regular_degree = 10.0;
    double tau = 3.0;
    double d_min = 5.0;
    double d_max = 100.0;
};

struct PlantedPartition {
    Graph graph;
    NodeGrouping labels;
    double mu = 0.0;
    DegreeSpec degree_spec;
};

// dcSBM planted partition: (1-mu) of each group's stub mass stays within the
// group, mu is spread across other groups (symmetrized so detailed balance
// holds exactly). Power-law degrees drawn from x^(-tau) on [d_min, d_max].
PlantedPartition generate_planted_partition(std::size_t n, GroupId B, double mu,
                                            const DegreeSpec& spec,
                                            std::uint64_t seed);

// The fitted BaselineModel a planted partition samples from (exposed for
// Monte-Carlo tests).
BaselineModel planted_partition_model(std::size_t n, GroupId B, double mu,
                                      const DegreeSpec& spec, std::uint64_t seed);

// AUC over cosine similarities of U rows for n_pairs sampled node pairs;
// positive class = same label.
double community_similarity_auc(const Embedding& e, const NodeGrouping& labels,
                                std::size_t n_pairs, std::uint64_t seed);

}  // namespace r2v
