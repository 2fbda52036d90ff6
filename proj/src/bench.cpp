#include "r2v/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "r2v/rng.hpp"

namespace r2v {

LinkPredictionSplit split_for_link_prediction(const Graph& g, double rho,
                                              std::uint64_t seed) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("removal fraction rho must be in (0, 1)");
    if (!is_connected(g)) throw std::invalid_argument("graph must be connected");

    auto mst = spanning_tree_edges(g, substream_seed(seed, "mst"));
    std::set<std::pair<NodeId, NodeId>> protected_edges(mst.begin(), mst.end());

    std::vector<std::pair<NodeId, NodeId>> removable;
    std::size_t m_edges = 0;
    for (NodeId i = 0; i < g.n(); ++i)
        for (const auto& [j, w] : g.adj[i]) {
            if (j < i) continue;
            ++m_edges;
            if (i == j) continue;  // self-loops are never removed
            if (!protected_edges.count({i, j})) removable.emplace_back(i, j);
        }

    std::size_t requested = static_cast<std::size_t>(
        std::llround(rho * static_cast<double>(m_edges)));
    LinkPredictionSplit split;
    split.rho = rho;
    split.seed = seed;
    split.capped = requested > removable.size();
    std::size_t n_remove = std::min(requested, removable.size());

    auto rng = make_rng(seed, "edge-removal");
    std::shuffle(removable.begin(), removable.end(), rng);
    split.positives.assign(removable.begin(), removable.begin() + n_remove);

    std::set<std::pair<NodeId, NodeId>> removed(split.positives.begin(),
                                                split.positives.end());
    std::vector<WeightedEdge> kept;
    for (NodeId i = 0; i < g.n(); ++i)
        for (const auto& [j, w] : g.adj[i]) {
            if (j < i) continue;
            if (!removed.count({i, j})) kept.push_back({i, j, w});
        }
    split.train_graph = graph_from_edges(g.n(), kept);

    // Negatives: uniform non-edges of the ORIGINAL graph, self-pairs excluded.
    auto neg_rng = make_rng(seed, "negatives");
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g.n() - 1));
    std::set<std::pair<NodeId, NodeId>> chosen;
    std::size_t n_simple_edges = 0;  // distinct i<j pairs with an edge
    for (NodeId i = 0; i < g.n(); ++i)
        for (const auto& [j, w] : g.adj[i])
            if (j > i) ++n_simple_edges;
    std::size_t available = g.n() * (g.n() - 1) / 2 - n_simple_edges;
    std::size_t target = std::min(split.positives.size(), available);
    std::size_t attempts = 0;
    const std::size_t max_attempts = 1000 * (target + 1) + 100000;
    while (chosen.size() < target) {
        if (++attempts > max_attempts)
            throw std::runtime_error("could not sample enough non-edges");
        NodeId a = pick(neg_rng), b = pick(neg_rng);
        if (a == b) continue;
        auto key = std::minmax(a, b);
        if (g.has_edge(a, b)) continue;
        chosen.insert({key.first, key.second});
    }
    split.negatives.assign(chosen.begin(), chosen.end());
    return split;
}

std::vector<double> link_scores(const Embedding& e,
                                const std::vector<double>* offsets,
                                std::span<const std::pair<NodeId, NodeId>> pairs) {
    std::vector<double> scores;
    scores.reserve(pairs.size());
    for (const auto& [i, j] : pairs) {
        double s = e.in_vectors.row(i).dot(e.in_vectors.row(j));
        if (offsets) s += (*offsets)[i] + (*offsets)[j];
        scores.push_back(s);
    }
    return scores;
}

std::vector<double> log_degree_offsets(const Graph& g) {
    std::vector<double> z(g.n());
    for (NodeId i = 0; i < g.n(); ++i)
        z[i] = std::log(g.deg[i] / g.total_weight_2m);
    return z;
}

std::vector<double> link_scores_pairwise(const Embedding& e,
                                         const BaselineModel& base, int T,
                                         std::span<const std::pair<NodeId, NodeId>> pairs) {
    std::vector<double> scores;
    scores.reserve(pairs.size());
    for (const auto& [i, j] : pairs) {
        double s = e.in_vectors.row(i).dot(e.in_vectors.row(j));
        s += std::log(baseline_row(base, i, T)[j]);
        s += std::log(baseline_row(base, j, T)[i]);
        scores.push_back(s);
    }
    return scores;
}

double auc_roc(std::span<const double> positive_scores,
               std::span<const double> negative_scores) {
    if (positive_scores.empty() || negative_scores.empty())
        throw std::invalid_argument("AUC needs both score classes nonempty");

    // Mann-Whitney via rank sums, ties half-credited.
    struct Entry {
        double score;
        bool positive;
    };
    std::vector<Entry> all;
    all.reserve(positive_scores.size() + negative_scores.size());
    for (double s : positive_scores) all.push_back({s, true});
    for (double s : negative_scores) all.push_back({s, false});
    std::sort(all.begin(), all.end(),
              [](const Entry& a, const Entry& b) { return a.score < b.score; });

    double rank_sum_pos = 0.0;
    std::size_t idx = 0;
    while (idx < all.size()) {
        std::size_t run = idx;
        while (run < all.size() && all[run].score == all[idx].score) ++run;
        double avg_rank = 0.5 * static_cast<double>(idx + run - 1) + 1.0;  // 1-based
        for (std::size_t k = idx; k < run; ++k)
            if (all[k].positive) rank_sum_pos += avg_rank;
        idx = run;
    }
    double n_pos = static_cast<double>(positive_scores.size());
    double n_neg = static_cast<double>(negative_scores.size());
    double u_stat = rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0;
    return u_stat / (n_pos * n_neg);
}

BaselineModel planted_partition_model(std::size_t n, GroupId B, double mu,
                                      const DegreeSpec& spec, std::uint64_t seed) {
    if (B < 2) throw std::invalid_argument("planted partition needs B >= 2");
    if (mu < 0.0 || mu > 1.0) throw std::invalid_argument("mu must be in [0, 1]");
    if (spec.power_law && (spec.tau <= 1.0 || spec.d_min <= 0.0 ||
                           spec.d_max < spec.d_min))
        throw std::invalid_argument("infeasible power-law degree spec");
    if (!spec.power_law && spec.regular_degree <= 0.0)
        throw std::invalid_argument("regular degree must be positive");

    NodeGrouping labels;
    labels.labels.resize(n);
    labels.n_groups = B;
    for (std::size_t i = 0; i < n; ++i)
        labels.labels[i] = static_cast<GroupId>(i * B / n);  // balanced, contiguous

    // Expected degrees.
    std::vector<double> deg(n);
    if (spec.power_law) {
        // inverse-CDF sample of x^(-tau) truncated to [d_min, d_max]
        auto rng = make_rng(seed, "planted-degrees");
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double a = 1.0 - spec.tau;
        double lo = std::pow(spec.d_min, a), hi = std::pow(spec.d_max, a);
        for (auto& d : deg) d = std::pow(lo + unif(rng) * (hi - lo), 1.0 / a);
    } else {
        std::fill(deg.begin(), deg.end(), spec.regular_degree);
    }

    std::vector<double> D(B, 0.0);
    for (std::size_t i = 0; i < n; ++i) D[labels.labels[i]] += deg[i];
    double two_m = std::accumulate(D.begin(), D.end(), 0.0);

    // Off-diagonal stub counts symmetric by construction: mu * 2m split
    // proportionally to D_g D_g'. Diagonal takes the remainder.
    double off_mass = 0.0;
    for (GroupId a = 0; a < B; ++a)
        for (GroupId b = 0; b < B; ++b)
            if (a != b) off_mass += D[a] * D[b];

    BaselineModel m;
    m.grouping = labels;
    m.node_degrees = deg;
    m.group_stubs = D;
    m.block_rows.resize(B);
    for (GroupId a = 0; a < B; ++a) {
        double row_off = 0.0;
        for (GroupId b = 0; b < B; ++b) {
            if (a == b) continue;
            double e_ab = mu > 0.0 ? mu * two_m * D[a] * D[b] / off_mass : 0.0;
            if (e_ab > 0.0) m.block_rows[a].emplace_back(b, e_ab / D[a]);
            row_off += e_ab;
        }
        double e_aa = D[a] - row_off;
        if (e_aa < -1e-9 * two_m)
            throw std::invalid_argument(
                "infeasible planted partition: group stub mass too imbalanced "
                "for requested mu");
        if (e_aa > 0.0) m.block_rows[a].emplace_back(a, e_aa / D[a]);
        std::sort(m.block_rows[a].begin(), m.block_rows[a].end());
    }
    m.descriptor = "planted(B=" + std::to_string(B) + ",mu=" + std::to_string(mu) + ")";
    return m;
}

PlantedPartition generate_planted_partition(std::size_t n, GroupId B, double mu,
                                            const DegreeSpec& spec,
                                            std::uint64_t seed) {
    BaselineModel m = planted_partition_model(n, B, mu, spec, seed);
    PlantedPartition pp;
    pp.graph = sample_dcsbm(m, substream_seed(seed, "planted-sample"));
    pp.labels = m.grouping;
    pp.mu = mu;
    pp.degree_spec = spec;
    return pp;
}

double community_similarity_auc(const Embedding& e, const NodeGrouping& labels,
                                std::size_t n_pairs, std::uint64_t seed) {
    const std::size_t n = e.n();
    if (labels.n() != n)
        throw std::invalid_argument("label vector does not match embedding");

    Eigen::MatrixXd normed = e.in_vectors;
    for (std::size_t i = 0; i < n; ++i) {
        double norm = normed.row(i).norm();
        if (norm > 0.0) normed.row(i) /= norm;
    }

    auto sample_once = [&](std::uint64_t s, std::vector<double>& pos,
                           std::vector<double>& neg) {
        pos.clear();
        neg.clear();
        auto rng = make_rng(s, "community-pairs");
        std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
        for (std::size_t k = 0; k < n_pairs; ++k) {
            NodeId a = pick(rng), b = pick(rng);
            if (a == b) {
                --k;
                continue;
            }
            double cs = normed.row(a).dot(normed.row(b));
            (labels.labels[a] == labels.labels[b] ? pos : neg).push_back(cs);
        }
    };
    std::vector<double> pos, neg;
    sample_once(seed, pos, neg);
    if (pos.empty() || neg.empty()) {
        sample_once(substream_seed(seed, "resample"), pos, neg);
        if (pos.empty() || neg.empty())
            throw std::runtime_error("a similarity class is empty after resampling");
    }
    return auc_roc(pos, neg);
}

}  // namespace r2v
