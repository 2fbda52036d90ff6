#include "r2v/transition.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "r2v/rng.hpp"

namespace r2v {

std::vector<double> WindowTransition::dense_row(NodeId i) const {
    std::vector<double> out(n_nodes, 0.0);
    for (const auto& [j, p] : rows[i]) out[j] = p;
    return out;
}

namespace {

int resolve_threads(int n_threads) {
    if (n_threads > 0) return n_threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n), chunked over threads. Rows are independent so
// any schedule yields identical results.
template <class Fn>
void parallel_rows(std::size_t n, int n_threads, Fn&& fn) {
    int nt = std::min<std::size_t>(resolve_threads(n_threads), n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    std::size_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : threads) th.join();
}

std::vector<std::pair<NodeId, double>> sparsify(const std::vector<double>& dense) {
    std::vector<std::pair<NodeId, double>> out;
    for (NodeId j = 0; j < dense.size(); ++j)
        if (dense[j] != 0.0) out.emplace_back(j, dense[j]);
    return out;
}

}  // namespace

WindowTransition exact_window_transition(const Graph& g, int T,
                                         std::size_t max_nodes, int n_threads) {
    if (T < 1) throw std::invalid_argument("window size T must be >= 1");
    if (!is_connected(g)) throw std::invalid_argument("graph must be connected");
    if (g.n() > max_nodes)
        throw std::invalid_argument(
            "exact window transition needs O(N^2) space; N=" + std::to_string(g.n()) +
            " exceeds the cap of " + std::to_string(max_nodes) +
            " nodes (use the block approximation)");

    TransitionMatrix P = transition_matrix(g);
    WindowTransition wt;
    wt.T = T;
    wt.mode = TransitionMode::exact;
    wt.n_nodes = g.n();
    wt.rows.resize(g.n());

    parallel_rows(g.n(), n_threads, [&](std::size_t i) {
        std::vector<double> cur(g.n(), 0.0), next(g.n(), 0.0), acc(g.n(), 0.0);
        cur[i] = 1.0;
        for (int t = 1; t <= T; ++t) {
            std::fill(next.begin(), next.end(), 0.0);
            for (NodeId k = 0; k < g.n(); ++k) {
                if (cur[k] == 0.0) continue;
                for (const auto& [j, p] : P.rows[k]) next[j] += cur[k] * p;
            }
            cur.swap(next);
            for (NodeId j = 0; j < g.n(); ++j) acc[j] += cur[j];
        }
        for (auto& x : acc) x /= T;
        wt.rows[i] = sparsify(acc);
    });
    return wt;
}

WalkCorpus simulate_walks(const Graph& g, int walkers_per_node, int walk_length,
                          std::uint64_t seed) {
    if (!is_connected(g)) throw std::invalid_argument("graph must be connected");
    if (walkers_per_node < 1 || walk_length < 1)
        throw std::invalid_argument("walkers_per_node and walk_length must be >= 1");

    TransitionMatrix P = transition_matrix(g);
    // Cumulative transition rows for O(log deg) steps.
    std::vector<std::vector<double>> cum(g.n());
    for (NodeId i = 0; i < g.n(); ++i) {
        cum[i].reserve(P.rows[i].size());
        double s = 0.0;
        for (const auto& [j, p] : P.rows[i]) {
            s += p;
            cum[i].push_back(s);
        }
    }
    WalkCorpus corpus;
    corpus.n_nodes = g.n();
    corpus.walkers_per_node = walkers_per_node;
    corpus.walk_length = walk_length;
    corpus.seed = seed;
    corpus.sequences.resize(static_cast<std::size_t>(g.n()) * walkers_per_node);

    for (std::size_t w = 0; w < corpus.sequences.size(); ++w) {
        NodeId start = static_cast<NodeId>(w / walkers_per_node);
        auto rng = make_rng(seed, "walk", w);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        auto& seq = corpus.sequences[w];
        seq.reserve(walk_length);
        NodeId cur = start;
        seq.push_back(cur);
        for (int s = 1; s < walk_length; ++s) {
            double x = unif(rng) * cum[cur].back();
            auto it = std::upper_bound(cum[cur].begin(), cum[cur].end(), x);
            std::size_t idx = std::min<std::size_t>(it - cum[cur].begin(),
                                                    cum[cur].size() - 1);
            cur = P.rows[cur][idx].first;
            seq.push_back(cur);
        }
    }
    return corpus;
}

WindowTransition empirical_window_transition(const WalkCorpus& corpus, int T) {
    if (T < 1) throw std::invalid_argument("window size T must be >= 1");
    if (T >= corpus.walk_length)
        throw std::invalid_argument("window size T must be smaller than walk_length");

    const std::size_t n = corpus.n_nodes;
    std::vector<std::vector<double>> counts(n);
    for (auto& c : counts) c.assign(n, 0.0);
    std::vector<double> totals(n, 0.0);

    // Only centers with a full forward window count, so every center
    // contributes exactly T context observations.
    for (const auto& seq : corpus.sequences) {
        for (std::size_t t = 0; t + T < seq.size(); ++t) {
            NodeId c = seq[t];
            for (int d = 1; d <= T; ++d) {
                counts[c][seq[t + d]] += 1.0;
                totals[c] += 1.0;
            }
        }
    }
    WindowTransition wt;
    wt.T = T;
    wt.mode = TransitionMode::empirical;
    wt.n_nodes = n;
    wt.rows.resize(n);
    wt.row_defined.assign(n, 0);
    for (NodeId i = 0; i < n; ++i) {
        if (totals[i] == 0.0) continue;  // center never observed; row undefined
        wt.row_defined[i] = 1;
        for (auto& x : counts[i]) x /= totals[i];
        wt.rows[i] = sparsify(counts[i]);
    }
    return wt;
}

NodeGrouping degree_binned_partition(const Graph& g, std::size_t n_blocks) {
    std::vector<NodeId> order(g.n());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return g.deg[a] < g.deg[b]; });
    double target = g.total_weight_2m / static_cast<double>(n_blocks);

    NodeGrouping part;
    part.labels.assign(g.n(), 0);
    GroupId cur = 0;
    double mass = 0.0;
    std::size_t remaining = g.n();
    for (NodeId idx : order) {
        // open a new block when the mass target is met, or when every
        // remaining node is needed to keep the later blocks non-empty
        std::size_t unopened = n_blocks - 1 - cur;
        if (cur + 1 < n_blocks &&
            (remaining == unopened || (mass >= target && remaining > unopened))) {
            ++cur;
            mass = 0.0;
        }
        part.labels[idx] = cur;
        mass += g.deg[idx];
        --remaining;
    }
    part.n_groups = cur + 1;
    return part;
}

WindowTransition block_approx_transition(const Graph& g, std::size_t n_blocks,
                                         int T, const NodeGrouping* partition,
                                         int n_threads) {
    if (T < 1) throw std::invalid_argument("window size T must be >= 1");
    if (n_blocks > g.n())
        throw std::invalid_argument("n_blocks exceeds node count");
    if (n_blocks < 1) throw std::invalid_argument("n_blocks must be >= 1");

    NodeGrouping part = partition ? *partition : degree_binned_partition(g, n_blocks);
    BaselineModel model = fit_dcsbm(g, part);
    TransitionMatrix P = transition_matrix(g);
    const GroupId B = part.n_groups;

    // W(g, g') = (1/T) sum_{t=2..T} P_SBM^t, one row per occupied group.
    std::vector<std::vector<double>> W(B);
    parallel_rows(B, n_threads, [&](std::size_t b) {
        W[b] = averaged_block_row(model, static_cast<GroupId>(b), T, 2);
    });

    WindowTransition wt;
    wt.T = T;
    wt.mode = TransitionMode::block_approx;
    wt.n_nodes = g.n();
    wt.rows.resize(g.n());
    parallel_rows(g.n(), n_threads, [&](std::size_t i) {
        const auto& w_row = W[part.labels[i]];
        std::vector<double> row(g.n(), 0.0);
        for (NodeId j = 0; j < g.n(); ++j) {
            GroupId gj = part.labels[j];
            row[j] = g.deg[j] / model.group_stubs[gj] * w_row[gj];
        }
        for (const auto& [j, p] : P.rows[i]) row[j] += p / T;
        wt.rows[i] = sparsify(row);
    });
    return wt;
}

std::vector<double> stationary_visit_frequency(const Graph& g) {
    if (!is_connected(g)) throw std::invalid_argument("graph must be connected");
    std::vector<double> pi(g.n());
    for (NodeId i = 0; i < g.n(); ++i) pi[i] = g.deg[i] / g.total_weight_2m;
    return pi;
}

void write_corpus(std::ostream& out, const WalkCorpus& corpus) {
    for (const auto& seq : corpus.sequences) {
        for (std::size_t k = 0; k < seq.size(); ++k) {
            if (k) out << ' ';
            out << seq[k];
        }
        out << '\n';
    }
}

WalkCorpus read_corpus(std::istream& in) {
    WalkCorpus corpus;
    std::string line;
    NodeId max_id = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<NodeId> seq;
        NodeId id;
        while (ls >> id) {
            seq.push_back(id);
            max_id = std::max(max_id, id);
        }
        if (!seq.empty()) corpus.sequences.push_back(std::move(seq));
    }
    corpus.n_nodes = corpus.sequences.empty() ? 0 : max_id + 1;
    corpus.walk_length =
        corpus.sequences.empty() ? 0 : static_cast<int>(corpus.sequences[0].size());
    return corpus;
}

}  // namespace r2v
