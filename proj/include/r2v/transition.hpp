#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "r2v/graph.hpp"
#include "r2v/null_model.hpp"

namespace r2v {

enum class TransitionMode { exact, empirical, block_approx };

// Window-averaged walk transition P(j|i) = (1/T) sum_{t=1..T} P^t(i,j),
// stored as sparse rows (explicit zeros dropped).
struct WindowTransition {
    int T = 1;
    TransitionMode mode = TransitionMode::exact;
    std::size_t n_nodes = 0;
    std::vector<std::vector<std::pair<NodeId, double>>> rows;
    std::vector<std::uint8_t> row_defined;  // empirical mode: center observed

    bool defined(NodeId i) const {
        return row_defined.empty() || row_defined[i] != 0;
    }
    // Dense copy of one row.
    std::vector<double> dense_row(NodeId i) const;
};

// Exact rows by repeated sparse multiplication; O(T N M) time, O(N^2) output.
// Refuses graphs larger than max_nodes. n_threads=0 means hardware default.
WindowTransition exact_window_transition(const Graph& g, int T,
                                         std::size_t max_nodes = 20000,
                                         int n_threads = 0);

struct WalkCorpus {
    std::vector<std::vector<NodeId>> sequences;
    std::size_t n_nodes = 0;
    int walkers_per_node = 0;
    int walk_length = 0;
    std::uint64_t seed = 0;
};

// Unbiased simple random walks, walkers_per_node walkers started at every
// node. Each walker draws from an independent substream of `seed`, so the
// corpus is identical regardless of scheduling.
WalkCorpus simulate_walks(const Graph& g, int walkers_per_node, int walk_length,
                          std::uint64_t seed);

// Forward-window pair counts normalized per center. Centers are positions
// with a full T-step forward window.
WindowTransition empirical_window_transition(const WalkCorpus& corpus, int T);

// Hybrid block approximation: the t=1 term is the exact sparse P; terms
// t=2..T go through a B-block dcSBM fitted on g. partition=nullptr selects
// degree-sorted binning into n_blocks groups of roughly equal stub mass.
WindowTransition block_approx_transition(const Graph& g, std::size_t n_blocks,
                                         int T,
                                         const NodeGrouping* partition = nullptr,
                                         int n_threads = 0);

// d_j / 2m, the analytic stationary distribution.
std::vector<double> stationary_visit_frequency(const Graph& g);

// Degree-sorted binning into n_blocks groups of approximately equal stub mass.
NodeGrouping degree_binned_partition(const Graph& g, std::size_t n_blocks);

// word2vec-style corpus: one walk per line, space-separated dense node ids.
void write_corpus(std::ostream& out, const WalkCorpus& corpus);
WalkCorpus read_corpus(std::istream& in);

}  // namespace r2v
