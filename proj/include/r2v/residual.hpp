#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "r2v/graph.hpp"
#include "r2v/null_model.hpp"
#include "r2v/transition.hpp"

namespace r2v {

// Truncated residual matrix R~(i,j) = max(ln P_d(j|i) - ln P0(j|i), 0).
// Only strictly positive entries are stored.
struct ResidualMatrix {
    std::size_t n_nodes = 0;
    int T = 1;
    std::string null_descriptor;
    std::vector<std::vector<std::pair<NodeId, double>>> rows;

    std::size_t nnz() const;
};

ResidualMatrix residual_matrix(const WindowTransition& pd,
                               const BaselineModel& base);

// Residual PMI via joint distributions P(i,j) = pi(i) P(j|i) with pi = d/2m;
// equals the untruncated ln P_d(j|i) - ln P0(j|i) whenever the null preserves
// the stationary distribution.
double residual_pmi(const WindowTransition& pd, const BaselineModel& base,
                    NodeId i, NodeId j);

struct SvdResult {
    Eigen::MatrixXd left;    // N x K
    Eigen::VectorXd sigma;   // K, non-increasing
    Eigen::MatrixXd right;   // N x K
};

// Top-K singular triplets by randomized subspace iteration (oversampling to
// 2K, power iterations to convergence). Sign convention: the largest-magnitude
// entry of each left vector is positive.
SvdResult truncated_svd(const ResidualMatrix& r, int K,
                        std::uint64_t seed = 0x5eedULL);

struct Embedding {
    Eigen::MatrixXd in_vectors;       // U, N x K
    Eigen::MatrixXd out_vectors;      // V, N x K
    Eigen::VectorXd singular_values;  // may be empty for SGD-trained models
    double alpha = 0.5;

    int dim() const { return static_cast<int>(in_vectors.cols()); }
    std::size_t n() const { return static_cast<std::size_t>(in_vectors.rows()); }
};

// u_ik = sigma_k^alpha phi_left, v_ik = sigma_k^(1-alpha) phi_right.
Embedding scale_embedding(const SvdResult& svd, double alpha = 0.5);

enum class NullKind { erdos_renyi, config, dcsbm };

struct NullSpec {
    NullKind kind = NullKind::config;
    const NodeGrouping* grouping = nullptr;  // required for dcsbm
};

struct ApproxSpec {
    bool block = false;
    std::size_t n_blocks = 1000;
    const NodeGrouping* partition = nullptr;  // optional override for block mode
};

BaselineModel make_baseline(const Graph& g, const NullSpec& null_spec);

// End-to-end residual2vec pipeline.
Embedding residual2vec(const Graph& g, const NullSpec& null_spec, int T = 10,
                       int K = 64, const ApproxSpec& approx = {},
                       double alpha = 0.5, std::uint64_t seed = 0x5eedULL,
                       std::size_t max_nodes_exact = 20000);

// TSV with header `node_id dim_0 ... dim_{K-1}`. Optional names map dense
// indices back to original ids.
void write_embedding_tsv(std::ostream& out, const Eigen::MatrixXd& vectors,
                         const std::vector<std::string>* names = nullptr,
                         const std::vector<std::string>* header_lines = nullptr);

}  // namespace r2v
