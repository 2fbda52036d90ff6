#include "r2v/residual.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "r2v/rng.hpp"

namespace r2v {

std::size_t ResidualMatrix::nnz() const {
    std::size_t s = 0;
    for (const auto& r : rows) s += r.size();
    return s;
}

ResidualMatrix residual_matrix(const WindowTransition& pd,
                               const BaselineModel& base) {
    if (pd.n_nodes != base.n_nodes())
        throw std::invalid_argument("transition and baseline node sets differ");

    ResidualMatrix r;
    r.n_nodes = pd.n_nodes;
    r.T = pd.T;
    r.null_descriptor = base.descriptor;
    r.rows.resize(pd.n_nodes);
    for (NodeId i = 0; i < pd.n_nodes; ++i) {
        if (!pd.defined(i)) continue;
        auto p0 = baseline_row(base, i, pd.T);
        for (const auto& [j, p] : pd.rows[i]) {
            if (p <= 0.0) continue;
            if (p0[j] <= 0.0)
                throw std::runtime_error(
                    "baseline probability is zero on observed pair (" +
                    std::to_string(i) + "," + std::to_string(j) + ")");
            double val = std::log(p) - std::log(p0[j]);
            if (val > 0.0) r.rows[i].emplace_back(j, val);
        }
    }
    return r;
}

double residual_pmi(const WindowTransition& pd, const BaselineModel& base,
                    NodeId i, NodeId j) {
    const std::size_t n = pd.n_nodes;
    // Stationary center distribution d/2m, shared by data and null.
    double two_m = std::accumulate(base.node_degrees.begin(),
                                   base.node_degrees.end(), 0.0);
    std::vector<double> pi(n);
    for (NodeId k = 0; k < n; ++k) pi[k] = base.node_degrees[k] / two_m;

    // Marginals of the joint P(i,j) = pi(i) P(j|i); computed explicitly
    // rather than assumed equal to pi.
    std::vector<double> marg_d(n, 0.0), marg_0(n, 0.0);
    for (NodeId c = 0; c < n; ++c) {
        for (const auto& [k, p] : pd.rows[c]) marg_d[k] += pi[c] * p;
        auto p0 = baseline_row(base, c, pd.T);
        for (NodeId k = 0; k < n; ++k) marg_0[k] += pi[c] * p0[k];
    }
    double pdj = 0.0;
    for (const auto& [k, p] : pd.rows[i])
        if (k == j) pdj = p;
    if (pdj <= 0.0) throw std::invalid_argument("P_d(j|i) is zero; PMI undefined");
    double p0j = baseline_row(base, i, pd.T)[j];
    if (p0j <= 0.0 || marg_d[j] <= 0.0 || marg_0[j] <= 0.0)
        throw std::invalid_argument("zero probability in PMI computation");

    double joint_d = pi[i] * pdj;
    double joint_0 = pi[i] * p0j;
    double pmi_d = std::log(joint_d / (pi[i] * marg_d[j]));
    double pmi_0 = std::log(joint_0 / (pi[i] * marg_0[j]));
    return pmi_d - pmi_0;
}

namespace {

Eigen::SparseMatrix<double> to_sparse(const ResidualMatrix& r) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(r.nnz());
    for (NodeId i = 0; i < r.n_nodes; ++i)
        for (const auto& [j, v] : r.rows[i])
            trips.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
    Eigen::SparseMatrix<double> A(static_cast<int>(r.n_nodes),
                                  static_cast<int>(r.n_nodes));
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

void fix_signs(Eigen::MatrixXd& left, Eigen::MatrixXd& right) {
    for (int k = 0; k < left.cols(); ++k) {
        int idx;
        left.col(k).cwiseAbs().maxCoeff(&idx);
        if (left(idx, k) < 0.0) {
            left.col(k) = -left.col(k);
            right.col(k) = -right.col(k);
        }
    }
}

}  // namespace

SvdResult truncated_svd(const ResidualMatrix& r, int K, std::uint64_t seed) {
    const int n = static_cast<int>(r.n_nodes);
    if (K < 1 || K > n)
        throw std::invalid_argument("SVD rank K must be in [1, N]");

    Eigen::SparseMatrix<double> A = to_sparse(r);
    const int sketch = std::min(2 * K, n);

    // Gaussian sketch, then subspace iteration until the singular-value
    // estimates stop moving. Deterministic given seed.
    auto rng = make_rng(seed, "svd-sketch");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd Omega(n, sketch);
    for (int j = 0; j < sketch; ++j)
        for (int i = 0; i < n; ++i) Omega(i, j) = gauss(rng);

    Eigen::MatrixXd Y = A * Omega;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    Eigen::MatrixXd Q =
        qr.householderQ() * Eigen::MatrixXd::Identity(n, sketch);

    Eigen::VectorXd prev_sigma = Eigen::VectorXd::Zero(K);
    const int min_iters = 10, max_iters = 200;
    for (int it = 0; it < max_iters; ++it) {
        Y = A * (A.transpose() * Q);
        qr.compute(Y);
        Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, sketch);
        Eigen::MatrixXd Bt = A.transpose() * Q;  // n x sketch
        Eigen::JacobiSVD<Eigen::MatrixXd> small_svd(
            Bt, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd sigma = small_svd.singularValues().head(K);
        double change = (sigma - prev_sigma).cwiseAbs().maxCoeff();
        prev_sigma = sigma;
        if (it + 1 >= min_iters && change <= 1e-13 * std::max(1.0, sigma(0))) break;
    }

    Eigen::MatrixXd Bt = A.transpose() * Q;  // B^T = A^T Q, n x sketch
    Eigen::JacobiSVD<Eigen::MatrixXd> small_svd(
        Bt, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdResult out;
    out.sigma = small_svd.singularValues().head(K);
    out.right = small_svd.matrixU().leftCols(K);           // right vectors of A
    out.left = Q * small_svd.matrixV().leftCols(K);        // left vectors of A
    fix_signs(out.left, out.right);
    return out;
}

Embedding scale_embedding(const SvdResult& svd, double alpha) {
    const int K = static_cast<int>(svd.sigma.size());
    Embedding e;
    e.alpha = alpha;
    e.singular_values = svd.sigma;
    e.in_vectors = svd.left;
    e.out_vectors = svd.right;
    for (int k = 0; k < K; ++k) {
        double s = svd.sigma(k);
        double fu = s > 0.0 ? std::pow(s, alpha) : 0.0;
        double fv = s > 0.0 ? std::pow(s, 1.0 - alpha) : 0.0;
        e.in_vectors.col(k) *= fu;
        e.out_vectors.col(k) *= fv;
    }
    return e;
}

BaselineModel make_baseline(const Graph& g, const NullSpec& null_spec) {
    switch (null_spec.kind) {
        case NullKind::erdos_renyi:
            return erdos_renyi_baseline(g.n());
        case NullKind::config:
            return config_model_baseline(g);
        case NullKind::dcsbm:
            if (!null_spec.grouping)
                throw std::invalid_argument("dcSBM null requires a node grouping");
            return fit_dcsbm(g, *null_spec.grouping);
    }
    throw std::invalid_argument("unknown null model");
}

Embedding residual2vec(const Graph& g, const NullSpec& null_spec, int T, int K,
                       const ApproxSpec& approx, double alpha, std::uint64_t seed,
                       std::size_t max_nodes_exact) {
    if (!is_connected(g)) throw std::invalid_argument("graph must be connected");
    WindowTransition pd =
        approx.block
            ? block_approx_transition(g, std::min(approx.n_blocks, g.n()), T,
                                      approx.partition)
            : exact_window_transition(g, T, max_nodes_exact);
    BaselineModel base = make_baseline(g, null_spec);
    ResidualMatrix r = residual_matrix(pd, base);
    SvdResult svd = truncated_svd(r, K, substream_seed(seed, "svd"));
    return scale_embedding(svd, alpha);
}

void write_embedding_tsv(std::ostream& out, const Eigen::MatrixXd& vectors,
                         const std::vector<std::string>* names,
                         const std::vector<std::string>* header_lines) {
    if (header_lines)
        for (const auto& h : *header_lines) out << "# " << h << '\n';
    out << "node_id";
    for (int k = 0; k < vectors.cols(); ++k) out << "\tdim_" << k;
    out << '\n';
    out.precision(17);
    for (int i = 0; i < vectors.rows(); ++i) {
        if (names)
            out << (*names)[i];
        else
            out << i;
        for (int k = 0; k < vectors.cols(); ++k) out << '\t' << vectors(i, k);
        out << '\n';
    }
}

}  // namespace r2v
