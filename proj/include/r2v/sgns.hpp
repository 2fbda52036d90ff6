#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "r2v/graph.hpp"
#include "r2v/residual.hpp"
#include "r2v/transition.hpp"

namespace r2v {

struct NoiseDistribution {
    std::vector<double> probs;  // strictly positive, sums to 1
    double gamma = 1.0;

    static NoiseDistribution uniform(std::size_t n);
    // p0(l) proportional to freq(l)^gamma.
    static NoiseDistribution from_frequencies(const std::vector<double>& freq,
                                              double gamma);
};

enum class Objective { negative_sampling, nce };

struct TrainerConfig {
    int dim = 64;
    int negatives = 5;
    int epochs = 5;
    double lr_start = 0.025;
    double lr_end = 0.0001;
    Objective objective = Objective::negative_sampling;
    std::uint64_t seed = 1;
};

// Per-pair logistic losses shared by the trainer and the gradient tests.
// For negative sampling the logit is u.v; for NCE it is u.v - ln p0(j) - c
// with c a learned scalar.
double pair_logit(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double c,
                  double ln_p0, Objective obj);
double pair_loss(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double c,
                 bool positive, double ln_p0, Objective obj);
// Gradients of pair_loss w.r.t. u, v and c.
void pair_gradient(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double c,
                   bool positive, double ln_p0, Objective obj,
                   Eigen::VectorXd& gu, Eigen::VectorXd& gv, double& gc);

// O(1) categorical sampling (Vose alias method).
class AliasTable {
  public:
    explicit AliasTable(const std::vector<double>& probs);
    std::size_t sample(std::mt19937_64& rng) const;

  private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

// SGD over forward-window center/context pairs with k noise negatives.
// Single-threaded, deterministic given cfg.seed. Throws if the epoch loss
// increases three epochs in a row.
Embedding train(const WalkCorpus& corpus, int T, const NoiseDistribution& noise,
                const TrainerConfig& cfg);

// P(j|i) = p0(j) exp(u_i.v_j) / sum_j' p0(j') exp(u_i.v_j').
std::vector<double> model_distribution(const Embedding& e,
                                       const NoiseDistribution& noise, NodeId i);

struct KlReport {
    std::size_t corpus_pairs = 0;
    double mean_kl = 0.0;
};

// Trains at increasing corpus sizes and reports mean_i KL(P^_d(.|i) || model).
std::vector<KlReport> verify_unbiasedness(const Graph& g,
                                          const NoiseDistribution& noise,
                                          const TrainerConfig& cfg,
                                          const std::vector<std::size_t>& corpus_sizes,
                                          int T, std::uint64_t seed);

}  // namespace r2v
