#include "r2v/sgns.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "r2v/rng.hpp"

namespace r2v {

NoiseDistribution NoiseDistribution::uniform(std::size_t n) {
    return {std::vector<double>(n, 1.0 / static_cast<double>(n)), 0.0};
}

NoiseDistribution NoiseDistribution::from_frequencies(const std::vector<double>& freq,
                                                      double gamma) {
    NoiseDistribution nd;
    nd.gamma = gamma;
    nd.probs.resize(freq.size());
    double total = 0.0;
    for (std::size_t i = 0; i < freq.size(); ++i) {
        if (freq[i] <= 0.0)
            throw std::invalid_argument("noise distribution needs positive frequencies");
        nd.probs[i] = std::pow(freq[i], gamma);
        total += nd.probs[i];
    }
    for (auto& p : nd.probs) p /= total;
    return nd;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double log_sigmoid(double x) {
    // numerically stable ln sigma(x)
    return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

}  // namespace

double pair_logit(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double c,
                  double ln_p0, Objective obj) {
    double s = u.dot(v);
    if (obj == Objective::nce) s -= ln_p0 + c;
    return s;
}

double pair_loss(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double c,
                 bool positive, double ln_p0, Objective obj) {
    double s = pair_logit(u, v, c, ln_p0, obj);
    return positive ? -log_sigmoid(s) : -log_sigmoid(-s);
}

void pair_gradient(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double c,
                   bool positive, double ln_p0, Objective obj,
                   Eigen::VectorXd& gu, Eigen::VectorXd& gv, double& gc) {
    double s = pair_logit(u, v, c, ln_p0, obj);
    double g = sigmoid(s) - (positive ? 1.0 : 0.0);  // d loss / d logit
    gu = g * v;
    gv = g * u;
    gc = obj == Objective::nce ? -g : 0.0;
}

AliasTable::AliasTable(const std::vector<double>& probs)
    : prob_(probs.size()), alias_(probs.size()) {
    const std::size_t n = probs.size();
    double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = probs[i] / total * n;

    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i)
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    while (!small.empty() && !large.empty()) {
        std::uint32_t s = small.back(), l = large.back();
        small.pop_back();
        large.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (auto i : large) prob_[i] = 1.0;
    for (auto i : small) prob_[i] = 1.0;
}

std::size_t AliasTable::sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::size_t i = static_cast<std::size_t>(unif(rng) * prob_.size());
    if (i >= prob_.size()) i = prob_.size() - 1;
    return unif(rng) < prob_[i] ? i : alias_[i];
}

namespace {

// Forward-window pairs; the last T positions of each walk are not centers.
std::vector<std::pair<NodeId, NodeId>> extract_pairs(const WalkCorpus& corpus,
                                                     int T) {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (const auto& seq : corpus.sequences)
        for (std::size_t t = 0; t + T < seq.size(); ++t)
            for (int d = 1; d <= T; ++d) pairs.emplace_back(seq[t], seq[t + d]);
    return pairs;
}

}  // namespace

Embedding train(const WalkCorpus& corpus, int T, const NoiseDistribution& noise,
                const TrainerConfig& cfg) {
    if (corpus.sequences.empty()) throw std::invalid_argument("empty corpus");
    if (noise.probs.size() != corpus.n_nodes)
        throw std::invalid_argument("noise distribution size mismatch");

    const std::size_t n = corpus.n_nodes;
    const int K = cfg.dim;
    auto pairs = extract_pairs(corpus, T);

    auto rng = make_rng(cfg.seed, "sgns-train");
    std::uniform_real_distribution<double> init(-0.5 / K, 0.5 / K);
    Eigen::MatrixXd U(n, K), V(n, K);
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < K; ++k) {
            U(i, k) = init(rng);
            V(i, k) = init(rng);
        }
    double c = std::log(static_cast<double>(cfg.negatives));

    AliasTable alias(noise.probs);
    std::vector<double> ln_p0(n);
    for (std::size_t j = 0; j < n; ++j) ln_p0[j] = std::log(noise.probs[j]);

    const std::size_t total_updates =
        std::max<std::size_t>(1, pairs.size() * cfg.epochs);
    std::size_t update = 0;
    int rising_epochs = 0;
    double prev_loss = std::numeric_limits<double>::infinity();

    Eigen::VectorXd u(K), v(K), u_new(K);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(pairs.begin(), pairs.end(), rng);
        double loss = 0.0;
        for (const auto& [ci, cj] : pairs) {
            double lr = cfg.lr_start +
                        (cfg.lr_end - cfg.lr_start) *
                            (static_cast<double>(update) / total_updates);
            ++update;

            auto u_row = U.row(ci);
            u_new = u_row.transpose();
            auto step = [&](NodeId j, bool positive) {
                double s = U.row(ci).dot(V.row(j));
                if (cfg.objective == Objective::nce) s -= ln_p0[j] + c;
                loss += positive ? -log_sigmoid(s) : -log_sigmoid(-s);
                double g = sigmoid(s) - (positive ? 1.0 : 0.0);
                u_new.noalias() -= lr * g * V.row(j).transpose();
                V.row(j).noalias() -= lr * g * U.row(ci);
                if (cfg.objective == Objective::nce) c += lr * g;
            };
            step(cj, true);
            for (int neg = 0; neg < cfg.negatives; ++neg)
                step(static_cast<NodeId>(alias.sample(rng)), false);
            U.row(ci) = u_new.transpose();
        }
        loss /= static_cast<double>(pairs.size());
        rising_epochs = loss > prev_loss ? rising_epochs + 1 : 0;
        if (rising_epochs >= 3)
            throw std::runtime_error(
                "training diverged: loss increased for 3 consecutive epochs "
                "(last epoch loss " + std::to_string(loss) + ")");
        prev_loss = loss;
    }

    Embedding e;
    e.in_vectors = std::move(U);
    e.out_vectors = std::move(V);
    e.alpha = 0.5;
    return e;
}

std::vector<double> model_distribution(const Embedding& e,
                                       const NoiseDistribution& noise, NodeId i) {
    const std::size_t n = e.n();
    std::vector<double> out(n);
    double max_score = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = std::log(noise.probs[j]) + e.in_vectors.row(i).dot(e.out_vectors.row(j));
        max_score = std::max(max_score, out[j]);
    }
    double z = 0.0;
    for (auto& x : out) {
        x = std::exp(x - max_score);
        z += x;
    }
    for (auto& x : out) x /= z;
    return out;
}

std::vector<KlReport> verify_unbiasedness(const Graph& g,
                                          const NoiseDistribution& noise,
                                          const TrainerConfig& cfg,
                                          const std::vector<std::size_t>& corpus_sizes,
                                          int T, std::uint64_t seed) {
    std::vector<KlReport> reports;
    for (std::size_t target_pairs : corpus_sizes) {
        // Pick the walk count so the forward-window pair count lands at the
        // requested corpus size.
        const int walk_length = 81;
        std::size_t pairs_per_walk = static_cast<std::size_t>(walk_length - T) * T;
        int walkers = static_cast<int>(
            std::max<std::size_t>(1, target_pairs / (pairs_per_walk * g.n()) + 1));
        WalkCorpus corpus = simulate_walks(g, walkers, walk_length,
                                           substream_seed(seed, "verify-walks",
                                                          target_pairs));
        Embedding e = train(corpus, T, noise, cfg);
        WindowTransition emp = empirical_window_transition(corpus, T);

        double kl_sum = 0.0;
        std::size_t defined = 0;
        for (NodeId i = 0; i < g.n(); ++i) {
            if (!emp.defined(i)) continue;
            auto model = model_distribution(e, noise, i);
            double kl = 0.0;
            for (const auto& [j, p] : emp.rows[i])
                kl += p * (std::log(p) - std::log(model[j]));
            kl_sum += kl;
            ++defined;
        }
        reports.push_back({static_cast<std::size_t>(corpus.sequences.size()) *
                               pairs_per_walk,
                           kl_sum / static_cast<double>(defined)});
    }
    return reports;
}

}  // namespace r2v
