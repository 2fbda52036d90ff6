// residual2vec command-line frontend: embedding, null-model inspection, walk
// simulation, benchmark protocols and graph generation.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "r2v/bench.hpp"
#include "r2v/graph.hpp"
#include "r2v/null_model.hpp"
#include "r2v/residual.hpp"
#include "r2v/rng.hpp"
#include "r2v/transition.hpp"

using json = nlohmann::json;
using namespace r2v;

namespace {

struct CommonOpts {
    std::string input;
    std::string groups_path;
    std::string null_name = "config";
    bool default_group = false;
    int T = 10;
    int K = 64;
    double alpha = 0.5;
    std::string approx = "exact";
    std::size_t n_blocks = 1000;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string output;
};

std::size_t exact_mode_cap() {
    // R2V_MEMORY_CAP_MB gates the dense O(N^2) exact path (~16 bytes/entry).
    if (const char* env = std::getenv("R2V_MEMORY_CAP_MB")) {
        double mb = std::atof(env);
        if (mb > 0.0)
            return static_cast<std::size_t>(std::sqrt(mb * 1e6 / 16.0));
    }
    return 20000;
}

EdgeListData load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return load_edge_list(in);
}

NodeGrouping load_groups_file(const std::string& path,
                              const std::vector<std::string>& names,
                              bool default_group) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grouping file: " + path);
    return load_grouping(in, names, default_group);
}

NullKind parse_null(const std::string& name) {
    if (name == "erdos-renyi") return NullKind::erdos_renyi;
    if (name == "config") return NullKind::config;
    if (name == "dcsbm") return NullKind::dcsbm;
    throw CLI::ValidationError("--null must be one of erdos-renyi|config|dcsbm");
}

json resolved_config(const CommonOpts& o, const std::string& command) {
    return json{{"command", command}, {"input", o.input},
                {"groups", o.groups_path}, {"null", o.null_name},
                {"T", o.T},           {"K", o.K},
                {"alpha", o.alpha},   {"approx", o.approx},
                {"blocks", o.n_blocks}, {"seed", o.seed},
                {"threads", o.threads}};
}

void write_mapping(const std::string& path, const std::vector<std::string>& names) {
    std::ofstream out(path);
    for (std::size_t i = 0; i < names.size(); ++i)
        out << names[i] << '\t' << i << '\n';
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

// --- stats helpers ------------------------------------------------------

double degree_assortativity(const Graph& g) {
    // Pearson correlation over directed stub pairs (both edge orientations).
    std::vector<double> x, y;
    for (NodeId i = 0; i < g.n(); ++i)
        for (const auto& [j, w] : g.adj[i]) {
            if (i == j) continue;
            x.push_back(g.deg[i]);
            y.push_back(g.deg[j]);
        }
    if (x.empty()) return 0.0;
    double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        cov += (x[k] - mx) * (y[k] - my);
        vx += (x[k] - mx) * (x[k] - mx);
        vy += (y[k] - my) * (y[k] - my);
    }
    if (vx == 0.0 || vy == 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

double global_clustering(const Graph& g) {
    // transitivity: 3 * triangles / connected triples (unweighted)
    double triangles = 0.0, triples = 0.0;
    for (NodeId i = 0; i < g.n(); ++i) {
        std::vector<NodeId> nb;
        for (const auto& [j, w] : g.adj[i])
            if (j != i) nb.push_back(j);
        double k = static_cast<double>(nb.size());
        triples += k * (k - 1.0) / 2.0;
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b)
                if (g.has_edge(nb[a], nb[b])) triangles += 1.0;
    }
    if (triples == 0.0) return 0.0;
    return triangles / triples;  // each triangle counted once per corner
}

// --- subcommands --------------------------------------------------------

int cmd_embed(const CommonOpts& o, bool export_context, bool export_sigma) {
    auto [g, names] = load_graph_file(o.input);
    if (!is_connected(g))
        throw std::runtime_error("embed requires a connected graph");

    NodeGrouping grouping;
    NullSpec null_spec{parse_null(o.null_name), nullptr};
    if (null_spec.kind == NullKind::dcsbm) {
        if (o.groups_path.empty())
            throw std::runtime_error("--null dcsbm requires --groups");
        grouping = load_groups_file(o.groups_path, names, o.default_group);
        null_spec.grouping = &grouping;
    }
    ApproxSpec approx;
    approx.block = o.approx == "block";
    approx.n_blocks = o.n_blocks;

    Embedding e = residual2vec(g, null_spec, o.T, o.K, approx, o.alpha,
                               substream_seed(o.seed, "svd"), exact_mode_cap());

    std::vector<std::string> header{"r2v embed",
                                    "config: " + resolved_config(o, "embed").dump()};
    std::ofstream file;
    write_embedding_tsv(open_output(file, o.output), e.in_vectors, &names, &header);
    if (!o.output.empty() && o.output != "-") {
        write_mapping(o.output + ".nodes.tsv", names);
        if (export_context) {
            std::ofstream ctx(o.output + ".context.tsv");
            write_embedding_tsv(ctx, e.out_vectors, &names, &header);
        }
        if (export_sigma) {
            std::ofstream sig(o.output + ".sigma.tsv");
            sig.precision(17);
            for (int k = 0; k < e.singular_values.size(); ++k)
                sig << e.singular_values(k) << '\n';
        }
    }
    return 0;
}

int cmd_stats(const CommonOpts& o) {
    auto [g, names] = load_graph_file(o.input);
    json out;
    out["config"] = resolved_config(o, "stats");
    out["n_nodes"] = g.n();
    out["n_edges"] = g.edge_count();
    out["total_weight_2m"] = g.total_weight_2m;
    out["degrees"] = g.deg;
    out["max_degree"] = *std::max_element(g.deg.begin(), g.deg.end());
    out["connected"] = is_connected(g);
    if (is_connected(g)) out["stationary_visit_frequency"] = stationary_visit_frequency(g);
    out["assortativity"] = degree_assortativity(g);
    out["clustering_coefficient"] = global_clustering(g);

    std::ofstream file;
    open_output(file, o.output) << out.dump(2) << '\n';
    return 0;
}

int cmd_walks(const CommonOpts& o, int walkers, int length) {
    auto [g, names] = load_graph_file(o.input);
    WalkCorpus corpus = simulate_walks(g, walkers, length,
                                       substream_seed(o.seed, "walks"));
    std::ofstream file;
    write_corpus(open_output(file, o.output), corpus);
    return 0;
}

int cmd_nullprob(const CommonOpts& o, NodeId node) {
    auto [g, names] = load_graph_file(o.input);
    NodeGrouping grouping;
    NullSpec null_spec{parse_null(o.null_name), nullptr};
    if (null_spec.kind == NullKind::dcsbm) {
        grouping = load_groups_file(o.groups_path, names, o.default_group);
        null_spec.grouping = &grouping;
    }
    BaselineModel base = make_baseline(g, null_spec);
    if (node >= g.n()) throw std::runtime_error("--node out of range");
    json out;
    out["config"] = resolved_config(o, "nullprob");
    out["node"] = node;
    out["baseline_row"] = baseline_row(base, node, o.T);
    std::ofstream file;
    open_output(file, o.output) << out.dump(2) << '\n';
    return 0;
}

json run_record(const std::string& task, const std::string& method,
                const std::string& graph_name, const json& params,
                std::uint64_t seed, double auc, double wall_ms) {
    return json{{"task", task},   {"method", method}, {"graph", graph_name},
                {"params", params}, {"seed", seed},   {"auc", auc},
                {"wall_time_ms", wall_ms}};
}

int cmd_linkpred(const CommonOpts& o, double rho, int n_seeds) {
    auto [g, names] = load_graph_file(o.input);
    std::ofstream file;
    std::ostream& out = open_output(file, o.output);

    json params = resolved_config(o, "linkpred");
    params["rho"] = rho;
    for (int s = 0; s < n_seeds; ++s) {
        std::uint64_t seed = substream_seed(o.seed, "linkpred", s);
        auto t0 = std::chrono::steady_clock::now();

        LinkPredictionSplit split = split_for_link_prediction(g, rho, seed);
        NullSpec null_spec{parse_null(o.null_name), nullptr};
        NodeGrouping grouping;
        if (null_spec.kind == NullKind::dcsbm) {
            grouping = load_groups_file(o.groups_path, names, o.default_group);
            null_spec.grouping = &grouping;
        }
        ApproxSpec approx;
        approx.block = o.approx == "block";
        approx.n_blocks = o.n_blocks;
        Embedding e = residual2vec(split.train_graph, null_spec, o.T, o.K, approx,
                                   o.alpha, substream_seed(seed, "svd"),
                                   exact_mode_cap());

        auto offsets = log_degree_offsets(split.train_graph);
        auto pos_off = link_scores(e, &offsets, split.positives);
        auto neg_off = link_scores(e, &offsets, split.negatives);
        auto pos_raw = link_scores(e, nullptr, split.positives);
        auto neg_raw = link_scores(e, nullptr, split.negatives);
        double wall = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        out << run_record("linkpred", "r2v-" + o.null_name + "+offset", o.input,
                          params, seed, auc_roc(pos_off, neg_off), wall)
            << '\n';
        out << run_record("linkpred", "r2v-" + o.null_name, o.input, params, seed,
                          auc_roc(pos_raw, neg_raw), wall)
            << '\n';
    }
    return 0;
}

int cmd_commbench(const CommonOpts& o, std::size_t n_pairs, int n_seeds) {
    auto [g, names] = load_graph_file(o.input);
    if (o.groups_path.empty())
        throw std::runtime_error("commbench requires --groups with community labels");
    NodeGrouping labels = load_groups_file(o.groups_path, names, o.default_group);

    std::ofstream file;
    std::ostream& out = open_output(file, o.output);
    json params = resolved_config(o, "commbench");
    params["n_pairs"] = n_pairs;
    for (int s = 0; s < n_seeds; ++s) {
        std::uint64_t seed = substream_seed(o.seed, "commbench", s);
        auto t0 = std::chrono::steady_clock::now();
        NullSpec null_spec{parse_null(o.null_name), nullptr};
        if (null_spec.kind == NullKind::dcsbm) null_spec.grouping = &labels;
        ApproxSpec approx;
        approx.block = o.approx == "block";
        approx.n_blocks = o.n_blocks;
        Embedding e = residual2vec(g, null_spec, o.T, o.K, approx, o.alpha,
                                   substream_seed(seed, "svd"), exact_mode_cap());
        double auc = community_similarity_auc(e, labels, n_pairs,
                                              substream_seed(seed, "pairs"));
        double wall = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        out << run_record("commbench", "r2v-" + o.null_name, o.input, params, seed,
                          auc, wall)
            << '\n';
    }
    return 0;
}

int cmd_generate(const CommonOpts& o, std::size_t n, GroupId B, double mu,
                 double tau, double d_min, double d_max, double regular_d) {
    DegreeSpec spec;
    if (regular_d > 0.0) {
        spec.power_law = false;
        spec.regular_degree = regular_d;
    } else {
        spec.tau = tau;
        spec.d_min = d_min;
        spec.d_max = d_max;
    }
    PlantedPartition pp = generate_planted_partition(n, B, mu, spec,
                                                     substream_seed(o.seed, "generate"));
    std::string prefix = o.output.empty() ? "planted" : o.output;
    {
        std::ofstream edges(prefix + ".edges.tsv");
        edges << "# r2v generate\n# config: "
              << resolved_config(o, "generate").dump() << '\n';
        for (NodeId i = 0; i < pp.graph.n(); ++i)
            for (const auto& [j, w] : pp.graph.adj[i])
                if (j >= i) edges << i << '\t' << j << '\t' << w << '\n';
    }
    {
        std::ofstream labels(prefix + ".labels.tsv");
        for (NodeId i = 0; i < pp.graph.n(); ++i)
            labels << i << '\t' << pp.labels.labels[i] << '\n';
    }
    return 0;
}

int cmd_summarize(const std::string& input, const std::string& output,
                  int n_resamples, std::uint64_t seed) {
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open input file: " + input);
    std::map<std::string, std::vector<double>> groups;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json rec = json::parse(line);
        std::string key = rec.value("task", "?") + "," + rec.value("method", "?") +
                          "," + rec.value("graph", "?");
        groups[key].push_back(rec.value("auc", 0.0));
    }
    std::ofstream file;
    std::ostream& out = open_output(file, output);
    out << "task,method,graph,n,mean_auc,ci90_lo,ci90_hi\n";
    auto rng = make_rng(seed, "bootstrap");
    for (const auto& [key, vals] : groups) {
        double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
        std::vector<double> boots(n_resamples);
        std::uniform_int_distribution<std::size_t> pick(0, vals.size() - 1);
        for (auto& b : boots) {
            double s = 0.0;
            for (std::size_t k = 0; k < vals.size(); ++k) s += vals[pick(rng)];
            b = s / vals.size();
        }
        std::sort(boots.begin(), boots.end());
        double lo = boots[static_cast<std::size_t>(0.05 * (n_resamples - 1))];
        double hi = boots[static_cast<std::size_t>(0.95 * (n_resamples - 1))];
        out << key << ',' << vals.size() << ',' << mean << ',' << lo << ',' << hi
            << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"residual2vec: debiased graph embedding via null-model residuals"};
    app.require_subcommand(1);

    CommonOpts o;
    auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
        if (needs_input)
            cmd->add_option("--input", o.input, "edge list file")->required();
        cmd->add_option("--groups", o.groups_path, "node grouping TSV");
        cmd->add_flag("--default-group", o.default_group,
                      "map unlabeled nodes to group 0");
        cmd->add_option("--null", o.null_name, "null model")
            ->check(CLI::IsMember({"erdos-renyi", "config", "dcsbm"}));
        cmd->add_option("--T", o.T, "window size");
        cmd->add_option("--K", o.K, "embedding dimension");
        cmd->add_option("--alpha", o.alpha, "singular value scaling exponent");
        cmd->add_option("--approx", o.approx, "transition mode")
            ->check(CLI::IsMember({"exact", "block"}));
        cmd->add_option("--blocks", o.n_blocks, "block count for --approx block");
        cmd->add_option("--seed", o.seed, "root random seed");
        cmd->add_option("--threads", o.threads, "worker threads (0 = auto)");
        cmd->add_option("--output", o.output, "output path (default stdout)");
    };

    auto* embed = app.add_subcommand("embed", "residual2vec embedding");
    bool export_context = false, export_sigma = false;
    add_common(embed);
    embed->add_flag("--export-context", export_context, "also write context vectors");
    embed->add_flag("--export-sigma", export_sigma, "also write singular values");

    auto* stats = app.add_subcommand("stats", "graph statistics as JSON");
    add_common(stats);

    auto* walks = app.add_subcommand("walks", "simulate random walks");
    int walkers = 10, walk_length = 80;
    add_common(walks);
    walks->add_option("--walkers", walkers, "walkers per node");
    walks->add_option("--length", walk_length, "walk length");

    auto* nullprob = app.add_subcommand("nullprob", "analytic baseline row");
    NodeId node = 0;
    add_common(nullprob);
    nullprob->add_option("--node", node, "center node (dense index)");

    auto* linkpred = app.add_subcommand("linkpred", "link prediction benchmark");
    double rho = 0.5;
    int n_seeds = 1;
    add_common(linkpred);
    linkpred->add_option("--rho", rho, "edge removal fraction");
    linkpred->add_option("--seeds", n_seeds, "number of benchmark seeds");

    auto* commbench = app.add_subcommand("commbench", "community detection benchmark");
    std::size_t n_pairs = 10000;
    add_common(commbench);
    commbench->add_option("--pairs", n_pairs, "sampled node pairs");
    commbench->add_option("--seeds", n_seeds, "number of benchmark seeds");

    auto* generate = app.add_subcommand("generate", "planted partition generator");
    std::size_t gen_n = 1000;
    GroupId gen_B = 2;
    double mu = 0.05, tau = 3.0, d_min = 5.0, d_max = 100.0, regular_d = 0.0;
    bool planted = false;
    add_common(generate, /*needs_input=*/false);
    generate->add_flag("--planted", planted, "planted partition (the only generator)");
    generate->add_option("--n", gen_n, "node count");
    generate->add_option("--B", gen_B, "community count");
    generate->add_option("--mu", mu, "inter-community mixing");
    generate->add_option("--tau", tau, "power-law exponent");
    generate->add_option("--dmin", d_min, "min expected degree");
    generate->add_option("--dmax", d_max, "max expected degree");
    generate->add_option("--regular", regular_d, "use regular degrees instead");

    auto* summarize = app.add_subcommand("summarize",
                                         "JSONL benchmark records -> CSV summary");
    std::string sum_input, sum_output;
    int resamples = 10000;
    std::uint64_t sum_seed = 0;
    summarize->add_option("--input", sum_input, "JSONL records")->required();
    summarize->add_option("--output", sum_output, "CSV output (default stdout)");
    summarize->add_option("--resamples", resamples, "bootstrap resamples");
    summarize->add_option("--seed", sum_seed, "bootstrap seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (embed->parsed()) return cmd_embed(o, export_context, export_sigma);
        if (stats->parsed()) return cmd_stats(o);
        if (walks->parsed()) return cmd_walks(o, walkers, walk_length);
        if (nullprob->parsed()) return cmd_nullprob(o, node);
        if (linkpred->parsed()) return cmd_linkpred(o, rho, n_seeds);
        if (commbench->parsed()) return cmd_commbench(o, n_pairs, n_seeds);
        if (generate->parsed())
            return cmd_generate(o, gen_n, gen_B, mu, tau, d_min, d_max, regular_d);
        if (summarize->parsed())
            return cmd_summarize(sum_input, sum_output, resamples, sum_seed);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
