// quint: command-line surface for the sketch toolkit.
//
// Subcommands: gen, embed, estimate {cn,degree,edge}, linkpred, nodeclass,
// verify, bench. Machine-readable output is a single JSON object on stdout;
// human logs go to stderr. Exit codes: 0 ok, 1 usage, 2 I/O or format error,
// 3 verification failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "quint/embedding.hpp"
#include "quint/estimators.hpp"
#include "quint/eval.hpp"
#include "quint/graph.hpp"
#include "quint/synth.hpp"
#include "quint/verify.hpp"

namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerification = 3;

/// Removes declared output files unless dismissed, so failures never leave
/// partial artifacts behind.
class OutputGuard {
public:
    void track(const std::filesystem::path& p) { paths_.push_back(p); }
    void dismiss() { paths_.clear(); }
    ~OutputGuard() {
        for (const auto& p : paths_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
    }

private:
    std::vector<std::filesystem::path> paths_;
};

unsigned default_threads() {
    if (const char* env = std::getenv("QUINT_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

quint::SimilarityKind parse_similarity(const std::string& name) {
    if (name == "estcn" || name == "inner") return quint::SimilarityKind::inner;
    if (name == "cosine") return quint::SimilarityKind::cosine;
    if (name == "l1") return quint::SimilarityKind::l1;
    if (name == "l2") return quint::SimilarityKind::l2;
    throw quint::ParameterError("unknown similarity kind: " + name);
}

quint::FeatureSource parse_source(const std::string& name) {
    if (name == "quint") return quint::FeatureSource::quint;
    if (name == "uncompressed") return quint::FeatureSource::uncompressed;
    throw quint::ParameterError("unknown feature source: " + name);
}

struct DimFlags {
    std::optional<std::uint64_t> dim;
    std::optional<double> rho;
};

void add_dim_flags(CLI::App* cmd, DimFlags& flags) {
    auto* dim_opt = cmd->add_option("--dim", flags.dim, "explicit embedding dimension");
    auto* rho_opt =
        cmd->add_option("--rho", flags.rho,
                        "error probability; dimension comes from the formula");
    dim_opt->excludes(rho_opt);
    rho_opt->excludes(dim_opt);
}

ordered_json check_to_json(const quint::verify::BoundCheck& c) {
    ordered_json j;
    j["name"] = c.name;
    j["observed"] = c.observed;
    j["bound"] = c.bound;
    j["slack"] = c.slack;
    j["pass"] = c.pass;
    j["trials"] = c.trials;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

int run_gen(const std::string& model, std::uint32_t n, std::uint32_t communities,
            double p_intra, double p_inter, double tau, std::uint32_t max_degree_cap,
            std::uint64_t seed, const std::string& output, const std::string& labels_path) {
    quint::SynthConfig cfg;
    if (model == "planted") {
        cfg.model = quint::SynthModel::planted_partition;
    } else if (model == "powerlaw") {
        cfg.model = quint::SynthModel::power_law_config;
    } else {
        throw quint::ParameterError("unknown model: " + model);
    }
    cfg.n = n;
    cfg.communities = communities;
    cfg.intra_probability = p_intra;
    cfg.inter_probability = p_inter;
    cfg.tau = tau;
    cfg.max_degree_cap = max_degree_cap;
    cfg.seed = seed;

    OutputGuard guard;
    guard.track(output);
    guard.track(output + ".ids");
    const quint::SynthResult result = quint::generate(cfg);
    quint::save_edge_list_file(result.graph, output);

    bool labels_written = false;
    if (!labels_path.empty()) {
        guard.track(labels_path);
        std::ofstream out(labels_path);
        if (!out) throw quint::Error("cannot write labels file: " + labels_path);
        for (quint::NodeId u = 0; u < result.graph.node_count(); ++u) {
            const auto& lst = result.labels.labels[u];
            if (lst.empty()) continue;
            out << result.graph.external_id(u) << '\t';
            for (std::size_t k = 0; k < lst.size(); ++k) {
                out << (k ? "," : "") << lst[k];
            }
            out << '\n';
        }
        labels_written = true;
    }
    guard.dismiss();

    ordered_json j;
    j["task"] = "gen";
    j["model"] = model;
    j["n"] = result.graph.node_count();
    j["edges"] = result.graph.edge_count();
    j["psi"] = quint::max_degree(result.graph).psi;
    j["seed"] = seed;
    j["output"] = output;
    j["labels_written"] = labels_written;
    std::cout << j.dump() << std::endl;
    return kExitOk;
}

int run_embed(const std::string& input, const std::string& output, const DimFlags& dims,
              std::uint64_t seed, unsigned threads) {
    const quint::Graph g = quint::load_edge_list_file(input);
    const quint::Sparsity psi = quint::max_degree(g);
    std::uint64_t d;
    if (dims.dim) {
        d = *dims.dim;
    } else if (dims.rho) {
        d = quint::compute_dimension(psi, *dims.rho);
    } else {
        throw quint::ParameterError("either --dim or --rho is required");
    }

    const auto t0 = Clock::now();
    quint::EmbeddingSet es = quint::embed_graph(g, d, seed, threads);
    const double compression_time =
        std::chrono::duration<double>(Clock::now() - t0).count();
    if (dims.rho) es.rho = *dims.rho;

    OutputGuard guard;
    guard.track(output);
    quint::save_embeddings_file(es, output);
    guard.dismiss();

    ordered_json j;
    j["task"] = "embed";
    j["n"] = g.node_count();
    j["edges"] = g.edge_count();
    j["psi"] = psi.psi;
    j["dim"] = d;
    j["seed"] = seed;
    if (dims.rho) {
        j["rho"] = *dims.rho;
    } else {
        j["rho"] = nullptr;
    }
    j["compression_time_s"] = compression_time;
    j["output"] = output;
    std::cout << j.dump() << std::endl;
    return kExitOk;
}

int run_estimate_cn(const std::string& emb, std::uint32_t i, std::uint32_t j) {
    const quint::EmbeddingSet es = quint::load_embeddings_file(emb);
    if (i >= es.node_count() || j >= es.node_count()) {
        throw quint::ParameterError("node id out of range for the sketch file");
    }
    const quint::CnEstimate e =
        quint::estimate_common_neighbors(es.sketches[i], es.sketches[j], es.d);
    ordered_json out;
    out["task"] = "estimate_cn";
    out["i"] = i;
    out["j"] = j;
    out["estimate"] = e.value;
    out["clamped"] = e.clamped();
    out["raw_overlap"] = e.raw_overlap;
    out["deg_i_hat"] = e.deg_i_hat;
    out["deg_j_hat"] = e.deg_j_hat;
    std::cout << out.dump() << std::endl;
    return kExitOk;
}

int run_estimate_degree(const std::string& emb, std::optional<std::uint32_t> node) {
    const quint::EmbeddingSet es = quint::load_embeddings_file(emb);
    ordered_json out;
    out["task"] = "estimate_degree";
    if (node) {
        if (*node >= es.node_count()) {
            throw quint::ParameterError("node id out of range for the sketch file");
        }
        out["node"] = *node;
        out["estimate"] = quint::estimate_degree(es.sketches[*node], es.d);
    } else {
        std::vector<double> all;
        all.reserve(es.node_count());
        for (const auto& s : es.sketches) {
            all.push_back(quint::estimate_degree(s, es.d));
        }
        out["estimates"] = all;
    }
    std::cout << out.dump() << std::endl;
    return kExitOk;
}

int run_estimate_edge(const std::string& emb, std::uint32_t i, std::uint32_t j) {
    const quint::EmbeddingSet es = quint::load_embeddings_file(emb);
    if (i >= es.node_count() || j >= es.node_count()) {
        throw quint::ParameterError("node id out of range for the sketch file");
    }
    const quint::NodeMapper mapper = es.mapper();
    ordered_json out;
    out["task"] = "estimate_edge";
    out["i"] = i;
    out["j"] = j;
    out["present"] = quint::estimate_edge(es.sketches[i], es.sketches[j], i, j, mapper);
    std::cout << out.dump() << std::endl;
    return kExitOk;
}

int run_linkpred(const std::string& input, const DimFlags& dims, std::uint64_t seed,
                 const std::string& similarity, const std::string& source,
                 double test_fraction, unsigned threads,
                 const quint::LogisticHyper& hyper) {
    const quint::Graph g = quint::load_edge_list_file(input);
    quint::EvalConfig cfg;
    cfg.dim = dims.dim;
    cfg.rho = dims.rho;
    cfg.seed = seed;
    cfg.similarity = parse_similarity(similarity);
    cfg.source = parse_source(source);
    cfg.test_fraction = test_fraction;
    cfg.threads = threads;
    cfg.hyper = hyper;
    if (cfg.source == quint::FeatureSource::quint && !cfg.dim && !cfg.rho) {
        throw quint::ParameterError("either --dim or --rho is required");
    }
    const quint::EvalReport report = quint::run_link_prediction(g, cfg);
    std::cout << report.to_json() << std::endl;
    return kExitOk;
}

int run_nodeclass(const std::string& input, const std::string& labels_path,
                  const DimFlags& dims, std::uint64_t seed, const std::string& source,
                  double train_fraction, unsigned repeats, unsigned threads,
                  const quint::LogisticHyper& hyper) {
    const quint::Graph g = quint::load_edge_list_file(input);
    const quint::LabelSet labels = quint::load_labels_file(labels_path, g);
    quint::EvalConfig cfg;
    cfg.dim = dims.dim;
    cfg.rho = dims.rho;
    cfg.seed = seed;
    cfg.source = parse_source(source);
    cfg.train_fraction = train_fraction;
    cfg.repeats = repeats;
    cfg.threads = threads;
    cfg.hyper = hyper;
    if (cfg.source == quint::FeatureSource::quint && !cfg.dim && !cfg.rho) {
        throw quint::ParameterError("either --dim or --rho is required");
    }
    const quint::EvalReport report = quint::run_node_classification(g, labels, cfg);
    std::cout << report.to_json() << std::endl;
    return kExitOk;
}

int run_verify(std::uint32_t psi, double rho, double delta, std::size_t trials,
               std::uint64_t seed) {
    const auto checks = quint::verify::run_suite(psi, rho, delta, trials, seed);
    bool all_pass = true;
    ordered_json rows = ordered_json::array();
    for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        rows.push_back(check_to_json(c));
        std::cerr << (c.pass ? "pass" : "FAIL") << "  " << c.name
                  << "  observed=" << c.observed << " bound=" << c.bound
                  << " slack=" << c.slack << " trials=" << c.trials
                  << (c.note.empty() ? "" : "  (" + c.note + ")") << '\n';
    }
    ordered_json j;
    j["task"] = "verify";
    j["psi"] = psi;
    j["rho"] = rho;
    j["delta"] = delta;
    j["trials"] = trials;
    j["seed"] = seed;
    j["checks"] = rows;
    j["all_pass"] = all_pass;
    std::cout << j.dump() << std::endl;
    return all_pass ? kExitOk : kExitVerification;
}

quint::SynthConfig planted_with_edges(std::uint32_t n, std::uint64_t target_edges,
                                      std::uint64_t seed) {
    // Community size tracks the average degree so within-community density
    // stays high as the sweep grows; 90% of edges stay intra (mixing ~0.1).
    const double avg_degree = 2.0 * static_cast<double>(target_edges) / n;
    const std::uint32_t size = std::max<std::uint32_t>(
        50, static_cast<std::uint32_t>(2.5 * avg_degree));
    const std::uint32_t communities = std::max<std::uint32_t>(1, n / size);
    const double block = static_cast<double>(n) / communities;
    const double intra_pairs = communities * block * (block - 1.0) / 2.0;
    const double all_pairs = static_cast<double>(n) * (n - 1.0) / 2.0;
    const double cross_pairs = std::max(1.0, all_pairs - intra_pairs);
    const double target = static_cast<double>(target_edges);
    quint::SynthConfig cfg;
    cfg.model = quint::SynthModel::planted_partition;
    cfg.n = n;
    cfg.communities = communities;
    cfg.intra_probability =
        std::min(1.0, (communities == 1 ? target : 0.9 * target) / intra_pairs);
    cfg.inter_probability = std::min(1.0, 0.1 * target / cross_pairs);
    cfg.seed = seed;
    return cfg;
}

int run_bench(std::uint64_t seed, std::uint64_t dim, unsigned threads,
              const std::vector<std::uint64_t>& node_sweep,
              const std::vector<std::uint64_t>& edge_sweep,
              std::uint32_t edge_sweep_nodes, bool skip_auc) {
    ordered_json rows = ordered_json::array();

    auto run_row = [&](std::uint32_t n, std::uint64_t target_edges) {
        const quint::SynthConfig cfg = planted_with_edges(n, target_edges, seed);
        const quint::SynthResult synth = quint::generate(cfg);
        const quint::Graph& g = synth.graph;

        const auto t0 = Clock::now();
        const quint::EmbeddingSet es = quint::embed_graph(g, dim, seed, threads);
        const double embed_s = std::chrono::duration<double>(Clock::now() - t0).count();
        (void)es;

        ordered_json row;
        row["n"] = g.node_count();
        row["edges"] = g.edge_count();
        row["dim"] = dim;
        row["compression_time_s"] = embed_s;
        row["edges_per_s"] = static_cast<double>(g.edge_count()) / embed_s;
        if (!skip_auc) {
            quint::EvalConfig ecfg;
            ecfg.dim = dim;
            ecfg.seed = seed;
            ecfg.threads = threads;
            const auto t1 = Clock::now();
            const quint::EvalReport rep = quint::run_link_prediction(g, ecfg);
            row["linkpred_time_s"] =
                std::chrono::duration<double>(Clock::now() - t1).count();
            for (const auto& [k, v] : rep.metrics) row[k] = v;
        }
        std::cerr << "bench row: " << row.dump() << '\n';
        rows.push_back(row);
    };

    for (std::uint64_t n : node_sweep) {
        if (n == 0) continue;  // 0 disables a sweep entry
        run_row(static_cast<std::uint32_t>(n), n * 10);  // average degree 20
    }
    for (std::uint64_t e : edge_sweep) {
        if (e == 0) continue;
        run_row(edge_sweep_nodes, e);
    }

    ordered_json j;
    j["task"] = "bench";
    j["dim"] = dim;
    j["seed"] = seed;
    j["threads"] = threads;
    j["rows"] = rows;
    std::cout << j.dump() << std::endl;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quint: binary node sketches for sparse graphs"};
    app.require_subcommand(1);
    const unsigned env_threads = default_threads();

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic graph");
    std::string gen_model = "planted";
    std::uint32_t gen_n = 0, gen_comm = 4, gen_cap = 0;
    double gen_pin = 0.0, gen_pout = 0.0, gen_tau = 2.0;
    std::uint64_t gen_seed = 0;
    std::string gen_output, gen_labels;
    gen->add_option("--model", gen_model, "planted | powerlaw")->required();
    gen->add_option("--n", gen_n, "node count")->required();
    gen->add_option("--communities", gen_comm, "planted: community count");
    gen->add_option("--p-intra", gen_pin, "planted: intra-community edge probability");
    gen->add_option("--p-inter", gen_pout, "planted: inter-community edge probability");
    gen->add_option("--tau", gen_tau, "powerlaw: degree exponent");
    gen->add_option("--max-degree", gen_cap, "powerlaw: degree cap");
    gen->add_option("--seed", gen_seed, "random seed")->required();
    gen->add_option("--output", gen_output, "edge list output path")->required();
    gen->add_option("--labels", gen_labels, "labels output path");

    // embed
    auto* embed = app.add_subcommand("embed", "sketch every node of a graph");
    std::string embed_input, embed_output;
    DimFlags embed_dims;
    std::uint64_t embed_seed = 0;
    unsigned embed_threads = env_threads;
    embed->add_option("--input", embed_input, "edge list path")->required();
    embed->add_option("--output", embed_output, "sketch file output path")->required();
    add_dim_flags(embed, embed_dims);
    embed->add_option("--seed", embed_seed, "random seed")->required();
    embed->add_option("--threads", embed_threads, "worker threads");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "recover structure from sketches");
    estimate->require_subcommand(1);
    std::string est_emb;
    std::uint32_t est_i = 0, est_j = 0;
    std::optional<std::uint32_t> est_node;
    auto* est_cn = estimate->add_subcommand("cn", "common-neighbor estimate");
    est_cn->add_option("--emb", est_emb, "sketch file")->required();
    est_cn->add_option("--i", est_i, "first node")->required();
    est_cn->add_option("--j", est_j, "second node")->required();
    auto* est_deg = estimate->add_subcommand("degree", "degree estimate");
    est_deg->add_option("--emb", est_emb, "sketch file")->required();
    est_deg->add_option("--node", est_node, "node id (all nodes when omitted)");
    auto* est_edge = estimate->add_subcommand("edge", "edge presence estimate");
    est_edge->add_option("--emb", est_emb, "sketch file")->required();
    est_edge->add_option("--i", est_i, "first node")->required();
    est_edge->add_option("--j", est_j, "second node")->required();

    // linkpred
    auto* linkpred = app.add_subcommand("linkpred", "link-prediction evaluation");
    std::string lp_input, lp_similarity = "estcn", lp_source = "quint";
    DimFlags lp_dims;
    std::uint64_t lp_seed = 0;
    double lp_test_fraction = 0.3;
    unsigned lp_threads = env_threads;
    quint::LogisticHyper lp_hyper;
    linkpred->add_option("--input", lp_input, "edge list path")->required();
    add_dim_flags(linkpred, lp_dims);
    linkpred->add_option("--seed", lp_seed, "random seed")->required();
    linkpred->add_option("--similarity", lp_similarity, "estcn | cosine | l1 | l2");
    linkpred->add_option("--source", lp_source, "quint | uncompressed");
    linkpred->add_option("--test-fraction", lp_test_fraction, "removed edge fraction");
    linkpred->add_option("--threads", lp_threads, "worker threads");
    linkpred->add_option("--l2", lp_hyper.l2, "logistic L2 penalty");
    linkpred->add_option("--lr", lp_hyper.learning_rate, "logistic learning rate");
    linkpred->add_option("--epochs", lp_hyper.epochs, "logistic epochs");

    // nodeclass
    auto* nodeclass = app.add_subcommand("nodeclass", "node-classification evaluation");
    std::string nc_input, nc_labels, nc_source = "quint";
    DimFlags nc_dims;
    std::uint64_t nc_seed = 0;
    double nc_train_fraction = 0.7;
    unsigned nc_repeats = 10, nc_threads = env_threads;
    quint::LogisticHyper nc_hyper;
    nodeclass->add_option("--input", nc_input, "edge list path")->required();
    nodeclass->add_option("--labels", nc_labels, "labels path")->required();
    add_dim_flags(nodeclass, nc_dims);
    nodeclass->add_option("--seed", nc_seed, "random seed")->required();
    nodeclass->add_option("--source", nc_source, "quint | uncompressed");
    nodeclass->add_option("--train-fraction", nc_train_fraction, "labeled train fraction");
    nodeclass->add_option("--repeats", nc_repeats, "random split repetitions");
    nodeclass->add_option("--threads", nc_threads, "worker threads");
    nodeclass->add_option("--l2", nc_hyper.l2, "logistic L2 penalty");
    nodeclass->add_option("--lr", nc_hyper.learning_rate, "logistic learning rate");
    nodeclass->add_option("--epochs", nc_hyper.epochs, "logistic epochs");

    // verify
    auto* verify = app.add_subcommand("verify", "Monte-Carlo theorem suite");
    std::uint32_t v_psi = 0;
    double v_rho = 0.0;
    std::optional<double> v_delta;
    std::size_t v_trials = 0;
    std::uint64_t v_seed = 0;
    verify->add_option("--psi", v_psi, "degree bound")->required();
    verify->add_option("--rho", v_rho, "error probability")->required();
    verify->add_option("--delta", v_delta, "degree-lemma failure probability (default rho)");
    verify->add_option("--trials", v_trials, "pair trials per check")->required();
    verify->add_option("--seed", v_seed, "random seed")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "synthetic scalability sweep");
    std::uint64_t b_seed = 0, b_dim = 1000;
    unsigned b_threads = env_threads;
    std::vector<std::uint64_t> b_nodes = {10000, 20000, 50000, 100000};
    std::vector<std::uint64_t> b_edges = {1000000, 2500000, 5000000, 10000000};
    std::uint32_t b_edge_nodes = 50000;
    bool b_skip_auc = false;
    bench->add_option("--seed", b_seed, "random seed")->required();
    bench->add_option("--dim", b_dim, "embedding dimension");
    bench->add_option("--threads", b_threads, "worker threads");
    bench->add_option("--nodes", b_nodes, "node-count sweep, average degree 20 (0 skips)")
        ->delimiter(',');
    bench->add_option("--edges", b_edges, "edge-count sweep (0 skips)")->delimiter(',');
    bench->add_option("--edge-sweep-nodes", b_edge_nodes, "node count for the edge sweep");
    bench->add_flag("--skip-auc", b_skip_auc, "measure embedding only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return run_gen(gen_model, gen_n, gen_comm, gen_pin, gen_pout, gen_tau,
                           gen_cap, gen_seed, gen_output, gen_labels);
        }
        if (embed->parsed()) {
            return run_embed(embed_input, embed_output, embed_dims, embed_seed,
                             embed_threads);
        }
        if (estimate->parsed()) {
            if (est_cn->parsed()) return run_estimate_cn(est_emb, est_i, est_j);
            if (est_deg->parsed()) return run_estimate_degree(est_emb, est_node);
            if (est_edge->parsed()) return run_estimate_edge(est_emb, est_i, est_j);
        }
        if (linkpred->parsed()) {
            return run_linkpred(lp_input, lp_dims, lp_seed, lp_similarity, lp_source,
                                lp_test_fraction, lp_threads, lp_hyper);
        }
        if (nodeclass->parsed()) {
            return run_nodeclass(nc_input, nc_labels, nc_dims, nc_seed, nc_source,
                                 nc_train_fraction, nc_repeats, nc_threads, nc_hyper);
        }
        if (verify->parsed()) {
            return run_verify(v_psi, v_rho, v_delta.value_or(v_rho), v_trials, v_seed);
        }
        if (bench->parsed()) {
            return run_bench(b_seed, b_dim, b_threads, b_nodes, b_edges, b_edge_nodes,
                             b_skip_auc);
        }
    } catch (const quint::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const quint::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitUsage;
}
