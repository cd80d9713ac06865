// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// non-skipped criterion fails. Statistical thresholds marked "pilot" were
// frozen from an independent reference-implementation pilot run before this
// suite was built.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "quint/embedding.hpp"
#include "quint/estimators.hpp"
#include "quint/eval.hpp"
#include "quint/graph.hpp"
#include "quint/rng.hpp"
#include "quint/synth.hpp"
#include "quint/verify.hpp"

namespace {

using namespace quint;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int criterion, bool pass, const std::string& what, double seconds) {
    std::ostringstream line;
    line << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << what
         << "  (" << std::fixed << seconds << "s)";
    std::cout << line.str() << std::endl;
    if (!pass) ++failures;
}

void report_skip(int criterion, const std::string& why) {
    std::cout << "[SKIP] criterion " << criterion << ": " << why << std::endl;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    auto ranks = [&](const std::vector<double>& v) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * (i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    return cov / std::sqrt(va * vb);
}

// ---- criterion 1: exact sketch semantics -------------------------------

void criterion_1() {
    const auto t0 = Clock::now();
    Rng rng(101);
    bool ok = true;
    std::uint64_t bits_checked = 0;
    for (int graph_idx = 0; graph_idx < 100 && ok; ++graph_idx) {
        const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(199));
        const std::uint32_t psi = 1 + static_cast<std::uint32_t>(rng.below(20));
        const Graph g =
            verify::make_bounded_degree_graph(n, psi, n * psi / 4, rng.next());
        const std::uint64_t d = 16 + rng.below(241);
        for (int s = 0; s < 5 && ok; ++s) {
            const EmbeddingSet es = embed_graph(g, d, rng.next());
            const NodeMapper mapper = es.mapper();
            for (NodeId i = 0; i < n && ok; ++i) {
                for (std::uint64_t j = 0; j < d; ++j) {
                    bool expected = false;
                    for (NodeId k : g.neighbors(i)) expected = expected || mapper(k) == j;
                    ++bits_checked;
                    if (es.sketches[i].test(j) != expected) {
                        ok = false;
                        break;
                    }
                }
            }
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(1, ok && secs < 10.0,
           "sketch bits equal brute-force OR on 100 graphs x 5 seeds (" +
               std::to_string(bits_checked) + " bits)",
           secs);
}

// ---- criterion 2: compositionality -------------------------------------

void criterion_2() {
    const auto t0 = Clock::now();
    Rng rng(202);
    bool merge_ok = true, update_ok = true;
    for (int c = 0; c < 500 && merge_ok; ++c) {
        const std::uint64_t d = 8 + rng.below(120);
        const NodeMapper mapper(rng.next(), d);
        std::vector<NodeId> full;
        const std::size_t count = 1 + rng.below(40);
        for (std::size_t k = 0; k < count; ++k) {
            full.push_back(static_cast<NodeId>(rng.below(100000)));
        }
        std::vector<NodeId> s1, s2;
        for (NodeId k : full) {
            switch (rng.below(3)) {
                case 0: s1.push_back(k); break;
                case 1: s2.push_back(k); break;
                default: s1.push_back(k); s2.push_back(k); break;
            }
        }
        merge_ok = merge_sketches(embed_node(s1, mapper), embed_node(s2, mapper)) ==
                   embed_node(full, mapper);
    }
    for (int c = 0; c < 500 && update_ok; ++c) {
        const std::uint32_t n = 20 + static_cast<std::uint32_t>(rng.below(60));
        const Graph g = verify::make_bounded_degree_graph(n, 10, n, rng.next());
        NodeId u, v;
        do {
            u = static_cast<NodeId>(rng.below(n));
            v = static_cast<NodeId>(rng.below(n));
        } while (u == v || g.has_edge(u, v));
        const std::uint64_t d = 16 + rng.below(200);
        const std::uint64_t seed = rng.next();
        EmbeddingSet incremental = embed_graph(g, d, seed);
        apply_edge_update(incremental, u, v);
        auto edges = g.edges();
        edges.emplace_back(std::min(u, v), std::max(u, v));
        const EmbeddingSet direct =
            embed_graph(Graph::from_edges(n, std::move(edges)), d, seed);
        for (NodeId i = 0; i < n; ++i) {
            update_ok = update_ok && incremental.sketches[i] == direct.sketches[i];
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(2, merge_ok && update_ok && secs < 10.0,
           "merge and edge-update paths equal direct embedding over 1000 cases", secs);
}

// ---- criteria 3-7: verification suite at the pinned parameters ----------

void criterion_3() {
    const auto t0 = Clock::now();
    const auto fn = verify::check_edge_false_negatives(8, 4096, 20, 303);
    const auto fp = verify::check_edge_false_positives(8, 4096, 100000, 304);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream what;
    what << "edge estimator: FN=" << fn.observed << ", FP rate " << fp.observed
         << " <= " << fp.bound << "+" << fp.slack;
    report(3, fn.pass && fp.pass && secs < 60.0, what.str(), secs);
}

void criterion_4() {
    const auto t0 = Clock::now();
    const auto c = verify::check_degree_bound(16, 0.1, 50, 256, 404);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream what;
    what << "degree window violations " << c.observed << " <= 0.1+" << c.slack << " ("
         << c.note << ")";
    report(4, c.pass && secs < 60.0, what.str(), secs);
}

void criterion_5() {
    const auto t0 = Clock::now();
    const auto window = verify::check_cn_window(16, 0.2, 2000, 505);
    const auto mae = verify::check_cn_mae(16, 0.2, 2000, 505, 2.0);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream what;
    what << "CN window violations " << window.observed << " <= 0.2+" << window.slack
         << ", MAE " << mae.observed << " <= 2.0";
    report(5, window.pass && mae.pass && secs < 300.0, what.str(), secs);
}

void criterion_6() {
    const auto t0 = Clock::now();
    const auto exact = verify::check_zero_rule_exact(16, 0.2, 4000, 606);
    const auto fp = verify::check_zero_rule_fp(16, 0.2, 4000, 607);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream what;
    what << "zero-rule exact violations " << exact.observed << ", P(est>0 | cn=0) "
         << fp.observed << " <= " << fp.bound << "+" << fp.slack;
    report(6, exact.pass && fp.pass && secs < 120.0, what.str(), secs);
}

void criterion_7() {
    const auto t0 = Clock::now();
    const auto c = verify::check_loss_bound(16, 0.2, 100, 200, 707);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream what;
    what << "max loss " << c.observed << " <= " << c.bound << " on 100 runs";
    report(7, c.pass && secs < 120.0, what.str(), secs);
}

// ---- criterion 8: fourth powers ------------------------------------------

void criterion_8() {
    const auto t0 = Clock::now();

    // (a) zero propagation: structural exactness plus the pilot-frozen
    // frequency floor (pilot minimum 0.81 at these parameters).
    const auto zero = verify::check_power4_zero(8, 0.2, 15, 64, 808);
    const bool zero_ok = zero.pass && zero.observed <= 0.30;

    // (b) Spearman correlation, random graphs (pilot minimum 0.86).
    Rng rng(809);
    double worst_cor = 1.0;
    bool consistency_ok = true;
    for (int s = 0; s < 8; ++s) {
        const std::uint32_t n = 32 + static_cast<std::uint32_t>(rng.below(33));
        const Graph g = verify::make_bounded_degree_graph(n, 8, 2 * n, rng.next());
        const EmbeddingSet es = embed_graph_with_rho(g, 0.2, rng.next());
        const DenseMatrix est4 = estimate_power_2t(es, 2);
        const auto exact4 = matrix_power_exact(g, 2);
        std::vector<double> est_flat, exact_flat;
        for (NodeId i = 0; i < n; ++i) {
            for (NodeId j = i + 1; j < n; ++j) {
                est_flat.push_back(est4.at(i, j));
                exact_flat.push_back(static_cast<double>(exact4[i * n + j]));
                consistency_ok =
                    consistency_ok && est4.at(i, j) == estimate_power4(es, i, j);
            }
        }
        worst_cor = std::min(worst_cor, spearman(est_flat, exact_flat));
    }

    // (b') the n=16 path graph at an explicit d=256 (pilot mean ~0.95).
    std::vector<EdgePair> path_edges;
    for (NodeId i = 0; i + 1 < 16; ++i) path_edges.emplace_back(i, i + 1);
    const Graph path = Graph::from_edges(16, std::move(path_edges));
    const auto exact4 = matrix_power_exact(path, 2);
    double path_cor_sum = 0.0;
    for (int s = 0; s < 10; ++s) {
        const EmbeddingSet es = embed_graph(path, 256, 900 + s);
        const DenseMatrix est4 = estimate_power_2t(es, 2);
        std::vector<double> est_flat, exact_flat;
        for (NodeId i = 0; i < 16; ++i) {
            for (NodeId j = i + 1; j < 16; ++j) {
                est_flat.push_back(est4.at(i, j));
                exact_flat.push_back(static_cast<double>(exact4[i * 16 + j]));
            }
        }
        path_cor_sum += spearman(est_flat, exact_flat);
    }
    const double path_cor = path_cor_sum / 10.0;

    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream what;
    what << "A^4 zero freq " << zero.observed << " (floor 0.30, " << zero.note
         << "), Spearman random >= " << worst_cor << " (pilot floor 0.70), path "
         << path_cor << " (pilot floor 0.80), t=2 route equality "
         << (consistency_ok ? "exact" : "BROKEN");
    report(8,
           zero_ok && worst_cor >= 0.70 && path_cor >= 0.80 && consistency_ok &&
               secs < 120.0,
           what.str(), secs);
}

// ---- criterion 9: link prediction against the exact-count pipeline -------

void criterion_9() {
    const auto t0 = Clock::now();
    SynthConfig cfg;
    cfg.model = SynthModel::planted_partition;
    cfg.n = 2000;
    cfg.communities = 4;
    cfg.intra_probability = 0.08;
    cfg.inter_probability = 0.002;
    cfg.seed = 909;
    const SynthResult synth = generate(cfg);

    EvalConfig sketch_cfg;
    sketch_cfg.rho = 0.2;
    sketch_cfg.seed = 910;
    const EvalReport sketch = run_link_prediction(synth.graph, sketch_cfg);

    EvalConfig oracle_cfg;
    oracle_cfg.source = FeatureSource::uncompressed;
    oracle_cfg.seed = 910;
    const EvalReport oracle = run_link_prediction(synth.graph, oracle_cfg);

    const double a = sketch.metrics[0].second, b = oracle.metrics[0].second;
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream what;
    what << "planted-partition AUC " << a << " vs exact-count " << b << " (gap "
         << std::abs(a - b) << " <= 0.05)";
    report(9, std::abs(a - b) <= 0.05 && secs < 120.0, what.str(), secs);
}

// ---- criterion 10: paper-number reproduction (dataset gated) -------------

std::filesystem::path data_dir() {
    if (const char* env = std::getenv("QUINT_DATA_DIR")) return env;
    return "data";
}

void criterion_10() {
    const auto dir = data_dir();
    const auto blog = dir / "blogcatalog.txt";
    const auto facebook = dir / "facebook.txt";
    const auto cora = dir / "cora.txt";
    const auto cora_labels = dir / "cora.labels";

    bool any = false;
    if (std::filesystem::exists(blog)) {
        any = true;
        const auto t0 = Clock::now();
        const Graph g = load_edge_list_file(blog);
        report(10, g.node_count() == 10312 && g.edge_count() == 333983 &&
                       max_degree(g).psi == 3992,
               "BlogCatalog stats: n=" + std::to_string(g.node_count()) + " edges=" +
                   std::to_string(g.edge_count()) + " max degree " +
                   std::to_string(max_degree(g).psi) + " (expect 10312/333983/3992)",
               0.0);
        EvalConfig cfg;
        cfg.dim = 1000;
        cfg.seed = 1;
        const EvalReport r = run_link_prediction(g, cfg);
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        const bool auc_ok = std::abs(r.metrics[0].second - 0.8438) <= 0.03;
        const bool time_ok = r.compression_time_s <= 60.0;
        report(10, auc_ok && time_ok,
               "BlogCatalog d=1000 AUC " + std::to_string(r.metrics[0].second) +
                   " (target 0.8438 +/- 0.03), compression " +
                   std::to_string(r.compression_time_s) + "s <= 60s",
               secs);
    } else {
        report_skip(10, "BlogCatalog dataset not present at " + blog.string());
    }

    if (std::filesystem::exists(facebook)) {
        any = true;
        const auto t0 = Clock::now();
        const Graph g = load_edge_list_file(facebook);
        report(10, g.node_count() == 4039 && g.edge_count() == 88234 &&
                       max_degree(g).psi == 1045,
               "Facebook stats: n=" + std::to_string(g.node_count()) + " edges=" +
                   std::to_string(g.edge_count()) + " max degree " +
                   std::to_string(max_degree(g).psi) + " (expect 4039/88234/1045)",
               0.0);
        EvalConfig cfg;
        cfg.dim = 4500;
        cfg.seed = 1;
        const EvalReport r = run_link_prediction(g, cfg);
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        report(10, std::abs(r.metrics[0].second - 0.9530) <= 0.03,
               "Facebook d=4500 AUC " + std::to_string(r.metrics[0].second) + " (target 0.9530 +/- 0.03)",
               secs);
    } else {
        report_skip(10, "Facebook dataset not present at " + facebook.string());
    }

    if (std::filesystem::exists(cora) && std::filesystem::exists(cora_labels)) {
        any = true;
        const auto t0 = Clock::now();
        const Graph g = load_edge_list_file(cora);
        const LabelSet labels = load_labels_file(cora_labels, g);
        EvalConfig cfg;
        cfg.dim = 1000;
        cfg.seed = 1;
        const EvalReport r = run_node_classification(g, labels, cfg);
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        const double micro = r.metrics[0].second, macro = r.metrics[1].second;
        report(10,
               std::abs(micro - 0.6162) <= 0.03 && std::abs(macro - 0.6043) <= 0.03,
               "Cora d=1000 micro " + std::to_string(micro) + " macro " +
                   std::to_string(macro) + " (targets 0.6162/0.6043 +/- 0.03)",
               secs);
    } else {
        report_skip(10, "Cora dataset not present at " + cora.string());
    }
    (void)any;
}

// ---- criterion 11: embed throughput --------------------------------------

void criterion_11() {
    SynthConfig cfg;
    cfg.model = SynthModel::planted_partition;
    cfg.n = 50000;
    cfg.communities = 4;
    cfg.intra_probability = 0.0016;  // ~500k edges
    cfg.inter_probability = 0.00016;
    cfg.seed = 111;
    const SynthResult synth = generate(cfg);

    const auto t0 = Clock::now();
    const EmbeddingSet es = embed_graph(synth.graph, 1000, 112, 1);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    (void)es;
    const double rate = static_cast<double>(synth.graph.edge_count()) / secs;
    std::ostringstream what;
    what << "embed d=1000 single-threaded: " << static_cast<std::uint64_t>(rate)
         << " edges/s >= 20000 (" << synth.graph.edge_count() << " edges)";
    report(11, rate >= 20000.0, what.str(), secs);
}

// ---- criterion 12: ML plumbing oracles ------------------------------------

void criterion_12() {
    const auto t0 = Clock::now();
    Rng rng(121);

    double worst_grad = 0.0;
    for (int instance = 0; instance < 100; ++instance) {
        const std::size_t m = 10 + rng.below(24), f = 1 + rng.below(6);
        FeatureMatrix x(m, f);
        for (double& v : x.a) v = rng.uniform() * 4.0 - 2.0;
        std::vector<int> y(m);
        y[0] = 0;
        y[1] = 1;
        for (std::size_t r = 2; r < m; ++r) y[r] = rng.below(2) == 1;
        std::vector<double> w(f);
        for (double& v : w) v = rng.uniform() - 0.5;
        const double bias = rng.uniform() - 0.5;
        const double l2 = 1e-3;
        std::vector<double> grad(f);
        double grad_b = 0.0;
        logistic_gradient(x, y, w, bias, l2, grad, grad_b);
        const double h = 1e-6;
        for (std::size_t k = 0; k < f; ++k) {
            auto wp = w, wm = w;
            wp[k] += h;
            wm[k] -= h;
            const double fd =
                (logistic_loss(x, y, wp, bias, l2) - logistic_loss(x, y, wm, bias, l2)) /
                (2 * h);
            worst_grad = std::max(worst_grad,
                                  std::abs(fd - grad[k]) / std::max(1e-8, std::abs(fd)));
        }
    }

    double worst_auc = 0.0;
    for (int instance = 0; instance < 100; ++instance) {
        const std::size_t m = 8 + rng.below(80);
        std::vector<double> scores(m);
        std::vector<int> labels(m);
        labels[0] = 0;
        labels[1] = 1;
        for (std::size_t r = 0; r < m; ++r) {
            scores[r] = static_cast<double>(rng.below(10));
            if (r >= 2) labels[r] = rng.below(2) == 1;
        }
        double wins = 0;
        std::size_t pos = 0, neg = 0;
        for (std::size_t p = 0; p < m; ++p) {
            if (!labels[p]) continue;
            ++pos;
            for (std::size_t q = 0; q < m; ++q) {
                if (labels[q]) continue;
                wins += scores[p] > scores[q] ? 1.0 : (scores[p] == scores[q] ? 0.5 : 0.0);
            }
        }
        neg = m - pos;
        const double brute = wins / (static_cast<double>(pos) * static_cast<double>(neg));
        worst_auc = std::max(worst_auc, std::abs(auc_roc(scores, labels) - brute));
    }

    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream what;
    what << "gradient FD rel err " << worst_grad << " <= 1e-4, AUC oracle gap "
         << worst_auc << " <= 1e-12 (100 instances each)";
    report(12, worst_grad <= 1e-4 && worst_auc <= 1e-12, what.str(), secs);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    if (failures) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all acceptance criteria passed (dataset-gated checks may be skipped)"
              << std::endl;
    return 0;
}
