#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "quint/embedding.hpp"
#include "quint/estimators.hpp"

#ifndef QUINT_CLI_PATH
#error "QUINT_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const fs::path out_path = "tmp_cli_stdout.txt";
    const fs::path err_path = "tmp_cli_stderr.txt";
    const std::string cmd = env_prefix + std::string(QUINT_CLI_PATH) + " " + args + " > " +
                            out_path.string() + " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    fs::remove(out_path);
    fs::remove(err_path);
    return r;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() /
                     ("quint_cli_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("gen, embed and degree estimation on an edgeless graph") {
    TempDir dir;
    const auto gen = run_cli("gen --model planted --n 5 --communities 1 --p-intra 0 "
                             "--seed 1 --output " + dir.file("empty.txt"));
    REQUIRE(gen.exit_code == 0);
    CHECK(json::parse(gen.out)["edges"] == 0);

    const auto embed = run_cli("embed --input " + dir.file("empty.txt") +
                               " --dim 16 --seed 4 --output " + dir.file("empty.qnts"));
    REQUIRE(embed.exit_code == 0);

    const auto degrees = run_cli("estimate degree --emb " + dir.file("empty.qnts"));
    REQUIRE(degrees.exit_code == 0);
    const json parsed = json::parse(degrees.out);
    REQUIRE(parsed["estimates"].size() == 5);
    for (const auto& v : parsed["estimates"]) CHECK(v.get<double>() == 0.0);
}

TEST_CASE("embed writes byte-identical sketch files for identical invocations") {
    TempDir dir;
    REQUIRE(run_cli("gen --model planted --n 120 --communities 3 --p-intra 0.08 "
                    "--p-inter 0.01 --seed 9 --output " + dir.file("g.txt"))
                .exit_code == 0);
    const std::string common = "embed --input " + dir.file("g.txt") +
                               " --rho 0.2 --seed 11 --threads 1 --output ";
    REQUIRE(run_cli(common + dir.file("a.qnts")).exit_code == 0);
    REQUIRE(run_cli(common + dir.file("b.qnts")).exit_code == 0);
    CHECK(read_file(dir.file("a.qnts")) == read_file(dir.file("b.qnts")));

    // rho lands in the header
    const quint::EmbeddingSet es = quint::load_embeddings_file(dir.file("a.qnts"));
    CHECK(es.rho == 0.2);

    // QUINT_THREADS only sets the worker default; the bits never change
    const auto env = run_cli("embed --input " + dir.file("g.txt") +
                             " --rho 0.2 --seed 11 --output " + dir.file("c.qnts"),
                             "QUINT_THREADS=3 ");
    REQUIRE(env.exit_code == 0);
    CHECK(read_file(dir.file("a.qnts")) == read_file(dir.file("c.qnts")));
}

TEST_CASE("estimate subcommands agree with the library") {
    TempDir dir;
    REQUIRE(run_cli("gen --model planted --n 60 --communities 2 --p-intra 0.2 "
                    "--p-inter 0.05 --seed 2 --output " + dir.file("g.txt"))
                .exit_code == 0);
    REQUIRE(run_cli("embed --input " + dir.file("g.txt") +
                    " --dim 128 --seed 5 --output " + dir.file("g.qnts"))
                .exit_code == 0);
    const quint::EmbeddingSet es = quint::load_embeddings_file(dir.file("g.qnts"));

    const auto cn = run_cli("estimate cn --emb " + dir.file("g.qnts") + " --i 3 --j 17");
    REQUIRE(cn.exit_code == 0);
    const json cnj = json::parse(cn.out);
    const quint::CnEstimate expect =
        quint::estimate_common_neighbors(es.sketches[3], es.sketches[17], es.d);
    CHECK(cnj["estimate"].get<double>() == expect.value);
    CHECK(cnj["raw_overlap"].get<std::uint64_t>() == expect.raw_overlap);

    const auto edge = run_cli("estimate edge --emb " + dir.file("g.qnts") +
                              " --i 3 --j 17");
    REQUIRE(edge.exit_code == 0);
    const quint::NodeMapper mapper = es.mapper();
    CHECK(json::parse(edge.out)["present"].get<bool>() ==
          quint::estimate_edge(es.sketches[3], es.sketches[17], 3, 17, mapper));
}

TEST_CASE("linkpred emits a full report and is deterministic modulo timings") {
    TempDir dir;
    REQUIRE(run_cli("gen --model planted --n 250 --communities 4 --p-intra 0.15 "
                    "--p-inter 0.02 --seed 3 --output " + dir.file("g.txt"))
                .exit_code == 0);
    const std::string cmd = "linkpred --input " + dir.file("g.txt") +
                            " --dim 300 --seed 7 --similarity estcn --threads 1";
    const auto a = run_cli(cmd);
    REQUIRE(a.exit_code == 0);
    json ja = json::parse(a.out);
    for (const char* key :
         {"task", "dim", "seed", "metrics", "compression_time_s", "train_time_s"}) {
        CHECK(ja.contains(key));
    }
    CHECK(ja["task"] == "link_prediction");
    const double auc = ja["metrics"]["auc_roc"].get<double>();
    CHECK(auc >= 0.0);
    CHECK(auc <= 1.0);

    const auto b = run_cli(cmd);
    REQUIRE(b.exit_code == 0);
    json jb = json::parse(b.out);
    for (json* j : {&ja, &jb}) {
        j->erase("compression_time_s");
        j->erase("train_time_s");
    }
    CHECK(ja == jb);
}

TEST_CASE("nodeclass consumes label files") {
    TempDir dir;
    REQUIRE(run_cli("gen --model planted --n 200 --communities 2 --p-intra 0.2 "
                    "--p-inter 0.02 --seed 6 --output " + dir.file("g.txt") +
                    " --labels " + dir.file("g.labels"))
                .exit_code == 0);
    const auto r = run_cli("nodeclass --input " + dir.file("g.txt") + " --labels " +
                           dir.file("g.labels") + " --dim 128 --seed 4 --repeats 3");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["task"] == "node_classification");
    CHECK(j["metrics"]["micro_f1"].get<double>() > 0.7);
}

TEST_CASE("verify exits zero when every bound holds") {
    const auto r = run_cli("verify --psi 8 --rho 0.2 --trials 300 --seed 7");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["all_pass"].get<bool>());
    CHECK(j["checks"].size() >= 7);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("embed --no-such-flag").exit_code == 1);
    CHECK(run_cli("nosuchcommand").exit_code == 1);
    TempDir dir;
    REQUIRE(run_cli("gen --model planted --n 20 --communities 1 --p-intra 0.3 "
                    "--seed 1 --output " + dir.file("g.txt"))
                .exit_code == 0);
    // --dim and --rho are mutually exclusive
    CHECK(run_cli("embed --input " + dir.file("g.txt") +
                  " --dim 64 --rho 0.2 --seed 1 --output " + dir.file("x.qnts"))
              .exit_code == 1);
}

TEST_CASE("io and format errors exit with code 2") {
    TempDir dir;
    CHECK(run_cli("embed --input " + dir.file("missing.txt") +
                  " --dim 64 --seed 1 --output " + dir.file("x.qnts"))
              .exit_code == 2);

    std::ofstream bad(dir.file("bad.qnts"), std::ios::binary);
    bad << "QNTSgarbage";
    bad.close();
    CHECK(run_cli("estimate degree --emb " + dir.file("bad.qnts")).exit_code == 2);
}

TEST_CASE("failed runs leave no partial output behind") {
    TempDir dir;
    std::ofstream in(dir.file("malformed.txt"));
    in << "0 1\nnot numbers\n";
    in.close();
    const auto r = run_cli("embed --input " + dir.file("malformed.txt") +
                           " --dim 32 --seed 1 --output " + dir.file("out.qnts"));
    CHECK(r.exit_code == 2);
    CHECK_FALSE(fs::exists(dir.file("out.qnts")));
}
