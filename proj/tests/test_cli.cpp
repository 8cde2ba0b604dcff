#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "test_util.hpp"

namespace {

struct CommandResult {
    int exit_code;
};

CommandResult run_cli(const std::string& args) {
    const std::string cmd = std::string(IKTSNE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1};
}

std::size_t line_count(const std::string& path) {
    std::ifstream in(path);
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lines;
    }
    return lines;
}

std::string dir(const std::string& leaf) {
    return (testutil::scratch_dir() / "cli" / leaf).string();
}

}  // namespace

TEST_CASE("generate writes the documented datasets") {
    const auto out = dir("gen_subspace");
    CHECK(run_cli("generate subspace5 --seed 7 --out " + out).exit_code == 0);
    CHECK(line_count(out + "/data.csv") == 1250);
    CHECK(line_count(out + "/labels.csv") == 1250);

    const auto out2 = dir("gen_conc");
    CHECK(run_cli("generate concentrated --seed 7 --out " + out2).exit_code == 0);
    CHECK(line_count(out2 + "/data.csv") == 800);
}

TEST_CASE("unknown generator exits with the usage code") {
    CHECK(run_cli("generate bogus --out " + dir("gen_bogus")).exit_code == 2);
    CHECK(run_cli("no-such-command").exit_code == 2);
}

TEST_CASE("embed is deterministic and validates preconditions") {
    const auto data_dir = dir("embed_data");
    REQUIRE(run_cli("generate two-density --seed 3 --n-sparse 60 --n-dense 60 --out " + data_dir)
                .exit_code == 0);
    const std::string common = "embed --data " + data_dir + "/data.csv --labels " + data_dir +
                               "/labels.csv --kernel gaussian --perplexity 10 --iterations 150 "
                               "--seed 42 --out ";

    const auto out_a = dir("embed_a");
    const auto out_b = dir("embed_b");
    CHECK(run_cli(common + out_a).exit_code == 0);
    CHECK(run_cli(common + out_b).exit_code == 0);
    CHECK(testutil::read_file(out_a + "/embedding.csv") ==
          testutil::read_file(out_b + "/embedding.csv"));
    CHECK(testutil::read_file(out_a + "/plot.svg") == testutil::read_file(out_b + "/plot.svg"));
    CHECK(line_count(out_a + "/trace.csv") == 151);  // header + one row per iteration

    const auto manifest = nlohmann::json::parse(testutil::read_file(out_a + "/manifest.json"));
    CHECK(manifest["command"] == "embed");
    CHECK(manifest["seed"] == 42);
    CHECK(manifest["kernel"]["kind"] == "gaussian");

    // perplexity must stay below n
    CHECK(run_cli("embed --data " + data_dir + "/data.csv --kernel gaussian --perplexity 2000 "
                  "--iterations 150 --out " + dir("embed_bad")).exit_code == 1);
}

TEST_CASE("embed with the isolation kernel writes all artifacts") {
    const auto data_dir = dir("embed_ik_data");
    REQUIRE(run_cli("generate two-density --seed 9 --n-sparse 50 --n-dense 50 --out " + data_dir)
                .exit_code == 0);
    const auto out = dir("embed_ik");
    CHECK(run_cli("embed --data " + data_dir + "/data.csv --kernel isolation --psi 0.2n "
                  "--trees 100 --iterations 150 --seed 1 --out " + out).exit_code == 0);
    CHECK(line_count(out + "/embedding.csv") == 100);
    CHECK(!testutil::read_file(out + "/plot.svg").empty());
}

TEST_CASE("evaluate scores an identity embedding at 1") {
    // data already in [0,1] with both corners pinned, so normalization is the
    // identity and the embedding equals its source exactly
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::string csv = "0,0\n1,1\n";
    for (int i = 0; i < 30; ++i) {
        csv += std::to_string(u(eng)) + "," + std::to_string(u(eng)) + "\n";
    }
    const auto data_path = testutil::write_file("cli/ident/data.csv", csv);
    const auto out = dir("eval_ident");
    CHECK(run_cli("evaluate --data " + data_path + " --embedding " + data_path + " --out " + out)
              .exit_code == 0);
    const auto report = nlohmann::json::parse(testutil::read_file(out + "/report.json"));
    CHECK(report["auc_rnx"].get<double>() == 1.0);
    CHECK(!report.contains("db"));

    // single-class labels cannot drive the cluster metrics
    std::string ones;
    for (int i = 0; i < 32; ++i) {
        ones += "1\n";
    }
    const auto labels_path = testutil::write_file("cli/ident/labels.csv", ones);
    CHECK(run_cli("evaluate --data " + data_path + " --labels " + labels_path + " --embedding " +
                  data_path + " --out " + out).exit_code == 1);

    // row-count mismatch
    const auto short_emb = testutil::write_file("cli/ident/short.csv", "0,0\n1,1\n0.5,0.5\n");
    CHECK(run_cli("evaluate --data " + data_path + " --embedding " + short_emb + " --out " + out)
              .exit_code == 1);
}

TEST_CASE("sweep with a degenerate grid emits a single row") {
    const auto data_dir = dir("sweep_data");
    REQUIRE(run_cli("generate two-density --seed 4 --n-sparse 40 --n-dense 40 --out " + data_dir)
                .exit_code == 0);
    const auto out = dir("sweep_one");
    CHECK(run_cli("sweep --data " + data_dir + "/data.csv --labels " + data_dir +
                  "/labels.csv --kernel gaussian --grid 10 --iterations 150 --seed 2 --out " + out)
              .exit_code == 0);
    CHECK(line_count(out + "/summary.csv") == 2);  // header + one row
    CHECK(line_count(out + "/embedding.csv") == 80);
    const auto report = nlohmann::json::parse(testutil::read_file(out + "/report.json"));
    CHECK(report.contains("auc_rnx"));
    CHECK(report.contains("db"));
}

TEST_CASE("sweep records failing grid points without aborting") {
    const auto data_dir = dir("sweep_fail_data");
    REQUIRE(run_cli("generate two-density --seed 4 --n-sparse 30 --n-dense 30 --out " + data_dir)
                .exit_code == 0);
    const auto out = dir("sweep_fail");
    // perplexity 1 violates the precondition, 10 succeeds
    CHECK(run_cli("sweep --data " + data_dir + "/data.csv --kernel gaussian --grid 1,10 "
                  "--iterations 150 --seed 2 --out " + out).exit_code == 0);
    const auto summary = testutil::read_file(out + "/summary.csv");
    CHECK(summary.find("error") != std::string::npos);
    CHECK(summary.find("ok") != std::string::npos);
}
