#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iktsne/data_io.hpp"
#include "iktsne/errors.hpp"
#include "iktsne/metrics.hpp"
#include "iktsne/runner.hpp"
#include "iktsne/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct LoaderOptions {
    std::string data_path;
    bool sparse = false;
    bool header = false;
    std::optional<std::size_t> labels_column;
    std::string labels_path;
};

struct RunOptions {
    LoaderOptions loader;
    std::string kernel = "gaussian";
    double perplexity = 30.0;
    std::string psi = "0.05n";
    std::size_t trees = 200;
    std::size_t knn_k = 10;
    std::size_t iterations = 1000;
    double learning_rate = 200.0;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    std::size_t jobs = 1;
    std::string grid = "default";
};

void add_loader_flags(CLI::App* cmd, LoaderOptions& opt) {
    cmd->add_option("--data", opt.data_path, "Input dataset path")->required();
    cmd->add_flag("--sparse", opt.sparse, "Input is sparse 'label idx:val ...' lines");
    cmd->add_flag("--header", opt.header, "Dense CSV has a header row");
    cmd->add_option("--labels-column", opt.labels_column, "Dense CSV column holding class labels");
    cmd->add_option("--labels", opt.labels_path, "Separate labels file, one token per line");
}

iktsne::DatasetBundle load_bundle(const LoaderOptions& opt) {
    iktsne::DatasetBundle bundle =
        opt.sparse ? iktsne::load_sparse_svm(opt.data_path)
                   : iktsne::load_dense_csv(opt.data_path, opt.labels_column, opt.header);
    if (!opt.labels_path.empty()) {
        auto labels = iktsne::load_labels(opt.labels_path);
        iktsne::validate_labels(labels, bundle.data.n());
        bundle.labels = std::move(labels);
    }
    return bundle;
}

iktsne::KernelSettings kernel_settings(const RunOptions& opt) {
    iktsne::KernelSettings ks;
    ks.kind = iktsne::parse_kernel_kind(opt.kernel);
    ks.perplexity = opt.perplexity;
    ks.psi = opt.psi;
    ks.trees = opt.trees;
    ks.knn_k = opt.knn_k;
    return ks;
}

iktsne::OptimizerConfig optimizer_config(const RunOptions& opt) {
    iktsne::OptimizerConfig cfg;
    cfg.iterations = opt.iterations;
    cfg.learning_rate = opt.learning_rate;
    cfg.seed = opt.seed;
    return cfg;
}

json manifest_json(const std::string& command, const RunOptions& opt) {
    json kernel;
    kernel["kind"] = opt.kernel;
    const auto kind = iktsne::parse_kernel_kind(opt.kernel);
    switch (kind) {
        case iktsne::KernelKind::gaussian:
            kernel["perplexity"] = opt.perplexity;
            break;
        case iktsne::KernelKind::isolation:
            kernel["psi"] = opt.psi;
            kernel["trees"] = opt.trees;
            break;
        default:
            kernel["k"] = opt.knn_k;
            break;
    }
    json j;
    j["command"] = command;
    j["dataset"] = opt.loader.data_path;
    j["sparse"] = opt.loader.sparse;
    j["kernel"] = kernel;
    j["optimizer"] = {{"iterations", opt.iterations},
                      {"learning_rate", opt.learning_rate},
                      {"momentum_initial", 0.5},
                      {"momentum_final", 0.8},
                      {"momentum_switch_iter", 250},
                      {"exaggeration_factor", 4.0},
                      {"exaggeration_iters", 100},
                      {"init_scale", 1e-4}};
    j["seed"] = opt.seed;
    j["out"] = opt.out_dir;
    if (command == "sweep") {
        j["grid"] = opt.grid;
        j["jobs"] = opt.jobs;
    }
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw iktsne::io_error("cannot open " + path.string());
    }
    out << text;
}

std::vector<std::string> parse_grid(const std::string& spec, iktsne::KernelKind kind) {
    if (spec == "default") {
        return iktsne::default_grid(kind);
    }
    std::vector<std::string> grid;
    std::string token;
    for (char c : spec) {
        if (c == ',') {
            if (!token.empty()) {
                grid.push_back(token);
                token.clear();
            }
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            token.push_back(c);
        }
    }
    if (!token.empty()) {
        grid.push_back(token);
    }
    if (grid.empty()) {
        throw iktsne::argument_error("sweep: empty grid specification");
    }
    return grid;
}

int cmd_generate(const std::string& name, std::uint64_t seed, const std::string& out_dir,
                 const iktsne::TwoDensityConfig& td_base) {
    fs::create_directories(out_dir);
    iktsne::DatasetBundle bundle{iktsne::DataMatrix::dense(1, {0.0, 0.0}), std::nullopt, "", false, {}};
    std::vector<iktsne::MatchedPair> pairs;
    if (name == "subspace5") {
        bundle = iktsne::gen_subspace_clusters(seed);
    } else if (name == "concentrated") {
        bundle = iktsne::gen_concentrated_noise(seed);
    } else if (name == "two-density") {
        iktsne::TwoDensityConfig cfg = td_base;
        cfg.seed = seed;
        auto td = iktsne::gen_two_density_strip(cfg);
        bundle = std::move(td.bundle);
        pairs = std::move(td.pairs);
    } else {
        std::cerr << "iktsne generate: unknown generator '" << name
                  << "' (expected subspace5 | concentrated | two-density)\n";
        return kExitUsage;
    }

    const fs::path dir(out_dir);
    {
        std::ofstream out(dir / "data.csv");
        if (!out) {
            throw iktsne::io_error("cannot open " + (dir / "data.csv").string());
        }
        const auto& m = bundle.data;
        char buf[64];
        for (std::size_t i = 0; i < m.n(); ++i) {
            const auto row = m.dense_row(i);
            for (std::size_t a = 0; a < row.size(); ++a) {
                std::snprintf(buf, sizeof(buf), "%.17g", row[a]);
                out << buf << (a + 1 < row.size() ? "," : "\n");
            }
        }
    }
    if (bundle.labels) {
        std::ofstream out(dir / "labels.csv");
        for (int v : bundle.labels->values) {
            out << v << '\n';
        }
    }
    if (!pairs.empty()) {
        std::ofstream out(dir / "pairs.csv");
        out << "sparse_a,sparse_b,dense_a,dense_b\n";
        for (const auto& p : pairs) {
            out << p.sparse_a << ',' << p.sparse_b << ',' << p.dense_a << ',' << p.dense_b << '\n';
        }
    }
    std::cout << "wrote " << bundle.data.n() << " x " << bundle.data.d() << " dataset to "
              << out_dir << "\n";
    return kExitOk;
}

int cmd_embed(const RunOptions& opt) {
    auto bundle = load_bundle(opt.loader);
    bundle = iktsne::minmax_normalize(bundle);
    const auto dists = iktsne::DistanceTable::build(bundle.data);
    const auto run = iktsne::run_embedding(bundle.data, dists, kernel_settings(opt),
                                           optimizer_config(opt));

    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    iktsne::save_embedding_csv(run.embedding, bundle.labels, (dir / "embedding.csv").string());
    iktsne::render_scatter_svg(run.embedding, bundle.labels, (dir / "plot.svg").string());
    iktsne::write_trace_csv(run.trace, (dir / "trace.csv").string());
    write_text(dir / "manifest.json", manifest_json("embed", opt).dump(2) + "\n");
    std::cout << "embedded " << run.embedding.n << " points, final KL "
              << run.embedding.final_kl << "\n";
    return kExitOk;
}

int cmd_evaluate(const LoaderOptions& loader, const std::string& embedding_path,
                 const std::string& out_dir) {
    auto bundle = load_bundle(loader);
    bundle = iktsne::minmax_normalize(bundle);
    const auto embedding = iktsne::load_embedding_csv(embedding_path);
    if (embedding.n != bundle.data.n()) {
        throw iktsne::argument_error("evaluate: dataset has " + std::to_string(bundle.data.n()) +
                                     " rows but embedding has " + std::to_string(embedding.n));
    }
    const auto report = iktsne::evaluate_embedding(bundle.data, embedding, bundle.labels);
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "report.json", report.to_json() + "\n");
    std::cout << "auc_rnx " << report.auc_rnx;
    if (report.db) {
        std::cout << "  db " << *report.db;
    }
    if (report.ch) {
        std::cout << "  ch " << *report.ch;
    }
    std::cout << "\n";
    return kExitOk;
}

int cmd_sweep(const RunOptions& opt) {
    auto bundle = load_bundle(opt.loader);
    bundle = iktsne::minmax_normalize(bundle);
    const auto kind = iktsne::parse_kernel_kind(opt.kernel);
    const auto grid = parse_grid(opt.grid, kind);
    const auto outcome = iktsne::run_sweep(bundle, kind, grid, kernel_settings(opt),
                                           optimizer_config(opt), opt.jobs);

    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    {
        std::ofstream out(dir / "summary.csv");
        out << "param,status,auc_rnx,db,ch,final_kl,error\n";
        char buf[64];
        for (const auto& row : outcome.rows) {
            out << row.param << ',' << (row.ok ? "ok" : "error") << ',';
            const auto emit = [&](double v) {
                std::snprintf(buf, sizeof(buf), "%.10g", v);
                out << buf;
            };
            if (row.ok) {
                emit(row.auc_rnx);
                out << ',';
                if (row.db) {
                    emit(*row.db);
                }
                out << ',';
                if (row.ch) {
                    emit(*row.ch);
                }
                out << ',';
                emit(row.final_kl);
                out << ',';
            } else {
                out << ",,,,";
            }
            std::string msg = row.error;
            for (auto& c : msg) {
                if (c == ',' || c == '\n') {
                    c = ';';
                }
            }
            out << msg << '\n';
        }
    }
    if (outcome.best >= 0) {
        const auto& best = outcome.best_run;
        iktsne::save_embedding_csv(best.embedding, bundle.labels, (dir / "embedding.csv").string());
        iktsne::render_scatter_svg(best.embedding, bundle.labels, (dir / "plot.svg").string());
        iktsne::write_trace_csv(best.trace, (dir / "trace.csv").string());
        write_text(dir / "report.json", outcome.best_report.to_json() + "\n");
        std::cout << "best " << opt.kernel << " param "
                  << outcome.rows[static_cast<std::size_t>(outcome.best)].param << " auc_rnx "
                  << outcome.best_report.auc_rnx << "\n";
    } else {
        std::cout << "sweep produced no successful runs\n";
    }
    write_text(dir / "manifest.json", manifest_json("sweep", opt).dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"t-SNE with interchangeable high-dimensional kernels"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Write a synthetic dataset");
    std::string gen_name;
    std::uint64_t gen_seed = 0;
    std::string gen_out = "out";
    iktsne::TwoDensityConfig td_cfg;
    generate->add_option("name", gen_name, "subspace5 | concentrated | two-density")->required();
    generate->add_option("--seed", gen_seed, "RNG seed");
    generate->add_option("--out", gen_out, "Output directory");
    generate->add_option("--n-sparse", td_cfg.n_sparse, "two-density: sparse-region points");
    generate->add_option("--n-dense", td_cfg.n_dense, "two-density: dense-region points");
    generate->add_option("--rho", td_cfg.rho_ratio, "two-density: density ratio");
    generate->add_option("--dim", td_cfg.d, "two-density: dimensionality");

    // embed
    RunOptions embed_opt;
    auto* embed = app.add_subcommand("embed", "Embed a dataset with the chosen kernel");
    add_loader_flags(embed, embed_opt.loader);
    embed->add_option("--kernel", embed_opt.kernel,
                      "gaussian | isolation | knn | adaptive-gaussian");
    embed->add_option("--perplexity", embed_opt.perplexity, "Gaussian kernel perplexity");
    embed->add_option("--psi", embed_opt.psi, "Isolation Kernel psi (absolute or '0.05n')");
    embed->add_option("--trees", embed_opt.trees, "Isolation Kernel partitionings");
    embed->add_option("--knn-k", embed_opt.knn_k, "k for the knn / adaptive-gaussian kernels");
    embed->add_option("--iterations", embed_opt.iterations, "Optimizer iterations");
    embed->add_option("--learning-rate", embed_opt.learning_rate, "Optimizer learning rate");
    embed->add_option("--seed", embed_opt.seed, "Run seed");
    embed->add_option("--out", embed_opt.out_dir, "Output directory");

    // evaluate
    LoaderOptions eval_loader;
    std::string eval_embedding;
    std::string eval_out = "out";
    auto* evaluate = app.add_subcommand("evaluate", "Score an embedding against its source data");
    add_loader_flags(evaluate, eval_loader);
    evaluate->add_option("--embedding", eval_embedding, "Embedding CSV path")->required();
    evaluate->add_option("--out", eval_out, "Output directory");

    // sweep
    RunOptions sweep_opt;
    auto* sweep = app.add_subcommand("sweep", "Parameter search with per-run metrics");
    add_loader_flags(sweep, sweep_opt.loader);
    sweep->add_option("--kernel", sweep_opt.kernel,
                      "gaussian | isolation | knn | adaptive-gaussian");
    sweep->add_option("--grid", sweep_opt.grid, "'default' or comma-separated parameter list");
    sweep->add_option("--trees", sweep_opt.trees, "Isolation Kernel partitionings");
    sweep->add_option("--iterations", sweep_opt.iterations, "Optimizer iterations");
    sweep->add_option("--learning-rate", sweep_opt.learning_rate, "Optimizer learning rate");
    sweep->add_option("--seed", sweep_opt.seed, "Shared optimizer seed");
    sweep->add_option("--out", sweep_opt.out_dir, "Output directory");
    sweep->add_option("--jobs", sweep_opt.jobs, "Concurrent grid points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (generate->parsed()) {
            return cmd_generate(gen_name, gen_seed, gen_out, td_cfg);
        }
        if (embed->parsed()) {
            return cmd_embed(embed_opt);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(eval_loader, eval_embedding, eval_out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_opt);
        }
    } catch (const iktsne::error& e) {
        std::cerr << "iktsne: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "iktsne: unexpected failure: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
