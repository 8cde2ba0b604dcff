#include "iktsne/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <thread>

#include "iktsne/alt_kernels.hpp"
#include "iktsne/errors.hpp"
#include "iktsne/gaussian_affinity.hpp"
#include "iktsne/isolation_kernel.hpp"
#include "iktsne/rng.hpp"

namespace iktsne {

KernelKind parse_kernel_kind(const std::string& name) {
    if (name == "gaussian") {
        return KernelKind::gaussian;
    }
    if (name == "isolation") {
        return KernelKind::isolation;
    }
    if (name == "knn") {
        return KernelKind::knn;
    }
    if (name == "adaptive-gaussian") {
        return KernelKind::adaptive_gaussian;
    }
    throw argument_error("unknown kernel kind '" + name +
                         "' (expected gaussian | isolation | knn | adaptive-gaussian)");
}

std::string kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::gaussian:
            return "gaussian";
        case KernelKind::isolation:
            return "isolation";
        case KernelKind::knn:
            return "knn";
        case KernelKind::adaptive_gaussian:
            return "adaptive-gaussian";
    }
    return "?";
}

AffinityMatrix build_affinity(const DataMatrix& data, const DistanceTable& dists,
                              const KernelSettings& kernel, std::uint64_t seed) {
    switch (kernel.kind) {
        case KernelKind::gaussian: {
            PerplexityConfig cfg;
            cfg.perplexity = kernel.perplexity;
            return gaussian_affinities(dists, cfg);
        }
        case KernelKind::isolation: {
            IsolationConfig cfg;
            cfg.psi = resolve_psi(kernel.psi, data.n());
            cfg.t = kernel.trees;
            cfg.seed = derive_seed(seed, 0x464f52);
            const auto forest = build_forest(data, cfg);
            return isolation_affinities(forest, dists);
        }
        case KernelKind::knn:
            return knn_affinities(dists, KnnConfig{kernel.knn_k});
        case KernelKind::adaptive_gaussian:
            return adaptive_gaussian_affinities(dists, KnnConfig{kernel.knn_k});
    }
    throw argument_error("build_affinity: bad kernel kind");
}

RunOutcome run_embedding(const DataMatrix& data, const DistanceTable& dists,
                         const KernelSettings& kernel, const OptimizerConfig& opt) {
    const auto p = build_affinity(data, dists, kernel, opt.seed);
    auto result = run_tsne(p, opt);
    return RunOutcome{std::move(result.embedding), std::move(result.trace)};
}

std::vector<std::string> default_grid(KernelKind kind) {
    std::vector<std::string> grid;
    if (kind == KernelKind::isolation) {
        for (int pct = 1; pct <= 97; pct += 4) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "0.%02dn", pct);
            grid.emplace_back(buf);
        }
    } else {
        for (int v = 1; v <= 97; v += 4) {
            grid.push_back(std::to_string(v));
        }
    }
    return grid;
}

namespace {

double resolve_param(KernelKind kind, const std::string& entry, std::size_t n,
                     KernelSettings& settings) {
    switch (kind) {
        case KernelKind::gaussian: {
            double v = 0.0;
            const auto [p, e] = std::from_chars(entry.data(), entry.data() + entry.size(), v);
            if (e != std::errc() || p != entry.data() + entry.size()) {
                throw argument_error("sweep: cannot parse perplexity '" + entry + "'");
            }
            settings.perplexity = v;
            return v;
        }
        case KernelKind::isolation: {
            const std::size_t psi = resolve_psi(entry, n);
            settings.psi = std::to_string(psi);
            return static_cast<double>(psi);
        }
        case KernelKind::knn:
        case KernelKind::adaptive_gaussian: {
            std::size_t k = 0;
            const auto [p, e] = std::from_chars(entry.data(), entry.data() + entry.size(), k);
            if (e != std::errc() || p != entry.data() + entry.size() || k < 1) {
                throw argument_error("sweep: cannot parse k '" + entry + "'");
            }
            settings.knn_k = k;
            return static_cast<double>(k);
        }
    }
    throw argument_error("sweep: bad kernel kind");
}

}  // namespace

SweepOutcome run_sweep(const DatasetBundle& normalized, KernelKind kind,
                       const std::vector<std::string>& grid, const KernelSettings& base,
                       const OptimizerConfig& opt, std::size_t jobs) {
    if (grid.empty()) {
        throw argument_error("run_sweep: empty grid");
    }
    const DataMatrix& data = normalized.data;
    const DistanceTable dists = DistanceTable::build(data);
    const auto hd_order = neighbour_order(dists);

    struct Slot {
        SweepRow row;
        RunOutcome run;
        MetricReport report;
    };
    std::vector<Slot> slots(grid.size());

    const auto execute = [&](std::size_t g) {
        Slot& slot = slots[g];
        KernelSettings settings = base;
        settings.kind = kind;
        try {
            slot.row.param = resolve_param(kind, grid[g], data.n(), settings);
            slot.run = run_embedding(data, dists, settings, opt);
            slot.row.final_kl = slot.run.embedding.final_kl;

            const auto ld_table = DistanceTable::build(DataMatrix::dense(2, slot.run.embedding.coords));
            const auto curve = rnx_curve_with_order(hd_order, ld_table);
            slot.report.auc_rnx = curve.auc;
            for (std::size_t s = 0; s < curve.sampled_k.size(); ++s) {
                slot.report.rnx_curve.emplace_back(curve.sampled_k[s], curve.r_values[s]);
            }
            slot.row.auc_rnx = curve.auc;
            if (normalized.labels) {
                const Embedding norm = minmax_normalize(slot.run.embedding);
                slot.report.db = db_index(norm, *normalized.labels);
                slot.report.ch = ch_index(norm, *normalized.labels);
                slot.row.db = slot.report.db;
                slot.row.ch = slot.report.ch;
            }
            slot.row.ok = true;
        } catch (const error& e) {
            slot.row.ok = false;
            slot.row.error = e.what();
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, grid.size()));
    if (workers == 1) {
        for (std::size_t g = 0; g < grid.size(); ++g) {
            execute(g);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t g = next.fetch_add(1);
                    if (g >= grid.size()) {
                        break;
                    }
                    execute(g);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    SweepOutcome out;
    out.rows.reserve(slots.size());
    for (const auto& slot : slots) {
        out.rows.push_back(slot.row);
    }
    for (std::size_t g = 0; g < slots.size(); ++g) {
        if (!slots[g].row.ok) {
            continue;
        }
        if (out.best < 0) {
            out.best = static_cast<std::ptrdiff_t>(g);
            continue;
        }
        const auto& cur = slots[g].row;
        const auto& best = slots[static_cast<std::size_t>(out.best)].row;
        if (cur.auc_rnx > best.auc_rnx ||
            (cur.auc_rnx == best.auc_rnx && cur.param < best.param)) {
            out.best = static_cast<std::ptrdiff_t>(g);
        }
    }
    if (out.best >= 0) {
        out.best_run = std::move(slots[static_cast<std::size_t>(out.best)].run);
        out.best_report = std::move(slots[static_cast<std::size_t>(out.best)].report);
    }
    return out;
}

}  // namespace iktsne
