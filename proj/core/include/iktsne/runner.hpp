#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iktsne/affinity.hpp"
#include "iktsne/data_io.hpp"
#include "iktsne/distance.hpp"
#include "iktsne/metrics.hpp"
#include "iktsne/optimizer.hpp"

namespace iktsne {

enum class KernelKind { gaussian, isolation, knn, adaptive_gaussian };

KernelKind parse_kernel_kind(const std::string& name);
std::string kernel_kind_name(KernelKind kind);

// Kernel parameters for one run; only the fields matching the kind are used.
struct KernelSettings {
    KernelKind kind = KernelKind::gaussian;
    double perplexity = 30.0;   // gaussian
    std::string psi = "0.05n";  // isolation: absolute or fraction of n
    std::size_t trees = 200;    // isolation
    std::size_t knn_k = 10;     // knn / adaptive-gaussian
};

// Builds the high-dimensional affinities for the selected kernel. The
// isolation forest draws its sampling stream from `seed`, so a whole run is
// replayable from one seed.
AffinityMatrix build_affinity(const DataMatrix& data, const DistanceTable& dists,
                              const KernelSettings& kernel, std::uint64_t seed);

struct RunOutcome {
    Embedding embedding;
    OptimizerTrace trace;
};

// Affinities then optimization; expects an already-normalized dataset.
RunOutcome run_embedding(const DataMatrix& data, const DistanceTable& dists,
                         const KernelSettings& kernel, const OptimizerConfig& opt);

struct SweepRow {
    double param = 0.0;  // resolved parameter (perplexity, psi or k)
    bool ok = false;
    std::string error;
    double auc_rnx = 0.0;
    std::optional<double> db;
    std::optional<double> ch;
    double final_kl = 0.0;
};

struct SweepOutcome {
    std::vector<SweepRow> rows;
    std::ptrdiff_t best = -1;  // index of the best ok row by AUC, ties to smaller param
    RunOutcome best_run;
    MetricReport best_report;
};

// Table 2 style search grids: perplexity {1, 5, 9, ..., 97} for the Gaussian
// kernel (and the k-based kernels), psi {0.01n, 0.05n, ..., 0.97n} for the
// Isolation Kernel.
std::vector<std::string> default_grid(KernelKind kind);

// One run per grid entry over a shared normalized dataset; every run uses the
// same optimizer seed so parameter comparisons isolate the kernel change.
// Failures are recorded per row, never fatal. Grid entries run concurrently
// up to `jobs` workers; results do not depend on the worker count.
SweepOutcome run_sweep(const DatasetBundle& normalized, KernelKind kind,
                       const std::vector<std::string>& grid, const KernelSettings& base,
                       const OptimizerConfig& opt, std::size_t jobs);

}  // namespace iktsne
