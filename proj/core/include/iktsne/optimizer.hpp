#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "iktsne/affinity.hpp"
#include "iktsne/embedding.hpp"

namespace iktsne {

// Gradient-descent schedule. The values are artifact defaults in the spirit
// of the classic t-SNE recipe; every one of them is configurable.
struct OptimizerConfig {
    std::size_t iterations = 1000;
    double learning_rate = 200.0;
    double momentum_initial = 0.5;
    double momentum_final = 0.8;
    std::size_t momentum_switch_iter = 250;
    double exaggeration_factor = 4.0;
    std::size_t exaggeration_iters = 100;
    std::uint64_t seed = 0;
    double init_scale = 1e-4;
};

// Per-iteration objective and gradient-magnitude record. Entry k is evaluated
// at the coordinates the k-th update started from; during the exaggeration
// phase the objective is the exaggerated one the optimizer actually descends.
struct OptimizerTrace {
    std::vector<double> kl_per_iteration;
    std::vector<double> gradient_norm_per_iteration;
};

// Student-t joint probabilities of a 2-D layout:
// q_ij = s_ij / sum_{k != l} s_kl with s_ij = (1 + ||y_i - y_j||^2)^{-1}.
AffinityMatrix low_dim_q(std::span<const double> coords);

// KL(P || Q) over ordered pairs with the 0 log 0 convention. q entries are
// floored at 1e-12 inside the log for reporting; an exactly-zero q facing
// positive p yields +infinity.
double kl_cost(const AffinityMatrix& p, const AffinityMatrix& q);

// Exact analytic gradient of kl_cost(p, low_dim_q(coords)):
// dC/dy_i = 4 sum_j (p_ij - q_ij) (y_i - y_j) s_ij. Returns n*2 row-major.
std::vector<double> kl_gradient(const AffinityMatrix& p, std::span<const double> coords);

struct TsneResult {
    Embedding embedding;
    OptimizerTrace trace;
};

// Plain momentum gradient descent on the KL objective. Coordinates start from
// an isotropic Gaussian of deviation cfg.init_scale drawn from cfg.seed; P is
// multiplied by cfg.exaggeration_factor for the first cfg.exaggeration_iters
// iterations and restored exactly afterwards. Bitwise deterministic for a
// fixed seed regardless of thread count. Throws divergence_error if the
// layout leaves the finite range.
TsneResult run_tsne(const AffinityMatrix& p, const OptimizerConfig& cfg);

}  // namespace iktsne
