#include "iktsne/optimizer.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "iktsne/errors.hpp"
#include "iktsne/parallel.hpp"
#include "iktsne/rng.hpp"

namespace iktsne {

namespace {

void check_config(const OptimizerConfig& cfg) {
    if (cfg.iterations < 1) {
        throw argument_error("OptimizerConfig: iterations must be >= 1");
    }
    if (!(cfg.learning_rate > 0.0)) {
        throw argument_error("OptimizerConfig: learning rate must be positive");
    }
    for (double m : {cfg.momentum_initial, cfg.momentum_final}) {
        if (!(m >= 0.0) || !(m < 1.0)) {
            throw argument_error("OptimizerConfig: momentum must lie in [0, 1)");
        }
    }
    if (cfg.exaggeration_iters >= cfg.iterations) {
        throw argument_error("OptimizerConfig: exaggeration_iters must be < iterations");
    }
    if (!(cfg.init_scale > 0.0)) {
        throw argument_error("OptimizerConfig: init_scale must be positive");
    }
}

// Fills the full n-by-n Student-t similarity matrix and per-row sums.
// Cells (i,j) and (j,i) run the same arithmetic, so the matrix is symmetric
// bitwise; per-row sums accumulate in ascending j, keeping the total
// independent of the thread partition.
void fill_similarities(std::span<const double> coords, std::size_t n,
                       std::vector<double>& s, std::vector<double>& row_sum) {
    s.assign(n * n, 0.0);
    row_sum.assign(n, 0.0);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double xi = coords[2 * i];
            const double yi = coords[2 * i + 1];
            double* srow = s.data() + i * n;
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) {
                    continue;
                }
                const double dx = xi - coords[2 * j];
                const double dy = yi - coords[2 * j + 1];
                const double sij = 1.0 / (1.0 + (dx * dx + dy * dy));
                srow[j] = sij;
                sum += sij;
            }
            row_sum[i] = sum;
        }
    });
}

double total_in_order(const std::vector<double>& row_sum) {
    double total = 0.0;
    for (double v : row_sum) {
        total += v;
    }
    return total;
}

// Gradient rows from the similarity matrix: grad_i = 4 sum_j (p - q) s (y_i - y_j)
// with q = s / total. The public kl_gradient divides exactly so that p built
// from low_dim_q cancels bitwise; the optimizer loop trades that for a
// reciprocal multiply.
template <bool exact_division>
void gradient_rows(std::span<const double> p, std::span<const double> coords, std::size_t n,
                   const std::vector<double>& s, double total, std::vector<double>& grad) {
    const double inv_total = 1.0 / total;
    grad.assign(n * 2, 0.0);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double xi = coords[2 * i];
            const double yi = coords[2 * i + 1];
            const double* srow = s.data() + i * n;
            const double* prow = p.data() + i * n;
            double gx = 0.0;
            double gy = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) {
                    continue;
                }
                const double sij = srow[j];
                const double qij = exact_division ? sij / total : sij * inv_total;
                const double mult = (prow[j] - qij) * sij;
                gx += mult * (xi - coords[2 * j]);
                gy += mult * (yi - coords[2 * j + 1]);
            }
            grad[2 * i] = 4.0 * gx;
            grad[2 * i + 1] = 4.0 * gy;
        }
    });
}

}  // namespace

AffinityMatrix low_dim_q(std::span<const double> coords) {
    if (coords.size() < 4 || coords.size() % 2 != 0) {
        throw argument_error("low_dim_q: need at least 2 points of 2-D coords");
    }
    const std::size_t n = coords.size() / 2;
    for (double c : coords) {
        if (!std::isfinite(c)) {
            throw argument_error("low_dim_q: non-finite coordinate");
        }
    }
    std::vector<double> s;
    std::vector<double> row_sum;
    fill_similarities(coords, n, s, row_sum);
    const double total = total_in_order(row_sum);

    AffinityMatrix q;
    q.n = n;
    q.p.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                q.p[i * n + j] = s[i * n + j] / total;
            }
        }
    }
    return q;
}

double kl_cost(const AffinityMatrix& p, const AffinityMatrix& q) {
    if (p.n != q.n) {
        throw argument_error("kl_cost: size mismatch");
    }
    const std::size_t n = p.n;
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double pij = p.p[i * n + j];
            if (pij == 0.0) {
                continue;  // 0 log 0 = 0
            }
            const double qij = q.p[i * n + j];
            if (qij == 0.0) {
                return std::numeric_limits<double>::infinity();
            }
            kl += pij * std::log(pij / std::max(qij, 1e-12));
        }
    }
    return kl;
}

std::vector<double> kl_gradient(const AffinityMatrix& p, std::span<const double> coords) {
    const std::size_t n = p.n;
    if (coords.size() != 2 * n) {
        throw argument_error("kl_gradient: coords do not match affinity size");
    }
    std::vector<double> s;
    std::vector<double> row_sum;
    fill_similarities(coords, n, s, row_sum);
    std::vector<double> grad;
    gradient_rows<true>(p.p, coords, n, s, total_in_order(row_sum), grad);
    return grad;
}

TsneResult run_tsne(const AffinityMatrix& p, const OptimizerConfig& cfg) {
    p.validate();
    check_config(cfg);
    const std::size_t n = p.n;

    std::vector<double> coords(2 * n, 0.0);
    NormalSampler normal(cfg.seed);
    for (auto& c : coords) {
        c = cfg.init_scale * normal();
    }

    // Working copy of P, exaggerated during the initial phase and restored
    // from the original afterwards (exact restore, no drift).
    std::vector<double> pw = p.p;
    const bool exaggerate = cfg.exaggeration_iters > 0 && cfg.exaggeration_factor != 1.0;
    if (exaggerate) {
        for (auto& v : pw) {
            v *= cfg.exaggeration_factor;
        }
    }

    // Per-phase constants of the trace objective:
    // KL = sum pw log pw - sum_{i!=j} pw log s + (sum pw) log S.
    double plogp = 0.0;
    double pmass = 0.0;
    const auto refresh_phase_constants = [&] {
        plogp = 0.0;
        pmass = 0.0;
        for (double v : pw) {
            if (v > 0.0) {
                plogp += v * std::log(v);
            }
            pmass += v;
        }
    };
    refresh_phase_constants();

    OptimizerTrace trace;
    trace.kl_per_iteration.reserve(cfg.iterations);
    trace.gradient_norm_per_iteration.reserve(cfg.iterations);

    std::vector<double> s;
    std::vector<double> row_sum;
    std::vector<double> grad;
    std::vector<double> velocity(2 * n, 0.0);
    std::vector<double> kl_partial(n, 0.0);

    for (std::size_t iter = 0; iter < cfg.iterations; ++iter) {
        if (exaggerate && iter == cfg.exaggeration_iters) {
            pw = p.p;
            refresh_phase_constants();
        }

        fill_similarities(coords, n, s, row_sum);
        const double total = total_in_order(row_sum);
        gradient_rows<false>(pw, coords, n, s, total, grad);

        // Trace objective: the pw-log-s term sums upper-triangle pairs,
        // doubled by symmetry. Zero-mass pairs contribute an exact zero; the
        // log runs unconditionally so the iteration cost does not depend on
        // the sparsity of P (the mapping phase is kernel-agnostic).
        parallel_for(n, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                const double* srow = s.data() + i * n;
                const double* prow = pw.data() + i * n;
                double acc = 0.0;
                for (std::size_t j = i + 1; j < n; ++j) {
                    acc += prow[j] * std::log(srow[j]);
                }
                kl_partial[i] = acc;
            }
        });
        const double plogs = 2.0 * total_in_order(kl_partial);
        trace.kl_per_iteration.push_back(plogp - plogs + pmass * std::log(total));

        double grad_sq = 0.0;
        for (double g : grad) {
            grad_sq += g * g;
        }
        trace.gradient_norm_per_iteration.push_back(std::sqrt(grad_sq));

        const double momentum =
            iter < cfg.momentum_switch_iter ? cfg.momentum_initial : cfg.momentum_final;
        for (std::size_t k = 0; k < 2 * n; ++k) {
            velocity[k] = momentum * velocity[k] - cfg.learning_rate * grad[k];
            coords[k] += velocity[k];
        }
        for (double c : coords) {
            if (!std::isfinite(c)) {
                throw divergence_error("run_tsne: non-finite coordinates at iteration " +
                                       std::to_string(iter), iter);
            }
        }
    }

    TsneResult result;
    result.embedding.n = n;
    result.embedding.coords = std::move(coords);
    result.embedding.iterations_run = cfg.iterations;
    result.embedding.final_kl = kl_cost(p, low_dim_q(result.embedding.coords));
    result.trace = std::move(trace);
    return result;
}

}  // namespace iktsne
