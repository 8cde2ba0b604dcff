#include "iktsne/gaussian_affinity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "iktsne/errors.hpp"
#include "iktsne/parallel.hpp"

namespace iktsne {

namespace {

constexpr int kMaxBracketSteps = 64;

// Entropy (bits) of the conditional row of point i at inverse bandwidth
// beta = 1/(2 sigma^2), from its squared-distance row. Weights are shifted by
// the minimum off-diagonal distance; that cancels in the normalized row and
// keeps the largest weight at exp(0), so the row itself never underflows.
double row_entropy_bits(std::span<const double> d2, std::size_t i, double beta,
                        std::vector<double>& w) {
    const std::size_t n = d2.size();
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i) {
            m = std::min(m, d2[j]);
        }
    }
    double sum = 0.0;
    double dot = 0.0;
    w.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) {
            w[j] = 0.0;
            continue;
        }
        const double shifted = d2[j] - m;
        const double wj = std::exp(-beta * shifted);
        w[j] = wj;
        sum += wj;
        dot += wj * shifted;
    }
    const double h_nats = beta * (dot / sum) + std::log(sum);
    return h_nats / std::numbers::ln2;
}

bool all_off_diagonal_zero(std::span<const double> d2, std::size_t i) {
    for (std::size_t j = 0; j < d2.size(); ++j) {
        if (j != i && d2[j] != 0.0) {
            return false;
        }
    }
    return true;
}

std::vector<double> conditional_from_dists(std::span<const double> d2, std::size_t i, double sigma) {
    if (!(sigma > 0.0)) {
        throw argument_error("row_conditional_probs: sigma must be positive");
    }
    const std::size_t n = d2.size();
    const double beta = 1.0 / (2.0 * sigma * sigma);

    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i) {
            m = std::min(m, d2[j]);
        }
    }
    // The nearest neighbour carries the largest kernel value exp(-beta*m);
    // if even that underflows to zero the row is unusable.
    if (std::exp(-beta * m) == 0.0) {
        throw degenerate_row_error("conditional row underflowed to zero for point " + std::to_string(i), i);
    }

    std::vector<double> row(n, 0.0);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) {
            continue;
        }
        const double wj = std::exp(-beta * (d2[j] - m));
        row[j] = wj;
        sum += wj;
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (j != i) {
            row[j] /= sum;
        }
    }
    return row;
}

struct PointSearchResult {
    double sigma = 1.0;
    double entropy_bits = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

PointSearchResult search_sigma(std::span<const double> d2, std::size_t i, double target_bits,
                               double tolerance, std::size_t max_iterations,
                               std::vector<double>& scratch) {
    PointSearchResult best;
    best.entropy_bits = -std::numeric_limits<double>::infinity();

    double sigma = 1.0;
    double best_gap = std::numeric_limits<double>::infinity();
    const auto evaluate = [&](double s) {
        const double h = row_entropy_bits(d2, i, 1.0 / (2.0 * s * s), scratch);
        ++best.evaluations;
        const double gap = std::abs(h - target_bits);
        if (gap < best_gap) {
            best_gap = gap;
            best.sigma = s;
            best.entropy_bits = h;
        }
        return h;
    };

    double h = evaluate(sigma);
    if (best_gap <= tolerance) {
        best.converged = true;
        return best;
    }

    // Entropy increases with sigma: expand the bracket in the direction of
    // the target, then bisect.
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    if (h < target_bits) {
        lo = sigma;
        for (int step = 0; step < kMaxBracketSteps; ++step) {
            sigma *= 2.0;
            h = evaluate(sigma);
            if (best_gap <= tolerance) {
                best.converged = true;
                return best;
            }
            if (h >= target_bits) {
                hi = sigma;
                break;
            }
            lo = sigma;
        }
    } else {
        hi = sigma;
        for (int step = 0; step < kMaxBracketSteps; ++step) {
            sigma *= 0.5;
            h = evaluate(sigma);
            if (best_gap <= tolerance) {
                best.converged = true;
                return best;
            }
            if (h <= target_bits) {
                lo = sigma;
                break;
            }
            hi = sigma;
        }
    }
    if (!std::isfinite(hi) || lo == 0.0) {
        return best;  // bracket never closed; keep the best effort
    }

    while (best.evaluations < max_iterations) {
        const double mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) {
            break;  // interval collapsed to adjacent doubles
        }
        h = evaluate(mid);
        if (best_gap <= tolerance) {
            best.converged = true;
            return best;
        }
        if (h < target_bits) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return best;
}

}  // namespace

double gaussian_similarity(double sq_dist, double sigma) {
    if (!(sigma > 0.0)) {
        throw argument_error("gaussian_similarity: sigma must be positive");
    }
    if (!(sq_dist >= 0.0)) {
        throw argument_error("gaussian_similarity: squared distance must be nonnegative");
    }
    return std::exp(-sq_dist / (2.0 * sigma * sigma));
}

std::vector<double> row_conditional_probs(const DataMatrix& data, std::size_t i, double sigma) {
    if (i >= data.n()) {
        throw argument_error("row_conditional_probs: point index out of range");
    }
    std::vector<double> d2(data.n(), 0.0);
    for (std::size_t j = 0; j < data.n(); ++j) {
        if (j != i) {
            d2[j] = pairwise_sq_dist(data, i, j);
        }
    }
    return conditional_from_dists(d2, i, sigma);
}

std::vector<double> row_conditional_probs(const DistanceTable& dists, std::size_t i, double sigma) {
    if (i >= dists.n()) {
        throw argument_error("row_conditional_probs: point index out of range");
    }
    return conditional_from_dists(dists.row(i), i, sigma);
}

EntropyPerplexity entropy_and_perplexity(std::span<const double> row) {
    double h = 0.0;
    for (double p : row) {
        if (p > 0.0) {
            h -= p * std::log2(p);
        }
    }
    return {h, std::exp2(h)};
}

BandwidthProfile fit_bandwidths(const DataMatrix& data, const PerplexityConfig& cfg) {
    return fit_bandwidths(DistanceTable::build(data), cfg);
}

BandwidthProfile fit_bandwidths(const DistanceTable& dists, const PerplexityConfig& cfg) {
    const std::size_t n = dists.n();
    if (!(cfg.perplexity > 1.0) || !(cfg.perplexity < static_cast<double>(n))) {
        throw argument_error("fit_bandwidths: perplexity must lie in (1, n)");
    }
    if (!(cfg.tolerance > 0.0)) {
        throw argument_error("fit_bandwidths: tolerance must be positive");
    }
    const double target_bits = std::log2(cfg.perplexity);

    BandwidthProfile out;
    out.sigma.assign(n, 1.0);
    out.achieved_perplexity.assign(n, 0.0);
    out.search_iterations.assign(n, 0);
    out.converged.assign(n, false);

    // Degenerate rows are detected up front so the parallel section can stay
    // exception-free.
    for (std::size_t i = 0; i < n; ++i) {
        if (all_off_diagonal_zero(dists.row(i), i)) {
            throw degenerate_row_error("fit_bandwidths: point " + std::to_string(i) +
                                       " is at zero distance to every other point", i);
        }
    }

    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        std::vector<double> scratch;
        for (std::size_t i = begin; i < end; ++i) {
            const auto r = search_sigma(dists.row(i), i, target_bits, cfg.tolerance,
                                        cfg.max_search_iterations, scratch);
            out.sigma[i] = r.sigma;
            out.achieved_perplexity[i] = std::exp2(r.entropy_bits);
            out.search_iterations[i] = r.evaluations;
            out.converged[i] = r.converged;
        }
    });
    return out;
}

AffinityMatrix symmetrized_affinities(const std::vector<std::vector<double>>& conditional) {
    const std::size_t n = conditional.size();
    if (n < 2) {
        throw argument_error("symmetrized_affinities: need at least 2 rows");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (conditional[i].size() != n) {
            throw argument_error("symmetrized_affinities: ragged conditional matrix");
        }
        if (conditional[i][i] != 0.0) {
            throw argument_error("symmetrized_affinities: nonzero diagonal at row " + std::to_string(i));
        }
        double sum = 0.0;
        for (double v : conditional[i]) {
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw argument_error("symmetrized_affinities: row " + std::to_string(i) +
                                 " sums to " + std::to_string(sum));
        }
    }

    AffinityMatrix out;
    out.n = n;
    out.p.assign(n * n, 0.0);
    const double scale = 1.0 / (2.0 * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = (conditional[i][j] + conditional[j][i]) * scale;
            out.p[i * n + j] = v;
            out.p[j * n + i] = v;
        }
    }
    return out;
}

AffinityMatrix gaussian_affinities(const DistanceTable& dists, const PerplexityConfig& cfg) {
    const auto profile = fit_bandwidths(dists, cfg);
    const std::size_t n = dists.n();
    std::vector<std::vector<double>> conditional(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            conditional[i] = conditional_from_dists(dists.row(i), i, profile.sigma[i]);
        }
    });
    return symmetrized_affinities(conditional);
}

}  // namespace iktsne
