#include "iktsne/alt_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "iktsne/errors.hpp"
#include "iktsne/gaussian_affinity.hpp"
#include "iktsne/parallel.hpp"

namespace iktsne {

namespace {

void check_k(std::size_t k, std::size_t n) {
    if (k < 1) {
        throw argument_error("KnnConfig: k must be >= 1");
    }
    if (k >= n) {
        throw argument_error("KnnConfig: k must be < n");
    }
}

// Indices of the k nearest neighbours of i, ties by lower index.
std::vector<std::uint32_t> knn_of(const DistanceTable& dists, std::size_t i, std::size_t k) {
    const auto row = dists.row(i);
    std::vector<std::uint32_t> idx;
    idx.reserve(dists.n() - 1);
    for (std::size_t j = 0; j < dists.n(); ++j) {
        if (j != i) {
            idx.push_back(static_cast<std::uint32_t>(j));
        }
    }
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                          if (row[a] != row[b]) {
                              return row[a] < row[b];
                          }
                          return a < b;
                      });
    idx.resize(k);
    return idx;
}

double kth_neighbour_distance(const DistanceTable& dists, std::size_t i, std::size_t k) {
    const auto nn = knn_of(dists, i, k);
    return std::sqrt(dists.at(i, nn.back()));
}

}  // namespace

std::vector<std::vector<std::uint32_t>> neighbour_order(const DistanceTable& dists) {
    const std::size_t n = dists.n();
    std::vector<std::vector<std::uint32_t>> order(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto row = dists.row(i);
            auto& idx = order[i];
            idx.reserve(n - 1);
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    idx.push_back(static_cast<std::uint32_t>(j));
                }
            }
            std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
                if (row[a] != row[b]) {
                    return row[a] < row[b];
                }
                return a < b;
            });
        }
    });
    return order;
}

int knn_kernel_similarity(const DataMatrix& data, const KnnConfig& cfg, std::size_t i, std::size_t j) {
    check_k(cfg.k, data.n());
    if (i == j) {
        throw argument_error("knn_kernel_similarity: i and j must differ");
    }
    if (i >= data.n() || j >= data.n()) {
        throw argument_error("knn_kernel_similarity: point index out of range");
    }
    const double dj = pairwise_sq_dist(data, i, j);
    // rank of j among i's neighbours under the (distance, index) order
    std::size_t closer = 0;
    for (std::size_t m = 0; m < data.n(); ++m) {
        if (m == i || m == j) {
            continue;
        }
        const double dm = pairwise_sq_dist(data, i, m);
        if (dm < dj || (dm == dj && m < j)) {
            ++closer;
        }
    }
    return closer < cfg.k ? 1 : 0;
}

double adaptive_gaussian_similarity(const DataMatrix& data, const KnnConfig& cfg,
                                    std::size_t i, std::size_t j) {
    check_k(cfg.k, data.n());
    if (i >= data.n() || j >= data.n()) {
        throw argument_error("adaptive_gaussian_similarity: point index out of range");
    }
    if (i == j) {
        return 1.0;
    }
    const DistanceTable dists = DistanceTable::build(data);
    const double si = kth_neighbour_distance(dists, i, cfg.k);
    const double sj = kth_neighbour_distance(dists, j, cfg.k);
    if (si == 0.0) {
        throw degenerate_bandwidth_error("adaptive_gaussian_similarity: zero k-NN distance at point " +
                                         std::to_string(i), i);
    }
    if (sj == 0.0) {
        throw degenerate_bandwidth_error("adaptive_gaussian_similarity: zero k-NN distance at point " +
                                         std::to_string(j), j);
    }
    return std::exp(-std::sqrt(dists.at(i, j)) / (si * sj));
}

AffinityMatrix knn_affinities(const DistanceTable& dists, const KnnConfig& cfg) {
    const std::size_t n = dists.n();
    check_k(cfg.k, n);
    std::vector<std::vector<double>> conditional(n);
    const double inv_k = 1.0 / static_cast<double>(cfg.k);
    for (std::size_t i = 0; i < n; ++i) {
        conditional[i].assign(n, 0.0);
        for (std::uint32_t j : knn_of(dists, i, cfg.k)) {
            conditional[i][j] = inv_k;
        }
    }
    return symmetrized_affinities(conditional);
}

AffinityMatrix adaptive_gaussian_affinities(const DistanceTable& dists, const KnnConfig& cfg) {
    const std::size_t n = dists.n();
    check_k(cfg.k, n);
    std::vector<double> sigma(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        sigma[i] = kth_neighbour_distance(dists, i, cfg.k);
        if (sigma[i] == 0.0) {
            throw degenerate_bandwidth_error("adaptive_gaussian_affinities: zero k-NN distance at point " +
                                             std::to_string(i), i);
        }
    }
    std::vector<std::vector<double>> conditional(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& row = conditional[i];
        row.assign(n, 0.0);
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const double v = std::exp(-std::sqrt(dists.at(i, j)) / (sigma[i] * sigma[j]));
            row[j] = v;
            sum += v;
        }
        if (sum == 0.0) {
            throw degenerate_row_error("adaptive_gaussian_affinities: row " + std::to_string(i) +
                                       " underflowed to zero", i);
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                row[j] /= sum;
            }
        }
    }
    return symmetrized_affinities(conditional);
}

}  // namespace iktsne
