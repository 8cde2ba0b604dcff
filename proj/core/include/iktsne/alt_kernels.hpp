#pragma once

#include <cstddef>
#include <vector>

#include "iktsne/affinity.hpp"
#include "iktsne/data_matrix.hpp"
#include "iktsne/distance.hpp"

namespace iktsne {

struct KnnConfig {
    std::size_t k = 10;  // must satisfy 1 <= k < n
};

// Binary kNN kernel: 1 iff j is among the k nearest neighbours of i (self
// excluded, distance ties broken by lower point index). Asymmetric by
// definition.
int knn_kernel_similarity(const DataMatrix& data, const KnnConfig& cfg, std::size_t i, std::size_t j);

// Adaptive Gaussian kernel exp(-||x_i - x_j||_2 / (sigma_i sigma_j)), where
// sigma_i is the (unsquared) distance from i to its k-th nearest neighbour.
// The exponent uses the first power of the distance, as defined. Throws
// degenerate_bandwidth_error when a point's k-th neighbour distance is zero.
double adaptive_gaussian_similarity(const DataMatrix& data, const KnnConfig& cfg,
                                    std::size_t i, std::size_t j);

// Affinity pipelines: conditional rows then symmetrization. kNN rows are
// normalized by dividing by k; adaptive Gaussian rows normalize by the
// off-diagonal kernel sum.
AffinityMatrix knn_affinities(const DistanceTable& dists, const KnnConfig& cfg);
AffinityMatrix adaptive_gaussian_affinities(const DistanceTable& dists, const KnnConfig& cfg);

// Neighbour lists sorted by (distance, index); row i excludes i itself.
// Shared by the alternative kernels and the quality metrics.
std::vector<std::vector<std::uint32_t>> neighbour_order(const DistanceTable& dists);

}  // namespace iktsne
