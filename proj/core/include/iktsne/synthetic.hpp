#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "iktsne/data_io.hpp"

namespace iktsne {

// 1250 x 50 dataset of 5 subspace clusters, 250 points each. Cluster c draws
// attributes [10c, 10c+10) from its own normal distribution and is zero
// elsewhere, so no two clusters share an active attribute. The per-dimension
// distributions are N(0,1), N(0,16), N(0,81), N(400,256), N(500,625)
// (mean, variance): the first three clusters share the zero mean, the
// variances differ by up to a factor of 625.
DatasetBundle gen_subspace_clusters(std::uint64_t seed);

// 800 x 250 dataset: 550 points at the origin (label 0) plus 250 noise points
// (label 1), each with a uniformly random subset of 100 attributes set to 1.
DatasetBundle gen_concentrated_noise(std::uint64_t seed);

struct TwoDensityConfig {
    std::size_t n_sparse = 200;
    std::size_t n_dense = 200;
    double rho_ratio = 8.0;  // dense-to-sparse density ratio, > 1
    std::size_t d = 2;
    std::uint64_t seed = 0;
};

// A pair of equal-length point pairs, one drawn inside each region, whose
// inter-point distances agree within 1%.
struct MatchedPair {
    std::size_t sparse_a;
    std::size_t sparse_b;
    std::size_t dense_a;
    std::size_t dense_b;
};

struct TwoDensityData {
    DatasetBundle bundle;  // labels: 0 sparse region, 1 dense region
    std::vector<MatchedPair> pairs;
};

// Two uniform boxes separated along the first axis. The sparse box is the
// unit cube; the dense box is scaled so its point density is rho_ratio times
// the sparse one. Returns at least 20 matched equal-distance pairs or throws
// generation_error suggesting larger counts.
TwoDensityData gen_two_density_strip(const TwoDensityConfig& cfg);

}  // namespace iktsne
