#include "iktsne/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <tuple>

#include "iktsne/distance.hpp"
#include "iktsne/errors.hpp"
#include "iktsne/rng.hpp"

namespace iktsne {

DatasetBundle gen_subspace_clusters(std::uint64_t seed) {
    constexpr std::size_t kClusters = 5;
    constexpr std::size_t kPerCluster = 250;
    constexpr std::size_t kBlock = 10;
    constexpr std::size_t kDim = kClusters * kBlock;
    constexpr double kMean[kClusters] = {0.0, 0.0, 0.0, 400.0, 500.0};
    constexpr double kStddev[kClusters] = {1.0, 4.0, 9.0, 16.0, 25.0};

    std::vector<double> values(kClusters * kPerCluster * kDim, 0.0);
    std::vector<int> labels(kClusters * kPerCluster, 0);
    NormalSampler normal(derive_seed(seed, 0));
    for (std::size_t c = 0; c < kClusters; ++c) {
        for (std::size_t p = 0; p < kPerCluster; ++p) {
            const std::size_t row = c * kPerCluster + p;
            labels[row] = static_cast<int>(c);
            for (std::size_t a = 0; a < kBlock; ++a) {
                values[row * kDim + c * kBlock + a] = kMean[c] + kStddev[c] * normal();
            }
        }
    }
    DatasetBundle bundle{DataMatrix::dense(kDim, std::move(values)),
                         Labels{std::move(labels), kClusters},
                         "subspace5", false, {}};
    for (std::size_t c = 0; c < kClusters; ++c) {
        bundle.label_names.push_back(std::to_string(c));
    }
    return bundle;
}

DatasetBundle gen_concentrated_noise(std::uint64_t seed) {
    constexpr std::size_t kCore = 550;
    constexpr std::size_t kNoise = 250;
    constexpr std::size_t kDim = 250;
    constexpr std::size_t kActive = 100;

    std::vector<double> values((kCore + kNoise) * kDim, 0.0);
    std::vector<int> labels(kCore + kNoise, 0);
    std::mt19937_64 eng(derive_seed(seed, 1));
    std::vector<std::uint32_t> pool(kDim);
    for (std::size_t p = 0; p < kNoise; ++p) {
        const std::size_t row = kCore + p;
        labels[row] = 1;
        std::iota(pool.begin(), pool.end(), 0u);
        for (std::size_t k = 0; k < kActive; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, kDim - 1);
            std::swap(pool[k], pool[pick(eng)]);
            values[row * kDim + pool[k]] = 1.0;
        }
    }
    return DatasetBundle{DataMatrix::dense(kDim, std::move(values)),
                         Labels{std::move(labels), 2},
                         "concentrated", false, {"core", "noise"}};
}

TwoDensityData gen_two_density_strip(const TwoDensityConfig& cfg) {
    if (!(cfg.rho_ratio > 1.0)) {
        throw argument_error("gen_two_density_strip: rho_ratio must exceed 1");
    }
    if (cfg.n_sparse < 10 || cfg.n_dense < 10) {
        throw argument_error("gen_two_density_strip: both point counts must be >= 10");
    }
    if (cfg.d < 1) {
        throw argument_error("gen_two_density_strip: d must be >= 1");
    }
    const std::size_t n = cfg.n_sparse + cfg.n_dense;
    const std::size_t d = cfg.d;

    // Sparse box: unit cube. Dense box: equal axis scaling with volume chosen
    // so density_dense / density_sparse = rho_ratio; offset along axis 0.
    const double volume_dense =
        (static_cast<double>(cfg.n_dense) / static_cast<double>(cfg.n_sparse)) / cfg.rho_ratio;
    const double side = std::pow(volume_dense, 1.0 / static_cast<double>(d));
    const double offset = 2.0;

    std::vector<double> values(n * d, 0.0);
    std::vector<int> labels(n, 0);
    std::mt19937_64 eng(derive_seed(cfg.seed, 2));
    for (std::size_t i = 0; i < cfg.n_sparse; ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            values[i * d + a] = uniform_unit(eng);
        }
    }
    for (std::size_t i = cfg.n_sparse; i < n; ++i) {
        labels[i] = 1;
        for (std::size_t a = 0; a < d; ++a) {
            values[i * d + a] = uniform_unit(eng) * side + (a == 0 ? offset : 0.0);
        }
    }

    TwoDensityData out{DatasetBundle{DataMatrix::dense(d, std::move(values)),
                                     Labels{std::move(labels), 2},
                                     "two-density", false, {"sparse", "dense"}},
                       {}};

    // Match intra-region pairs by distance: sort both pair lists, then walk
    // them together keeping pairs that agree within 1% of the smaller
    // distance.
    struct Pair {
        double dist;
        std::uint32_t a;
        std::uint32_t b;
    };
    const auto collect = [&](std::size_t begin, std::size_t end) {
        std::vector<Pair> pairs;
        pairs.reserve((end - begin) * (end - begin - 1) / 2);
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = i + 1; j < end; ++j) {
                pairs.push_back({std::sqrt(pairwise_sq_dist(out.bundle.data, i, j)),
                                 static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
            }
        }
        std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
            if (x.dist != y.dist) {
                return x.dist < y.dist;
            }
            return std::tie(x.a, x.b) < std::tie(y.a, y.b);
        });
        return pairs;
    };
    const auto sparse_pairs = collect(0, cfg.n_sparse);
    const auto dense_pairs = collect(cfg.n_sparse, n);

    constexpr std::size_t kMaxPairs = 200;
    std::size_t si = 0;
    for (const auto& dp : dense_pairs) {
        if (out.pairs.size() >= kMaxPairs) {
            break;
        }
        while (si < sparse_pairs.size() && sparse_pairs[si].dist < dp.dist * 0.99) {
            ++si;
        }
        if (si == sparse_pairs.size()) {
            break;
        }
        const auto& sp = sparse_pairs[si];
        if (std::abs(sp.dist - dp.dist) <= 0.01 * std::min(sp.dist, dp.dist)) {
            out.pairs.push_back({sp.a, sp.b, dp.a, dp.b});
            ++si;  // consume the sparse pair
        }
    }
    if (out.pairs.size() < 20) {
        throw generation_error("gen_two_density_strip: only " + std::to_string(out.pairs.size()) +
                               " matched pairs found; increase n_sparse/n_dense");
    }
    return out;
}

}  // namespace iktsne
