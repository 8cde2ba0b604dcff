#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "iktsne/affinity.hpp"
#include "iktsne/data_matrix.hpp"
#include "iktsne/distance.hpp"

namespace iktsne {

// Parameters of the Isolation Kernel model: psi centers per partitioning
// (the sharpness parameter) and t independent partitionings averaged by the
// estimator.
struct IsolationConfig {
    std::size_t psi = 2;    // 2 <= psi <= n
    std::size_t t = 200;
    std::uint64_t seed = 0;
};

// A fitted Isolation Kernel model: t Voronoi partitionings, each defined by
// psi distinct center points sampled without replacement from the training
// data. Each partitioning covers all of R^d (every query has a nearest
// center), so cell membership is total.
//
// The kernel value of two points is the fraction of partitionings that place
// them in the same Voronoi cell: larger psi means smaller cells and a sharper
// kernel, and because centers are sampled from the data itself, cells are
// small where the data is dense and large where it is sparse. That is the
// data-dependent behaviour the Gaussian kernel lacks.
struct VoronoiForest {
    std::uint64_t seed = 0;
    std::size_t psi = 0;
    std::vector<std::vector<std::uint32_t>> partitionings;  // t rows of psi center indices

    std::size_t t() const noexcept { return partitionings.size(); }
};

// Samples t partitionings of psi distinct point indices each. Partitioning p
// draws from its own RNG stream derived from (seed, p), so builds are
// reproducible and parallelizable.
VoronoiForest build_forest(const DataMatrix& data, const IsolationConfig& cfg);

// Deterministic variant that enumerates every size-psi subset of the n points
// exactly once (the finite estimator becomes the exact expectation over
// subsets). Intended for n <= 12; throws argument_error beyond 20.
VoronoiForest build_forest_exhaustive(const DataMatrix& data, std::size_t psi);

// Slot (position within the partitioning's center list) of the center nearest
// to the query point; distance ties break to the lowest slot.
std::size_t nearest_center_index(const VoronoiForest& forest, const DataMatrix& data,
                                 std::size_t partitioning, std::size_t query);

// Precomputed cell membership: an n-by-t table of center slots, the feature
// map of the kernel. Similarity becomes a match count over t slots.
class CellMembership {
public:
    static CellMembership build(const VoronoiForest& forest, const DataMatrix& data);
    static CellMembership build(const VoronoiForest& forest, const DistanceTable& dists);

    std::size_t n() const noexcept { return n_; }
    std::size_t t() const noexcept { return t_; }
    std::uint16_t slot(std::size_t point, std::size_t partitioning) const {
        return slots_[point * t_ + partitioning];
    }

    // Match count over partitionings; kernel value is matches/t.
    std::size_t matches(std::size_t i, std::size_t j) const;
    double similarity(std::size_t i, std::size_t j) const;

private:
    std::size_t n_ = 0;
    std::size_t t_ = 0;
    std::vector<std::uint16_t> slots_;
};

// Fraction of partitionings in which i and j share a Voronoi cell; 1 when
// i == j. Convenience form that recomputes memberships per call.
double isolation_similarity(const VoronoiForest& forest, const DataMatrix& data,
                            std::size_t i, std::size_t j);

// High-dimensional affinities from the kernel: conditional rows
// p_{j|i} = K(x_i,x_j) / sum_{k != i} K(x_i,x_k) with zero diagonal, then
// symmetrized. The denominator excludes the self term. Throws
// degenerate_row_error for a point that shares no cell with any other point.
AffinityMatrix isolation_affinities(const VoronoiForest& forest, const DataMatrix& data);
AffinityMatrix isolation_affinities(const VoronoiForest& forest, const DistanceTable& dists);
AffinityMatrix isolation_affinities(const CellMembership& cells);

// Resolves a psi specification against the dataset size: either an absolute
// count ("64") or a fraction of n ("0.05n"); fractions floor with a minimum
// of 2.
std::size_t resolve_psi(const std::string& spec, std::size_t n);

// Versioned text serialization of a fitted forest; round-trips losslessly.
void save_forest(const VoronoiForest& forest, const std::string& path);
VoronoiForest load_forest(const std::string& path);

}  // namespace iktsne
