#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iktsne/data_matrix.hpp"

namespace iktsne {

// Squared Euclidean distance between points i and j. Dense and sparse rows
// accumulate terms in ascending attribute order, so both storages produce
// bitwise-equal results for the same real values.
double pairwise_sq_dist(const DataMatrix& data, std::size_t i, std::size_t j);

// Full n-by-n table of squared distances, computed once per dataset and shared
// by the bandwidth search, the kernels and the metrics. Symmetric with zero
// diagonal; immutable after build.
class DistanceTable {
public:
    static DistanceTable build(const DataMatrix& data);

    std::size_t n() const noexcept { return n_; }
    double at(std::size_t i, std::size_t j) const { return d2_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const { return {d2_.data() + i * n_, n_}; }

private:
    std::size_t n_ = 0;
    std::vector<double> d2_;
};

}  // namespace iktsne
