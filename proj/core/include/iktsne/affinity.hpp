#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace iktsne {

// Symmetric joint probabilities over point pairs in the high-dimensional
// space: zero diagonal, p[i][j] = p[j][i], off-diagonal mass sums to 1.
struct AffinityMatrix {
    std::size_t n = 0;
    std::vector<double> p;  // n*n, row-major

    double at(std::size_t i, std::size_t j) const { return p[i * n + j]; }
    std::span<const double> row(std::size_t i) const { return {p.data() + i * n, n}; }

    // Throws argument_error if any invariant fails (mass checked to 1e-9).
    void validate() const;
};

}  // namespace iktsne
