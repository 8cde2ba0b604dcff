#pragma once

#include <cstddef>
#include <vector>

namespace iktsne {

// Low-dimensional (always 2-D) output of a t-SNE run. `normalized` records
// whether coords have been min-max mapped to [0,1] per axis; the cluster
// validity metrics require that.
struct Embedding {
    std::size_t n = 0;
    std::vector<double> coords;  // n*2, row-major (x, y)
    double final_kl = 0.0;
    std::size_t iterations_run = 0;
    bool normalized = false;

    double x(std::size_t i) const { return coords[2 * i]; }
    double y(std::size_t i) const { return coords[2 * i + 1]; }
};

// Returns a copy with each axis min-max mapped to [0,1] (constant axes map to
// 0) and the normalized flag set. Idempotent.
Embedding minmax_normalize(const Embedding& e);

}  // namespace iktsne
