#include "iktsne/affinity.hpp"

#include <cmath>
#include <string>

#include "iktsne/errors.hpp"

namespace iktsne {

void AffinityMatrix::validate() const {
    if (n < 2 || p.size() != n * n) {
        throw argument_error("AffinityMatrix: bad shape");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i * n + i] != 0.0) {
            throw argument_error("AffinityMatrix: nonzero diagonal at " + std::to_string(i));
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double v = p[i * n + j];
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw argument_error("AffinityMatrix: negative or non-finite entry");
            }
            if (v != p[j * n + i]) {
                throw argument_error("AffinityMatrix: asymmetric entry at (" + std::to_string(i) +
                                     "," + std::to_string(j) + ")");
            }
            total += v;
        }
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw argument_error("AffinityMatrix: total mass " + std::to_string(total) + " != 1");
    }
}

}  // namespace iktsne
