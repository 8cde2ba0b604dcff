#include "iktsne/embedding.hpp"

#include <algorithm>

#include "iktsne/errors.hpp"

namespace iktsne {

Embedding minmax_normalize(const Embedding& e) {
    if (e.n == 0 || e.coords.size() != 2 * e.n) {
        throw argument_error("minmax_normalize: empty or malformed embedding");
    }
    Embedding out = e;
    for (int axis = 0; axis < 2; ++axis) {
        double lo = e.coords[axis];
        double hi = e.coords[axis];
        for (std::size_t i = 1; i < e.n; ++i) {
            lo = std::min(lo, e.coords[2 * i + axis]);
            hi = std::max(hi, e.coords[2 * i + axis]);
        }
        const double range = hi - lo;
        for (std::size_t i = 0; i < e.n; ++i) {
            out.coords[2 * i + axis] = range > 0.0 ? (e.coords[2 * i + axis] - lo) / range : 0.0;
        }
    }
    out.normalized = true;
    return out;
}

}  // namespace iktsne
