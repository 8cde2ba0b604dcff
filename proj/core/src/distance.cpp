#include "iktsne/distance.hpp"

#include "iktsne/errors.hpp"
#include "iktsne/parallel.hpp"

namespace iktsne {

namespace {

double dense_sq_dist(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        sum += diff * diff;
    }
    return sum;
}

// Merge over the union of stored indices in ascending order. Attributes
// missing from both rows contribute an exact +0.0 and are skipped, which
// leaves the accumulator bit-identical to the dense loop.
double sparse_sq_dist(std::span<const std::uint32_t> ia, std::span<const double> va,
                      std::span<const std::uint32_t> ib, std::span<const double> vb) {
    double sum = 0.0;
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < ia.size() && b < ib.size()) {
        if (ia[a] == ib[b]) {
            const double diff = va[a] - vb[b];
            sum += diff * diff;
            ++a;
            ++b;
        } else if (ia[a] < ib[b]) {
            sum += va[a] * va[a];
            ++a;
        } else {
            sum += vb[b] * vb[b];
            ++b;
        }
    }
    for (; a < ia.size(); ++a) {
        sum += va[a] * va[a];
    }
    for (; b < ib.size(); ++b) {
        sum += vb[b] * vb[b];
    }
    return sum;
}

}  // namespace

double pairwise_sq_dist(const DataMatrix& data, std::size_t i, std::size_t j) {
    if (i >= data.n() || j >= data.n()) {
        throw argument_error("pairwise_sq_dist: point index out of range");
    }
    if (data.storage_kind() == StorageKind::dense) {
        return dense_sq_dist(data.dense_row(i), data.dense_row(j));
    }
    return sparse_sq_dist(data.sparse_indices(i), data.sparse_values(i),
                          data.sparse_indices(j), data.sparse_values(j));
}

DistanceTable DistanceTable::build(const DataMatrix& data) {
    DistanceTable t;
    t.n_ = data.n();
    t.d2_.assign(t.n_ * t.n_, 0.0);
    double* out = t.d2_.data();
    const std::size_t n = t.n_;
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                out[i * n + j] = pairwise_sq_dist(data, i, j);
            }
        }
    });
    // mirror the upper triangle
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            out[j * n + i] = out[i * n + j];
        }
    }
    return t;
}

}  // namespace iktsne
