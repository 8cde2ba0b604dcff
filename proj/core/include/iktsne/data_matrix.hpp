#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace iktsne {

enum class StorageKind { dense, sparse };

// One high-dimensional dataset: n points with d attributes, stored either as
// a dense row-major array or as CSR sparse rows. A dataset is wholly dense or
// wholly sparse; the two storages never mix. Immutable after construction and
// safe to read from any number of threads.
class DataMatrix {
public:
    // values.size() must equal n*d; n is inferred from values.size()/d.
    static DataMatrix dense(std::size_t d, std::vector<double> values);

    // One vector of (attribute, value) pairs per point, attribute indices
    // strictly increasing within each row and < d.
    static DataMatrix sparse(std::size_t d,
                             const std::vector<std::vector<std::pair<std::uint32_t, double>>>& rows);

    std::size_t n() const noexcept { return n_; }
    std::size_t d() const noexcept { return d_; }
    StorageKind storage_kind() const noexcept { return kind_; }

    // Dense access only.
    std::span<const double> dense_row(std::size_t i) const;

    // Sparse access only.
    std::span<const std::uint32_t> sparse_indices(std::size_t i) const;
    std::span<const double> sparse_values(std::size_t i) const;

    // Materializes row i as a length-d dense vector regardless of storage.
    std::vector<double> row_as_dense(std::size_t i) const;

private:
    DataMatrix() = default;

    std::size_t n_ = 0;
    std::size_t d_ = 0;
    StorageKind kind_ = StorageKind::dense;

    std::vector<double> dense_values_;      // n*d when dense

    std::vector<std::size_t> row_ptr_;      // n+1 when sparse
    std::vector<std::uint32_t> col_idx_;
    std::vector<double> sparse_values_;
};

// Ground-truth class ids aligned with a DataMatrix: every id in [0, n_classes).
struct Labels {
    std::vector<int> values;
    int n_classes = 0;

    std::size_t size() const noexcept { return values.size(); }
};

// Throws argument_error unless labels match the dataset row count and ids are
// in range.
void validate_labels(const Labels& labels, std::size_t n);

}  // namespace iktsne
