#include "iktsne/data_matrix.hpp"

#include <cmath>
#include <string>

#include "iktsne/errors.hpp"

namespace iktsne {

DataMatrix DataMatrix::dense(std::size_t d, std::vector<double> values) {
    if (d < 1) {
        throw argument_error("DataMatrix: d must be >= 1");
    }
    if (values.empty() || values.size() % d != 0) {
        throw argument_error("DataMatrix: value count is not a multiple of d");
    }
    const std::size_t n = values.size() / d;
    if (n < 2) {
        throw argument_error("DataMatrix: need at least 2 points");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw argument_error("DataMatrix: non-finite value");
        }
    }
    DataMatrix m;
    m.n_ = n;
    m.d_ = d;
    m.kind_ = StorageKind::dense;
    m.dense_values_ = std::move(values);
    return m;
}

DataMatrix DataMatrix::sparse(std::size_t d,
                              const std::vector<std::vector<std::pair<std::uint32_t, double>>>& rows) {
    if (d < 1) {
        throw argument_error("DataMatrix: d must be >= 1");
    }
    if (rows.size() < 2) {
        throw argument_error("DataMatrix: need at least 2 points");
    }
    DataMatrix m;
    m.n_ = rows.size();
    m.d_ = d;
    m.kind_ = StorageKind::sparse;
    m.row_ptr_.reserve(rows.size() + 1);
    m.row_ptr_.push_back(0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::uint32_t prev = 0;
        bool first = true;
        for (const auto& [idx, val] : rows[i]) {
            if (idx >= d) {
                throw argument_error("DataMatrix: sparse attribute index " + std::to_string(idx) +
                                     " out of range in row " + std::to_string(i));
            }
            if (!first && idx <= prev) {
                throw argument_error("DataMatrix: sparse attribute indices not strictly increasing in row " +
                                     std::to_string(i));
            }
            if (!std::isfinite(val)) {
                throw argument_error("DataMatrix: non-finite value in row " + std::to_string(i));
            }
            m.col_idx_.push_back(idx);
            m.sparse_values_.push_back(val);
            prev = idx;
            first = false;
        }
        m.row_ptr_.push_back(m.col_idx_.size());
    }
    return m;
}

std::span<const double> DataMatrix::dense_row(std::size_t i) const {
    if (kind_ != StorageKind::dense) {
        throw argument_error("DataMatrix: dense_row on sparse storage");
    }
    if (i >= n_) {
        throw argument_error("DataMatrix: row index out of range");
    }
    return {dense_values_.data() + i * d_, d_};
}

std::span<const std::uint32_t> DataMatrix::sparse_indices(std::size_t i) const {
    if (kind_ != StorageKind::sparse) {
        throw argument_error("DataMatrix: sparse_indices on dense storage");
    }
    if (i >= n_) {
        throw argument_error("DataMatrix: row index out of range");
    }
    return {col_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
}

std::span<const double> DataMatrix::sparse_values(std::size_t i) const {
    if (kind_ != StorageKind::sparse) {
        throw argument_error("DataMatrix: sparse_values on dense storage");
    }
    if (i >= n_) {
        throw argument_error("DataMatrix: row index out of range");
    }
    return {sparse_values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
}

std::vector<double> DataMatrix::row_as_dense(std::size_t i) const {
    if (i >= n_) {
        throw argument_error("DataMatrix: row index out of range");
    }
    std::vector<double> out(d_, 0.0);
    if (kind_ == StorageKind::dense) {
        auto row = dense_row(i);
        out.assign(row.begin(), row.end());
    } else {
        auto idx = sparse_indices(i);
        auto val = sparse_values(i);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            out[idx[k]] = val[k];
        }
    }
    return out;
}

void validate_labels(const Labels& labels, std::size_t n) {
    if (labels.values.size() != n) {
        throw argument_error("Labels: length " + std::to_string(labels.values.size()) +
                             " does not match dataset size " + std::to_string(n));
    }
    if (labels.n_classes < 1) {
        throw argument_error("Labels: n_classes must be >= 1");
    }
    for (int v : labels.values) {
        if (v < 0 || v >= labels.n_classes) {
            throw argument_error("Labels: class id out of range");
        }
    }
}

}  // namespace iktsne
