#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iktsne/data_matrix.hpp"
#include "iktsne/embedding.hpp"
#include "iktsne/optimizer.hpp"

namespace iktsne {

struct DatasetBundle {
    DataMatrix data;
    std::optional<Labels> labels;
    std::string name;
    bool normalized = false;
    std::vector<std::string> label_names;  // id -> original token, when labelled
};

// Dense CSV loader. Rows must be rectangular and numeric apart from the
// optional label column, whose tokens (integers or strings) are mapped to
// class ids in order of first appearance. Parse failures name the line and
// column.
DatasetBundle load_dense_csv(const std::string& path,
                             std::optional<std::size_t> label_column = std::nullopt,
                             bool has_header = false);

// Sparse loader for "label idx:val ..." lines with 1-based ascending indices
// (0-based in memory); d is the largest index seen. An empty feature list is
// a valid all-zero row.
DatasetBundle load_sparse_svm(const std::string& path);

// Labels file: one token per line, mapped to ids in first-appearance order.
Labels load_labels(const std::string& path);

// Min-max normalization per attribute to [0,1]; constant attributes map to 0.
// Idempotent. Implicit zeros of sparse data participate in the ranges.
DatasetBundle minmax_normalize(const DatasetBundle& bundle);

// Embedding persistence: "x,y[,label]" rows at 17 significant digits, which
// round-trips doubles exactly.
void save_embedding_csv(const Embedding& e, const std::optional<Labels>& labels,
                        const std::string& path);
Embedding load_embedding_csv(const std::string& path);

void write_trace_csv(const OptimizerTrace& trace, const std::string& path);

// Standalone SVG scatter: one circle per point, colours keyed by label id
// from a fixed palette (grey when unlabelled), linear viewport fit with a 5%
// margin. Identical inputs produce identical bytes.
void render_scatter_svg(const Embedding& e, const std::optional<Labels>& labels,
                        const std::string& path);

}  // namespace iktsne
