#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iktsne/data_matrix.hpp"
#include "iktsne/distance.hpp"
#include "iktsne/embedding.hpp"

namespace iktsne {

// R(k) samples on the reporting grid plus the exact 1/k-weighted area. The
// curve is sampled at {0.01n, 0.03n, ..., 0.99n} (rounded, deduplicated,
// clamped to [1, n-2]); the AUC always uses the full sum over k = 1..n-2.
struct RnxCurve {
    std::vector<std::size_t> sampled_k;
    std::vector<double> r_values;
    double auc = 0.0;
};

struct ClusterValidity {
    double db = 0.0;
    double ch = 0.0;
};

struct MetricReport {
    double auc_rnx = 0.0;
    std::optional<double> db;
    std::optional<double> ch;
    std::vector<std::pair<std::size_t, double>> rnx_curve;

    std::string to_json() const;
};

// Mean fractional overlap of the k-nearest-neighbour sets of each point in
// the high- and low-dimensional spaces (self excluded, ties by lower index).
double qnx(const DataMatrix& hd, const Embedding& ld, std::size_t k);

// Rescales Q(k) so that a random layout scores about 0 and perfect
// neighbourhood preservation scores 1.
double rnx(double qnx_value, std::size_t k, std::size_t n);

// Exact 1/k-weighted aggregate over every k in [1, n-2].
double auc_rnx(const DataMatrix& hd, const Embedding& ld);

// Curve plus AUC in one pass over precomputed distance tables; used by the
// evaluation pipeline so the HD ordering is built once per dataset.
RnxCurve rnx_curve(const DistanceTable& hd, const DistanceTable& ld);

// Variant for sweeps: the HD neighbour ordering (neighbour_order of the HD
// distance table) is computed once and reused across embeddings.
using NeighbourOrder = std::vector<std::vector<std::uint32_t>>;
RnxCurve rnx_curve_with_order(const NeighbourOrder& hd_order, const DistanceTable& ld);

// Davies-Bouldin: mean over clusters of the worst (scatter_i + scatter_j) /
// centre-separation ratio, with scatter the mean distance to the cluster
// centre. Requires a min-max normalized embedding.
double db_index(const Embedding& ld, const Labels& labels);

// Calinski-Harabasz on first-power distances:
// [sum_i n_i ||c_i - c|| / (N_C - 1)] / [sum_i sum_{x in C_i} ||x - c_i|| / (n - N_C)].
// Returns +infinity when the within-cluster dispersion is exactly zero.
double ch_index(const Embedding& ld, const Labels& labels);

MetricReport evaluate_embedding(const DataMatrix& hd, const Embedding& ld,
                                const std::optional<Labels>& labels);

}  // namespace iktsne
