#include "iktsne/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include <json.hpp>

#include "iktsne/alt_kernels.hpp"
#include "iktsne/errors.hpp"
#include "iktsne/parallel.hpp"

namespace iktsne {

namespace {

DataMatrix embedding_as_matrix(const Embedding& ld) {
    if (ld.n < 2 || ld.coords.size() != 2 * ld.n) {
        throw argument_error("metrics: malformed embedding");
    }
    return DataMatrix::dense(2, ld.coords);
}

// Per-k totals of |kNN_hd(i) ∩ kNN_ld(i)| over all points, exact integers.
std::vector<long long> overlap_totals(const NeighbourOrder& hd_order, const NeighbourOrder& ld_order) {
    const std::size_t n = hd_order.size();
    const std::size_t kmax = n - 2;

    const unsigned workers = max_threads();
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::vector<long long>> partial(workers, std::vector<long long>(kmax + 1, 0));

    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        const std::size_t w = std::min<std::size_t>(begin / chunk, workers - 1);
        auto& counts = partial[w];
        std::vector<std::size_t> rank_hd(n, 0);
        std::vector<std::size_t> rank_ld(n, 0);
        for (std::size_t i = begin; i < end; ++i) {
            const auto& ho = hd_order[i];
            const auto& lo = ld_order[i];
            for (std::size_t r = 0; r + 1 < n; ++r) {
                rank_hd[ho[r]] = r;
                rank_ld[lo[r]] = r;
            }
            long long overlap = 0;
            for (std::size_t k = 1; k <= kmax; ++k) {
                const std::uint32_t h = ho[k - 1];
                const std::uint32_t l = lo[k - 1];
                if (h == l) {
                    ++overlap;
                } else {
                    if (rank_ld[h] < k) {
                        ++overlap;
                    }
                    if (rank_hd[l] < k) {
                        ++overlap;
                    }
                }
                counts[k] += overlap;
            }
        }
    });

    std::vector<long long> totals(kmax + 1, 0);
    for (const auto& counts : partial) {
        for (std::size_t k = 1; k <= kmax; ++k) {
            totals[k] += counts[k];
        }
    }
    return totals;
}

struct ClusterGeometry {
    std::vector<std::size_t> sizes;
    std::vector<double> cx;
    std::vector<double> cy;
    std::vector<double> scatter_sum;  // per cluster, sum of distances to centre
};

ClusterGeometry cluster_geometry(const Embedding& ld, const Labels& labels) {
    validate_labels(labels, ld.n);
    const std::size_t nc = static_cast<std::size_t>(labels.n_classes);
    ClusterGeometry g;
    g.sizes.assign(nc, 0);
    g.cx.assign(nc, 0.0);
    g.cy.assign(nc, 0.0);
    g.scatter_sum.assign(nc, 0.0);
    for (std::size_t i = 0; i < ld.n; ++i) {
        const auto c = static_cast<std::size_t>(labels.values[i]);
        ++g.sizes[c];
        g.cx[c] += ld.x(i);
        g.cy[c] += ld.y(i);
    }
    for (std::size_t c = 0; c < nc; ++c) {
        if (g.sizes[c] == 0) {
            throw argument_error("cluster metrics: class " + std::to_string(c) + " is empty");
        }
        g.cx[c] /= static_cast<double>(g.sizes[c]);
        g.cy[c] /= static_cast<double>(g.sizes[c]);
    }
    for (std::size_t i = 0; i < ld.n; ++i) {
        const auto c = static_cast<std::size_t>(labels.values[i]);
        g.scatter_sum[c] += std::hypot(ld.x(i) - g.cx[c], ld.y(i) - g.cy[c]);
    }
    return g;
}

void require_normalized(const Embedding& ld, const char* who) {
    if (!ld.normalized) {
        throw argument_error(std::string(who) + ": embedding must be min-max normalized first");
    }
}

}  // namespace

double qnx(const DataMatrix& hd, const Embedding& ld, std::size_t k) {
    const std::size_t n = hd.n();
    if (ld.n != n) {
        throw argument_error("qnx: embedding size does not match dataset");
    }
    if (k < 1 || k > n - 2) {
        throw argument_error("qnx: k must lie in [1, n-2]");
    }
    const auto hd_table = DistanceTable::build(hd);
    const auto ld_table = DistanceTable::build(embedding_as_matrix(ld));
    const auto totals = overlap_totals(neighbour_order(hd_table), neighbour_order(ld_table));
    return static_cast<double>(totals[k]) / (static_cast<double>(n) * static_cast<double>(k));
}

double rnx(double qnx_value, std::size_t k, std::size_t n) {
    if (k < 1 || k > n - 2) {
        throw argument_error("rnx: k must lie in [1, n-2]");
    }
    const double nm1 = static_cast<double>(n - 1);
    return (nm1 * qnx_value - static_cast<double>(k)) / (nm1 - static_cast<double>(k));
}

RnxCurve rnx_curve(const DistanceTable& hd, const DistanceTable& ld) {
    if (ld.n() != hd.n()) {
        throw argument_error("rnx_curve: table sizes differ");
    }
    return rnx_curve_with_order(neighbour_order(hd), ld);
}

RnxCurve rnx_curve_with_order(const NeighbourOrder& hd_order, const DistanceTable& ld) {
    const std::size_t n = hd_order.size();
    if (ld.n() != n) {
        throw argument_error("rnx_curve: ordering and table sizes differ");
    }
    if (n < 4) {
        throw argument_error("rnx_curve: need at least 4 points");
    }
    const std::size_t kmax = n - 2;
    const auto totals = overlap_totals(hd_order, neighbour_order(ld));

    double weighted = 0.0;
    double weight = 0.0;
    std::vector<double> r_all(kmax + 1, 0.0);
    for (std::size_t k = 1; k <= kmax; ++k) {
        const double q = static_cast<double>(totals[k]) / (static_cast<double>(n) * static_cast<double>(k));
        const double r = rnx(q, k, n);
        r_all[k] = r;
        weighted += r / static_cast<double>(k);
        weight += 1.0 / static_cast<double>(k);
    }

    RnxCurve curve;
    curve.auc = weighted / weight;
    // reporting grid {0.01n, 0.03n, ..., 0.99n}
    std::set<std::size_t> grid;
    for (int pct = 1; pct <= 99; pct += 2) {
        const double raw = static_cast<double>(pct) / 100.0 * static_cast<double>(n);
        auto k = static_cast<std::size_t>(std::llround(raw));
        k = std::clamp<std::size_t>(k, 1, kmax);
        grid.insert(k);
    }
    for (std::size_t k : grid) {
        curve.sampled_k.push_back(k);
        curve.r_values.push_back(r_all[k]);
    }
    return curve;
}

double auc_rnx(const DataMatrix& hd, const Embedding& ld) {
    if (ld.n != hd.n()) {
        throw argument_error("auc_rnx: embedding size does not match dataset");
    }
    const auto hd_table = DistanceTable::build(hd);
    const auto ld_table = DistanceTable::build(embedding_as_matrix(ld));
    return rnx_curve(hd_table, ld_table).auc;
}

double db_index(const Embedding& ld, const Labels& labels) {
    require_normalized(ld, "db_index");
    if (labels.n_classes < 2) {
        throw argument_error("db_index: need at least 2 classes");
    }
    const auto g = cluster_geometry(ld, labels);
    const std::size_t nc = g.sizes.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < nc; ++i) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < nc; ++j) {
            if (j == i) {
                continue;
            }
            const double sep = std::hypot(g.cx[i] - g.cx[j], g.cy[i] - g.cy[j]);
            if (sep == 0.0) {
                throw argument_error("db_index: clusters " + std::to_string(i) + " and " +
                                     std::to_string(j) + " have coincident centres");
            }
            const double si = g.scatter_sum[i] / static_cast<double>(g.sizes[i]);
            const double sj = g.scatter_sum[j] / static_cast<double>(g.sizes[j]);
            worst = std::max(worst, (si + sj) / sep);
        }
        sum += worst;
    }
    return sum / static_cast<double>(nc);
}

double ch_index(const Embedding& ld, const Labels& labels) {
    require_normalized(ld, "ch_index");
    if (labels.n_classes < 2) {
        throw argument_error("ch_index: need at least 2 classes");
    }
    if (ld.n <= static_cast<std::size_t>(labels.n_classes)) {
        throw argument_error("ch_index: need more points than classes");
    }
    const auto g = cluster_geometry(ld, labels);
    const std::size_t nc = g.sizes.size();

    double gx = 0.0;
    double gy = 0.0;
    for (std::size_t i = 0; i < ld.n; ++i) {
        gx += ld.x(i);
        gy += ld.y(i);
    }
    gx /= static_cast<double>(ld.n);
    gy /= static_cast<double>(ld.n);

    double between = 0.0;
    double within = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
        between += static_cast<double>(g.sizes[c]) * std::hypot(g.cx[c] - gx, g.cy[c] - gy);
        within += g.scatter_sum[c];
    }
    between /= static_cast<double>(labels.n_classes - 1);
    within /= static_cast<double>(ld.n - static_cast<std::size_t>(labels.n_classes));
    if (within == 0.0) {
        return std::numeric_limits<double>::infinity();  // perfectly collapsed clusters
    }
    return between / within;
}

MetricReport evaluate_embedding(const DataMatrix& hd, const Embedding& ld,
                                const std::optional<Labels>& labels) {
    if (ld.n != hd.n()) {
        throw argument_error("evaluate_embedding: row counts differ (" + std::to_string(hd.n()) +
                             " vs " + std::to_string(ld.n) + ")");
    }
    const auto hd_table = DistanceTable::build(hd);
    const auto ld_table = DistanceTable::build(embedding_as_matrix(ld));
    const auto curve = rnx_curve(hd_table, ld_table);

    MetricReport report;
    report.auc_rnx = curve.auc;
    for (std::size_t s = 0; s < curve.sampled_k.size(); ++s) {
        report.rnx_curve.emplace_back(curve.sampled_k[s], curve.r_values[s]);
    }
    if (labels) {
        const Embedding norm = minmax_normalize(ld);
        report.db = db_index(norm, *labels);
        report.ch = ch_index(norm, *labels);
    }
    return report;
}

std::string MetricReport::to_json() const {
    nlohmann::json j;
    j["auc_rnx"] = auc_rnx;
    if (db) {
        j["db"] = *db;
    }
    if (ch) {
        j["ch"] = std::isfinite(*ch) ? nlohmann::json(*ch) : nlohmann::json("inf");
    }
    auto& curve = j["rnx_curve"];
    curve = nlohmann::json::array();
    for (const auto& [k, r] : rnx_curve) {
        curve.push_back({k, r});
    }
    return j.dump(2);
}

}  // namespace iktsne
