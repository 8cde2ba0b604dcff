#include "iktsne/isolation_kernel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "iktsne/errors.hpp"
#include "iktsne/gaussian_affinity.hpp"
#include "iktsne/parallel.hpp"
#include "iktsne/rng.hpp"

namespace iktsne {

namespace {

void check_config(std::size_t psi, std::size_t t, std::size_t n) {
    if (psi < 2) {
        throw argument_error("IsolationConfig: psi must be >= 2");
    }
    if (psi > n) {
        throw argument_error("IsolationConfig: psi exceeds dataset size");
    }
    if (psi > std::numeric_limits<std::uint16_t>::max()) {
        throw argument_error("IsolationConfig: psi exceeds the slot-table limit");
    }
    if (t < 1) {
        throw argument_error("IsolationConfig: t must be >= 1");
    }
}

// Partial Fisher-Yates over [0, n): uniform sample of psi distinct indices.
void sample_without_replacement(std::mt19937_64& eng, std::size_t n, std::size_t psi,
                                std::vector<std::uint32_t>& pool,
                                std::vector<std::uint32_t>& out) {
    pool.resize(n);
    std::iota(pool.begin(), pool.end(), 0u);
    out.resize(psi);
    for (std::size_t k = 0; k < psi; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, n - 1);
        std::swap(pool[k], pool[pick(eng)]);
        out[k] = pool[k];
    }
}

template <typename DistFn>
std::size_t nearest_slot(const std::vector<std::uint32_t>& centers, DistFn&& dist_to) {
    std::size_t best = 0;
    double best_d2 = dist_to(centers[0]);
    for (std::size_t s = 1; s < centers.size(); ++s) {
        const double d2 = dist_to(centers[s]);
        if (d2 < best_d2) {  // strict: ties keep the lowest slot
            best_d2 = d2;
            best = s;
        }
    }
    return best;
}

}  // namespace

VoronoiForest build_forest(const DataMatrix& data, const IsolationConfig& cfg) {
    check_config(cfg.psi, cfg.t, data.n());
    VoronoiForest forest;
    forest.seed = cfg.seed;
    forest.psi = cfg.psi;
    forest.partitionings.resize(cfg.t);
    const std::size_t n = data.n();
    parallel_for(cfg.t, [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint32_t> pool;
        for (std::size_t p = begin; p < end; ++p) {
            std::mt19937_64 eng(derive_seed(cfg.seed, p));
            sample_without_replacement(eng, n, cfg.psi, pool, forest.partitionings[p]);
        }
    });
    return forest;
}

VoronoiForest build_forest_exhaustive(const DataMatrix& data, std::size_t psi) {
    const std::size_t n = data.n();
    check_config(psi, 1, n);
    if (n > 20) {
        throw argument_error("build_forest_exhaustive: subset enumeration is limited to n <= 20");
    }
    VoronoiForest forest;
    forest.seed = 0;
    forest.psi = psi;
    std::vector<std::uint32_t> subset(psi);
    std::iota(subset.begin(), subset.end(), 0u);
    while (true) {
        forest.partitionings.push_back(subset);
        // next lexicographic combination
        std::size_t k = psi;
        while (k > 0 && subset[k - 1] == n - psi + k - 1) {
            --k;
        }
        if (k == 0) {
            break;
        }
        ++subset[k - 1];
        for (std::size_t m = k; m < psi; ++m) {
            subset[m] = subset[m - 1] + 1;
        }
    }
    return forest;
}

std::size_t nearest_center_index(const VoronoiForest& forest, const DataMatrix& data,
                                 std::size_t partitioning, std::size_t query) {
    if (partitioning >= forest.t()) {
        throw argument_error("nearest_center_index: partitioning index out of range");
    }
    if (query >= data.n()) {
        throw argument_error("nearest_center_index: query index out of range");
    }
    const auto& centers = forest.partitionings[partitioning];
    return nearest_slot(centers, [&](std::uint32_t c) { return pairwise_sq_dist(data, query, c); });
}

CellMembership CellMembership::build(const VoronoiForest& forest, const DataMatrix& data) {
    CellMembership cm;
    cm.n_ = data.n();
    cm.t_ = forest.t();
    cm.slots_.assign(cm.n_ * cm.t_, 0);
    parallel_for(cm.n_, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t p = 0; p < cm.t_; ++p) {
                cm.slots_[i * cm.t_ + p] = static_cast<std::uint16_t>(nearest_slot(
                    forest.partitionings[p],
                    [&](std::uint32_t c) { return pairwise_sq_dist(data, i, c); }));
            }
        }
    });
    return cm;
}

CellMembership CellMembership::build(const VoronoiForest& forest, const DistanceTable& dists) {
    CellMembership cm;
    cm.n_ = dists.n();
    cm.t_ = forest.t();
    cm.slots_.assign(cm.n_ * cm.t_, 0);
    parallel_for(cm.n_, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto row = dists.row(i);
            for (std::size_t p = 0; p < cm.t_; ++p) {
                cm.slots_[i * cm.t_ + p] = static_cast<std::uint16_t>(
                    nearest_slot(forest.partitionings[p], [&](std::uint32_t c) { return row[c]; }));
            }
        }
    });
    return cm;
}

std::size_t CellMembership::matches(std::size_t i, std::size_t j) const {
    const std::uint16_t* a = slots_.data() + i * t_;
    const std::uint16_t* b = slots_.data() + j * t_;
    std::size_t count = 0;
    for (std::size_t p = 0; p < t_; ++p) {
        count += (a[p] == b[p]);
    }
    return count;
}

double CellMembership::similarity(std::size_t i, std::size_t j) const {
    return static_cast<double>(matches(i, j)) / static_cast<double>(t_);
}

double isolation_similarity(const VoronoiForest& forest, const DataMatrix& data,
                            std::size_t i, std::size_t j) {
    if (i >= data.n() || j >= data.n()) {
        throw argument_error("isolation_similarity: point index out of range");
    }
    std::size_t count = 0;
    for (std::size_t p = 0; p < forest.t(); ++p) {
        if (nearest_center_index(forest, data, p, i) == nearest_center_index(forest, data, p, j)) {
            ++count;
        }
    }
    return static_cast<double>(count) / static_cast<double>(forest.t());
}

AffinityMatrix isolation_affinities(const CellMembership& cells) {
    const std::size_t n = cells.n();
    if (n < 2) {
        throw argument_error("isolation_affinities: need at least 2 points");
    }
    // Integer match counts; the 1/t factor cancels in the conditional rows.
    std::vector<std::size_t> counts(n * n, 0);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                counts[i * n + j] = cells.matches(i, j);
            }
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            counts[j * n + i] = counts[i * n + j];
        }
    }

    std::vector<std::vector<double>> conditional(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t row_total = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                row_total += counts[i * n + j];
            }
        }
        if (row_total == 0) {
            throw degenerate_row_error("isolation_affinities: point " + std::to_string(i) +
                                       " shares no cell with any other point", i);
        }
        auto& row = conditional[i];
        row.assign(n, 0.0);
        const double inv = 1.0 / static_cast<double>(row_total);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                row[j] = static_cast<double>(counts[i * n + j]) * inv;
            }
        }
    }
    return symmetrized_affinities(conditional);
}

AffinityMatrix isolation_affinities(const VoronoiForest& forest, const DataMatrix& data) {
    return isolation_affinities(CellMembership::build(forest, data));
}

AffinityMatrix isolation_affinities(const VoronoiForest& forest, const DistanceTable& dists) {
    return isolation_affinities(CellMembership::build(forest, dists));
}

std::size_t resolve_psi(const std::string& spec, std::size_t n) {
    if (spec.empty()) {
        throw argument_error("resolve_psi: empty specification");
    }
    std::string body = spec;
    bool fractional = false;
    if (body.back() == 'n' || body.back() == 'N') {
        fractional = true;
        body.pop_back();
    }
    double value = 0.0;
    const auto* first = body.data();
    const auto* last = body.data() + body.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !(value > 0.0)) {
        throw argument_error("resolve_psi: cannot parse '" + spec + "'");
    }
    std::size_t psi;
    if (fractional) {
        psi = static_cast<std::size_t>(std::floor(value * static_cast<double>(n)));
    } else {
        if (value != std::floor(value)) {
            throw argument_error("resolve_psi: absolute psi must be an integer");
        }
        psi = static_cast<std::size_t>(value);
    }
    psi = std::max<std::size_t>(psi, 2);
    if (psi > n) {
        throw argument_error("resolve_psi: psi " + std::to_string(psi) + " exceeds n = " + std::to_string(n));
    }
    return psi;
}

void save_forest(const VoronoiForest& forest, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw io_error("save_forest: cannot open " + path);
    }
    out << "iktsne_forest 1\n";
    out << forest.seed << ' ' << forest.psi << ' ' << forest.t() << '\n';
    for (const auto& centers : forest.partitionings) {
        for (std::size_t s = 0; s < centers.size(); ++s) {
            out << centers[s] << (s + 1 < centers.size() ? ' ' : '\n');
        }
    }
    if (!out) {
        throw io_error("save_forest: write failed for " + path);
    }
}

VoronoiForest load_forest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("load_forest: cannot open " + path);
    }
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "iktsne_forest" || version != 1) {
        throw parse_error("load_forest: unrecognized header in " + path, 1);
    }
    VoronoiForest forest;
    std::size_t t = 0;
    in >> forest.seed >> forest.psi >> t;
    if (!in) {
        throw parse_error("load_forest: malformed dimensions in " + path, 2);
    }
    forest.partitionings.assign(t, {});
    for (std::size_t p = 0; p < t; ++p) {
        auto& centers = forest.partitionings[p];
        centers.resize(forest.psi);
        for (auto& c : centers) {
            in >> c;
        }
        if (!in) {
            throw parse_error("load_forest: truncated center list in " + path, 3 + p);
        }
    }
    return forest;
}

}  // namespace iktsne
