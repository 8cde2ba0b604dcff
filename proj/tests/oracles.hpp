#pragma once

// Brute-force reference implementations used to check the library. These
// stay deliberately naive (explicit double loops, selection by sort) and
// never share code with the implementation paths they verify.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "iktsne/affinity.hpp"
#include "iktsne/data_matrix.hpp"
#include "iktsne/distance.hpp"
#include "iktsne/embedding.hpp"
#include "iktsne/optimizer.hpp"

namespace oracle {

inline double kl_brute(const iktsne::AffinityMatrix& p, const iktsne::AffinityMatrix& q) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t j = 0; j < p.n; ++j) {
            if (i == j || p.at(i, j) == 0.0) {
                continue;
            }
            total += p.at(i, j) * std::log(p.at(i, j) / q.at(i, j));
        }
    }
    return total;
}

// k nearest neighbours of point i by (distance, index), self excluded.
inline std::vector<std::size_t> knn_brute(const std::vector<std::vector<double>>& dist,
                                          std::size_t i, std::size_t k) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < dist.size(); ++j) {
        if (j != i) {
            idx.push_back(j);
        }
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (dist[i][a] != dist[i][b]) {
            return dist[i][a] < dist[i][b];
        }
        return a < b;
    });
    idx.resize(k);
    return idx;
}

inline std::vector<std::vector<double>> dist_matrix(const iktsne::DataMatrix& m) {
    std::vector<std::vector<double>> d(m.n(), std::vector<double>(m.n(), 0.0));
    for (std::size_t i = 0; i < m.n(); ++i) {
        for (std::size_t j = 0; j < m.n(); ++j) {
            d[i][j] = iktsne::pairwise_sq_dist(m, i, j);
        }
    }
    return d;
}

inline std::vector<std::vector<double>> dist_matrix(const iktsne::Embedding& e) {
    std::vector<std::vector<double>> d(e.n, std::vector<double>(e.n, 0.0));
    for (std::size_t i = 0; i < e.n; ++i) {
        for (std::size_t j = 0; j < e.n; ++j) {
            const double dx = e.x(i) - e.x(j);
            const double dy = e.y(i) - e.y(j);
            d[i][j] = dx * dx + dy * dy;
        }
    }
    return d;
}

inline double qnx_brute(const std::vector<std::vector<double>>& hd,
                        const std::vector<std::vector<double>>& ld, std::size_t k) {
    const std::size_t n = hd.size();
    long long overlap = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto a = knn_brute(hd, i, k);
        const auto b = knn_brute(ld, i, k);
        for (std::size_t x : a) {
            if (std::find(b.begin(), b.end(), x) != b.end()) {
                ++overlap;
            }
        }
    }
    return static_cast<double>(overlap) / (static_cast<double>(n) * static_cast<double>(k));
}

inline double auc_rnx_brute(const std::vector<std::vector<double>>& hd,
                            const std::vector<std::vector<double>>& ld) {
    const std::size_t n = hd.size();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 1; k <= n - 2; ++k) {
        const double q = qnx_brute(hd, ld, k);
        const double r = ((static_cast<double>(n) - 1.0) * q - static_cast<double>(k)) /
                         (static_cast<double>(n) - 1.0 - static_cast<double>(k));
        num += r / static_cast<double>(k);
        den += 1.0 / static_cast<double>(k);
    }
    return num / den;
}

inline double db_brute(const iktsne::Embedding& e, const iktsne::Labels& labels) {
    const std::size_t nc = static_cast<std::size_t>(labels.n_classes);
    std::vector<double> cx(nc, 0.0);
    std::vector<double> cy(nc, 0.0);
    std::vector<std::size_t> sizes(nc, 0);
    for (std::size_t i = 0; i < e.n; ++i) {
        const auto c = static_cast<std::size_t>(labels.values[i]);
        cx[c] += e.x(i);
        cy[c] += e.y(i);
        ++sizes[c];
    }
    for (std::size_t c = 0; c < nc; ++c) {
        cx[c] /= static_cast<double>(sizes[c]);
        cy[c] /= static_cast<double>(sizes[c]);
    }
    std::vector<double> scatter(nc, 0.0);
    for (std::size_t i = 0; i < e.n; ++i) {
        const auto c = static_cast<std::size_t>(labels.values[i]);
        scatter[c] += std::sqrt((e.x(i) - cx[c]) * (e.x(i) - cx[c]) +
                                (e.y(i) - cy[c]) * (e.y(i) - cy[c]));
    }
    for (std::size_t c = 0; c < nc; ++c) {
        scatter[c] /= static_cast<double>(sizes[c]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < nc; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < nc; ++j) {
            if (i == j) {
                continue;
            }
            const double sep = std::sqrt((cx[i] - cx[j]) * (cx[i] - cx[j]) +
                                         (cy[i] - cy[j]) * (cy[i] - cy[j]));
            worst = std::max(worst, (scatter[i] + scatter[j]) / sep);
        }
        total += worst;
    }
    return total / static_cast<double>(nc);
}

inline double ch_brute(const iktsne::Embedding& e, const iktsne::Labels& labels) {
    const std::size_t nc = static_cast<std::size_t>(labels.n_classes);
    std::vector<double> cx(nc, 0.0);
    std::vector<double> cy(nc, 0.0);
    std::vector<std::size_t> sizes(nc, 0);
    double gx = 0.0;
    double gy = 0.0;
    for (std::size_t i = 0; i < e.n; ++i) {
        const auto c = static_cast<std::size_t>(labels.values[i]);
        cx[c] += e.x(i);
        cy[c] += e.y(i);
        ++sizes[c];
        gx += e.x(i);
        gy += e.y(i);
    }
    gx /= static_cast<double>(e.n);
    gy /= static_cast<double>(e.n);
    for (std::size_t c = 0; c < nc; ++c) {
        cx[c] /= static_cast<double>(sizes[c]);
        cy[c] /= static_cast<double>(sizes[c]);
    }
    double between = 0.0;
    double within = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
        between += static_cast<double>(sizes[c]) *
                   std::sqrt((cx[c] - gx) * (cx[c] - gx) + (cy[c] - gy) * (cy[c] - gy));
    }
    for (std::size_t i = 0; i < e.n; ++i) {
        const auto c = static_cast<std::size_t>(labels.values[i]);
        within += std::sqrt((e.x(i) - cx[c]) * (e.x(i) - cx[c]) +
                            (e.y(i) - cy[c]) * (e.y(i) - cy[c]));
    }
    between /= static_cast<double>(nc) - 1.0;
    within /= static_cast<double>(e.n - nc);
    return between / within;
}

// Central finite differences of kl_cost(p, low_dim_q(coords)).
inline std::vector<double> fd_gradient(const iktsne::AffinityMatrix& p,
                                       std::vector<double> coords, double h = 1e-5) {
    std::vector<double> grad(coords.size(), 0.0);
    for (std::size_t k = 0; k < coords.size(); ++k) {
        const double keep = coords[k];
        coords[k] = keep + h;
        const double up = iktsne::kl_cost(p, iktsne::low_dim_q(coords));
        coords[k] = keep - h;
        const double down = iktsne::kl_cost(p, iktsne::low_dim_q(coords));
        coords[k] = keep;
        grad[k] = (up - down) / (2.0 * h);
    }
    return grad;
}

// Random symmetric affinity matrix with unit mass and zero diagonal.
inline iktsne::AffinityMatrix random_affinity(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    iktsne::AffinityMatrix p;
    p.n = n;
    p.p.assign(n * n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = u(eng);
            p.p[i * n + j] = v;
            p.p[j * n + i] = v;
            total += 2.0 * v;
        }
    }
    for (auto& v : p.p) {
        v /= total;
    }
    // exact symmetry survives the scaling; re-mirror to be safe
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            p.p[j * n + i] = p.p[i * n + j];
        }
    }
    return p;
}

}  // namespace oracle
