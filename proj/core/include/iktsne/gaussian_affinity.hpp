#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iktsne/affinity.hpp"
#include "iktsne/data_matrix.hpp"
#include "iktsne/distance.hpp"

namespace iktsne {

// Target perplexity and the entropy-matching tolerance for the per-point
// bandwidth search. The tolerance applies to |H(P_i) - log2(perplexity)|
// measured in bits.
struct PerplexityConfig {
    double perplexity = 30.0;               // must satisfy 1 < perplexity < n
    double tolerance = 5e-5;
    std::size_t max_search_iterations = 200;
};

// Per-point result of the bandwidth search.
struct BandwidthProfile {
    std::vector<double> sigma;                 // sigma_i > 0
    std::vector<double> achieved_perplexity;   // 2^H(P_i) at the chosen sigma
    std::vector<std::size_t> search_iterations;
    std::vector<bool> converged;               // false: best effort after max iterations
};

struct EntropyPerplexity {
    double entropy_bits = 0.0;
    double perplexity = 0.0;
};

// exp(-sq_dist / (2 sigma^2)); sigma must be positive.
double gaussian_similarity(double sq_dist, double sigma);

// Conditional neighbour distribution of point i at bandwidth sigma:
// entry j = K(x_i, x_j) / sum_{k != i} K(x_i, x_k), diagonal entry 0.
// Throws degenerate_row_error when every off-diagonal kernel value
// underflows to zero.
std::vector<double> row_conditional_probs(const DataMatrix& data, std::size_t i, double sigma);
std::vector<double> row_conditional_probs(const DistanceTable& dists, std::size_t i, double sigma);

// Shannon entropy in bits (0 log 0 = 0) and its perplexity 2^H.
EntropyPerplexity entropy_and_perplexity(std::span<const double> row);

// Binary-searches a bandwidth per point so the row entropy matches
// log2(cfg.perplexity) within cfg.tolerance. Bracketing starts at sigma = 1
// and doubles/halves (at most 64 times) until the target is enclosed, then
// bisects. Distances are taken from a table built once per dataset; the
// search never re-touches raw attributes. Points that fail to converge keep
// the best sigma seen and are flagged rather than fatal.
BandwidthProfile fit_bandwidths(const DataMatrix& data, const PerplexityConfig& cfg);
BandwidthProfile fit_bandwidths(const DistanceTable& dists, const PerplexityConfig& cfg);

// p_ij = (p_{j|i} + p_{i|j}) / 2n over a row-stochastic conditional matrix
// with zero diagonal; the result carries unit total mass.
AffinityMatrix symmetrized_affinities(const std::vector<std::vector<double>>& conditional);

// Full pipeline: fit bandwidths, build conditional rows, symmetrize.
AffinityMatrix gaussian_affinities(const DistanceTable& dists, const PerplexityConfig& cfg);

}  // namespace iktsne
