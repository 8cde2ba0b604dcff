#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "iktsne/data_matrix.hpp"
#include "iktsne/errors.hpp"
#include "iktsne/isolation_kernel.hpp"
#include "iktsne/synthetic.hpp"
#include "test_util.hpp"

using namespace iktsne;

namespace {

const DataMatrix& line_0_1_10() {
    static const DataMatrix m = DataMatrix::dense(1, {0.0, 1.0, 10.0});
    return m;
}

}  // namespace

TEST_CASE("build_forest cardinality contracts") {
    const auto data = testutil::random_dense(6, 2, 5);
    SUBCASE("psi = n selects everything") {
        const auto forest = build_forest(data, {6, 4, 9});
        for (const auto& centers : forest.partitionings) {
            std::set<std::uint32_t> s(centers.begin(), centers.end());
            CHECK(s.size() == 6);
        }
    }
    SUBCASE("psi = 2, t = 1 gives one distinct pair") {
        const auto forest = build_forest(data, {2, 1, 123});
        REQUIRE(forest.t() == 1);
        REQUIRE(forest.partitionings[0].size() == 2);
        CHECK(forest.partitionings[0][0] != forest.partitionings[0][1]);
    }
    SUBCASE("psi > n is rejected") {
        CHECK_THROWS_AS((void)build_forest(data, {7, 1, 0}), argument_error);
    }
    SUBCASE("same seed reproduces the forest") {
        const auto a = build_forest(data, {3, 50, 77});
        const auto b = build_forest(data, {3, 50, 77});
        CHECK(a.partitionings == b.partitionings);
    }
}

TEST_CASE("center pairs are sampled uniformly") {
    const auto data = testutil::random_dense(3, 1, 1);
    const auto forest = build_forest(data, {2, 3000, 2718});
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> freq;
    for (const auto& centers : forest.partitionings) {
        auto a = std::min(centers[0], centers[1]);
        auto b = std::max(centers[0], centers[1]);
        ++freq[{a, b}];
    }
    REQUIRE(freq.size() == 3);
    for (const auto& [pair, count] : freq) {
        CHECK(std::abs(count / 3000.0 - 1.0 / 3.0) <= 0.03);
    }
}

TEST_CASE("nearest_center_index") {
    const auto data = DataMatrix::dense(1, {0.0, 10.0, 4.0, 5.0});
    VoronoiForest forest;
    forest.psi = 2;
    forest.partitionings = {{0, 1}};
    CHECK(nearest_center_index(forest, data, 0, 0) == 0);  // a center finds itself
    CHECK(nearest_center_index(forest, data, 0, 1) == 1);
    CHECK(nearest_center_index(forest, data, 0, 2) == 0);  // 4 is closer to 0
    CHECK(nearest_center_index(forest, data, 0, 3) == 0);  // tie at 5 goes to the lower slot
    // reversed slot order flips the tie
    forest.partitionings = {{1, 0}};
    CHECK(nearest_center_index(forest, data, 0, 3) == 0);  // lower slot now holds center 10
}

TEST_CASE("exhaustive enumeration matches the hand oracle on the line") {
    const auto forest = build_forest_exhaustive(line_0_1_10(), 2);
    REQUIRE(forest.t() == 3);  // C(3,2)
    // Hand enumeration: the pair {0,1} splits points 0 and 1; {0,10} and
    // {1,10} keep them together. Every pair separates 0 and 10.
    CHECK(isolation_similarity(forest, line_0_1_10(), 0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(isolation_similarity(forest, line_0_1_10(), 0, 2) == 0.0);
    CHECK(isolation_similarity(forest, line_0_1_10(), 0, 0) == 1.0);

    const auto cells = CellMembership::build(forest, line_0_1_10());
    CHECK(cells.similarity(0, 1) == isolation_similarity(forest, line_0_1_10(), 0, 1));
    CHECK(cells.similarity(0, 2) == isolation_similarity(forest, line_0_1_10(), 0, 2));
}

TEST_CASE("Monte Carlo estimator converges to the enumerated kernel") {
    const auto forest = build_forest(line_0_1_10(), {2, 10000, 99});
    const auto cells = CellMembership::build(forest, line_0_1_10());
    CHECK(std::abs(cells.similarity(0, 1) - 2.0 / 3.0) <= 0.02);
    CHECK(std::abs(cells.similarity(0, 2) - 0.0) <= 0.02);
}

TEST_CASE("kernel symmetry and self-similarity are exact") {
    const auto data = testutil::random_dense(25, 3, 404);
    const auto forest = build_forest(data, {8, 64, 11});
    const auto cells = CellMembership::build(forest, data);
    for (std::size_t i = 0; i < data.n(); ++i) {
        CHECK(cells.similarity(i, i) == 1.0);
        for (std::size_t j = i + 1; j < data.n(); ++j) {
            CHECK(cells.similarity(i, j) == cells.similarity(j, i));
        }
    }
}

TEST_CASE("psi = n shrinks cells to single points") {
    const auto data = testutil::random_dense(10, 2, 8);
    const auto forest = build_forest(data, {10, 32, 21});
    const auto cells = CellMembership::build(forest, data);
    for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t j = i + 1; j < 10; ++j) {
            CHECK(cells.similarity(i, j) == 0.0);
        }
    }
}

TEST_CASE("membership table agrees with the per-call path") {
    const auto data = testutil::random_dense(15, 2, 6);
    const auto forest = build_forest(data, {4, 40, 3});
    const auto cells = CellMembership::build(forest, data);
    const auto dists = DistanceTable::build(data);
    const auto cells2 = CellMembership::build(forest, dists);
    for (std::size_t i = 0; i < 15; ++i) {
        for (std::size_t j = 0; j < 15; ++j) {
            CHECK(cells.similarity(i, j) == cells2.similarity(i, j));
            CHECK(cells.similarity(i, j) == isolation_similarity(forest, data, i, j));
        }
    }
}

TEST_CASE("isolation affinities") {
    SUBCASE("two coincident points are forced to 0.5") {
        // psi is capped by n, so a 2-point dataset always uses both points as
        // centers; only coincident points can share a cell.
        const auto data = DataMatrix::dense(1, {3.0, 3.0});
        const auto forest = build_forest(data, {2, 7, 5});
        const auto p = isolation_affinities(forest, data);
        p.validate();
        CHECK(p.at(0, 1) == 0.5);
    }
    SUBCASE("two distinct points each isolate themselves") {
        const auto data = DataMatrix::dense(1, {0.0, 1.0});
        const auto forest = build_forest(data, {2, 7, 5});
        CHECK_THROWS_AS((void)isolation_affinities(forest, data), degenerate_row_error);
    }
    SUBCASE("conditional row of the line collapses onto the near neighbour") {
        const auto forest = build_forest_exhaustive(line_0_1_10(), 2);
        const auto p = isolation_affinities(forest, line_0_1_10());
        p.validate();
        // p_{1|0} = 1 and p_{10|1} = 1/3, giving p_01 = (1 + 2/3)/6.
        CHECK(p.at(0, 1) == doctest::Approx((1.0 + 2.0 / 3.0) / 6.0).epsilon(1e-15));
        CHECK(p.at(0, 2) == 0.0);
    }
    SUBCASE("three equidistant points are symmetric under random sampling") {
        const auto tri = DataMatrix::dense(3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
        const auto forest = build_forest(tri, {2, 30000, 17});
        const auto p = isolation_affinities(forest, tri);
        p.validate();
        CHECK(std::abs(p.at(0, 1) - p.at(0, 2)) <= 0.03 * p.at(0, 1));
        CHECK(std::abs(p.at(0, 1) - p.at(1, 2)) <= 0.03 * p.at(0, 1));
    }
    SUBCASE("psi = n degenerates every row") {
        const auto data = testutil::random_dense(8, 2, 12);
        const auto forest = build_forest(data, {8, 16, 4});
        CHECK_THROWS_AS((void)isolation_affinities(forest, data), degenerate_row_error);
    }
}

TEST_CASE("sparse-region pairs score higher than dense-region pairs") {
    // Light version of the statistical suite: most seeds must order the
    // region means correctly at psi = 16, both for the raw kernel and for the
    // conditional neighbour probabilities it induces.
    int kernel_wins = 0;
    int conditional_wins = 0;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        TwoDensityConfig cfg;
        cfg.seed = seed;
        const auto td = gen_two_density_strip(cfg);
        const std::size_t n = td.bundle.data.n();
        const auto forest = build_forest(td.bundle.data, {16, 200, seed + 1000});
        const auto cells = CellMembership::build(forest, td.bundle.data);

        std::vector<double> row_total(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    row_total[i] += cells.similarity(i, j);
                }
            }
        }
        const auto conditional = [&](std::size_t i, std::size_t j) {
            return cells.similarity(i, j) / row_total[i];
        };

        double sparse_k = 0.0;
        double dense_k = 0.0;
        double sparse_c = 0.0;
        double dense_c = 0.0;
        for (const auto& mp : td.pairs) {
            sparse_k += cells.similarity(mp.sparse_a, mp.sparse_b);
            dense_k += cells.similarity(mp.dense_a, mp.dense_b);
            sparse_c += conditional(mp.sparse_a, mp.sparse_b);
            dense_c += conditional(mp.dense_a, mp.dense_b);
        }
        kernel_wins += sparse_k > dense_k;
        conditional_wins += sparse_c > dense_c;
    }
    CHECK(kernel_wins >= 5);
    CHECK(conditional_wins >= 5);
}

TEST_CASE("resolve_psi") {
    CHECK(resolve_psi("64", 178) == 64);
    CHECK(resolve_psi("0.05n", 178) == 8);
    CHECK(resolve_psi("0.01n", 178) == 2);  // floors to 1, clamped to the minimum of 2
    CHECK(resolve_psi("0.97n", 178) == 172);
    CHECK_THROWS_AS((void)resolve_psi("3.5", 178), argument_error);
    CHECK_THROWS_AS((void)resolve_psi("300", 178), argument_error);
    CHECK_THROWS_AS((void)resolve_psi("", 178), argument_error);
    CHECK_THROWS_AS((void)resolve_psi("-4", 178), argument_error);
}

TEST_CASE("forest serialization round-trips losslessly") {
    const auto data = testutil::random_dense(30, 2, 55);
    const auto forest = build_forest(data, {5, 25, 987654321});
    const auto path = (testutil::scratch_dir() / "forest.txt").string();
    save_forest(forest, path);
    const auto loaded = load_forest(path);
    CHECK(loaded.seed == forest.seed);
    CHECK(loaded.psi == forest.psi);
    CHECK(loaded.partitionings == forest.partitionings);

    const auto p1 = isolation_affinities(forest, data);
    const auto p2 = isolation_affinities(loaded, data);
    CHECK(p1.p == p2.p);
}
