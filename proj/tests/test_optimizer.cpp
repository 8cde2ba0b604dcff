#include <doctest.h>

#include <cmath>
#include <random>

#include "iktsne/embedding.hpp"
#include "iktsne/errors.hpp"
#include "iktsne/gaussian_affinity.hpp"
#include "iktsne/metrics.hpp"
#include "iktsne/optimizer.hpp"
#include "iktsne/parallel.hpp"
#include "iktsne/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace iktsne;

TEST_CASE("low_dim_q on small layouts") {
    SUBCASE("two points") {
        const auto q = low_dim_q(std::vector<double>{0.0, 0.0, 5.0, -1.0});
        CHECK(q.at(0, 1) == 0.5);
        CHECK(q.at(1, 0) == 0.5);
        CHECK(q.at(0, 0) == 0.0);
    }
    SUBCASE("coincident points take the maximal probability") {
        const auto q = low_dim_q(std::vector<double>{0.0, 0.0, 0.0, 0.0, 3.0, 4.0});
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                if (i != j && !(i + j == 1)) {
                    CHECK(q.at(0, 1) > q.at(i, j));
                }
            }
        }
    }
    SUBCASE("hand-evaluated three-point normalizer") {
        // squared distances 1, 4, 9 give s = 1/2, 1/5, 1/10
        const auto q = low_dim_q(std::vector<double>{0.0, 0.0, 1.0, 0.0, 3.0, 0.0});
        const double total = 2.0 * (0.5 + 0.2 + 0.1);
        CHECK(q.at(0, 1) == doctest::Approx(0.5 / total).epsilon(1e-15));
        CHECK(q.at(1, 2) == doctest::Approx(0.2 / total).epsilon(1e-15));
        CHECK(q.at(0, 2) == doctest::Approx(0.1 / total).epsilon(1e-15));
        q.validate();
    }
    SUBCASE("rigid motions leave q unchanged") {
        const auto coords = testutil::random_coords(9, 17);
        const auto q = low_dim_q(coords);
        std::vector<double> moved(coords.size());
        const double c = std::cos(1.1);
        const double s = std::sin(1.1);
        for (std::size_t i = 0; i < 9; ++i) {
            moved[2 * i] = c * coords[2 * i] - s * coords[2 * i + 1] + 4.0;
            moved[2 * i + 1] = s * coords[2 * i] + c * coords[2 * i + 1] - 2.0;
        }
        const auto qm = low_dim_q(moved);
        for (std::size_t k = 0; k < q.p.size(); ++k) {
            CHECK(qm.p[k] == doctest::Approx(q.p[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("kl_cost") {
    SUBCASE("identical distributions") {
        const auto q = low_dim_q(testutil::random_coords(6, 3));
        CHECK(kl_cost(q, q) == 0.0);
    }
    SUBCASE("two points are forced to equality") {
        const auto p = symmetrized_affinities({{0.0, 1.0}, {1.0, 0.0}});
        const auto q = low_dim_q(std::vector<double>{0.0, 0.0, 7.0, 7.0});
        CHECK(kl_cost(p, q) == 0.0);
    }
    SUBCASE("matches the brute-force oracle") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto p = oracle::random_affinity(7, seed);
            const auto q = low_dim_q(testutil::random_coords(7, seed + 100));
            CHECK(kl_cost(p, q) == doctest::Approx(oracle::kl_brute(p, q)).epsilon(1e-13));
        }
    }
    SUBCASE("nonnegative, zero only at equality") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto p = oracle::random_affinity(8, seed);
            const auto q = low_dim_q(testutil::random_coords(8, seed + 77));
            CHECK(kl_cost(p, q) >= 0.0);
            CHECK(kl_cost(p, q) > 1e-6);  // randomly different distributions
        }
    }
}

TEST_CASE("kl_gradient") {
    SUBCASE("zero at the global minimum") {
        const auto coords = testutil::random_coords(8, 4);
        const auto p = low_dim_q(coords);
        const auto grad = kl_gradient(p, coords);
        double norm = 0.0;
        for (double g : grad) {
            norm += g * g;
        }
        CHECK(std::sqrt(norm) <= 1e-10 * 8);
    }
    SUBCASE("two points have exactly zero gradient") {
        const auto p = symmetrized_affinities({{0.0, 1.0}, {1.0, 0.0}});
        const auto grad = kl_gradient(p, std::vector<double>{0.0, 0.0, 1.0, 2.0});
        for (double g : grad) {
            CHECK(g == 0.0);
        }
    }
    SUBCASE("matches central finite differences") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const std::size_t n = 6;
            const auto p = oracle::random_affinity(n, seed);
            const auto coords = testutil::random_coords(n, seed + 31);
            const auto grad = kl_gradient(p, coords);
            const auto fd = oracle::fd_gradient(p, coords);
            for (std::size_t k = 0; k < grad.size(); ++k) {
                const double scale = std::max({std::abs(grad[k]), std::abs(fd[k]), 1e-8});
                CHECK(std::abs(grad[k] - fd[k]) / scale <= 1e-4);
            }
        }
    }
}

TEST_CASE("run_tsne") {
    SUBCASE("two points end at zero divergence") {
        const auto p = symmetrized_affinities({{0.0, 1.0}, {1.0, 0.0}});
        OptimizerConfig cfg;
        cfg.iterations = 150;
        cfg.exaggeration_iters = 20;
        cfg.seed = 5;
        const auto res = run_tsne(p, cfg);
        CHECK(res.embedding.final_kl == 0.0);
        CHECK(res.embedding.iterations_run == 150);
        CHECK(res.trace.kl_per_iteration.size() == 150);
        CHECK(res.trace.gradient_norm_per_iteration.size() == 150);
    }
    SUBCASE("fixed seed is bitwise deterministic") {
        const auto p = oracle::random_affinity(20, 3);
        OptimizerConfig cfg;
        cfg.iterations = 120;
        cfg.seed = 99;
        const auto a = run_tsne(p, cfg);
        const auto b = run_tsne(p, cfg);
        CHECK(a.embedding.coords == b.embedding.coords);
        CHECK(a.trace.kl_per_iteration == b.trace.kl_per_iteration);
    }
    SUBCASE("thread count does not change the result") {
        const auto p = oracle::random_affinity(30, 8);
        OptimizerConfig cfg;
        cfg.iterations = 60;
        cfg.exaggeration_iters = 10;
        cfg.seed = 7;
        set_max_threads(1);
        const auto a = run_tsne(p, cfg);
        set_max_threads(4);
        const auto b = run_tsne(p, cfg);
        set_max_threads(0);
        CHECK(a.embedding.coords == b.embedding.coords);
    }
    SUBCASE("absurd learning rate diverges with a named iteration") {
        const auto p = oracle::random_affinity(10, 2);
        OptimizerConfig cfg;
        cfg.iterations = 50;
        cfg.exaggeration_iters = 5;
        cfg.learning_rate = 1e300;
        cfg.seed = 1;
        CHECK_THROWS_AS((void)run_tsne(p, cfg), divergence_error);
    }
    SUBCASE("three separated clusters embed better than a random layout") {
        // 30 points in 3 well-separated HD Gaussian clusters
        const std::size_t n = 30;
        std::vector<double> values(n * 3, 0.0);
        Labels labels;
        labels.n_classes = 3;
        NormalSampler normal(12);
        for (std::size_t i = 0; i < n; ++i) {
            const int c = static_cast<int>(i / 10);
            labels.values.push_back(c);
            for (std::size_t a = 0; a < 3; ++a) {
                values[i * 3 + a] = 20.0 * c + normal();
            }
        }
        const auto data = DataMatrix::dense(3, values);
        PerplexityConfig pcfg;
        pcfg.perplexity = 8.0;
        const auto p = gaussian_affinities(DistanceTable::build(data), pcfg);

        OptimizerConfig cfg;
        cfg.iterations = 400;
        cfg.seed = 17;
        const auto res = run_tsne(p, cfg);

        // KL is non-increasing for at least 95% of post-exaggeration steps
        std::size_t good = 0;
        std::size_t steps = 0;
        for (std::size_t it = cfg.exaggeration_iters + 1; it < cfg.iterations; ++it) {
            ++steps;
            if (res.trace.kl_per_iteration[it] <= res.trace.kl_per_iteration[it - 1] + 1e-12) {
                ++good;
            }
        }
        CHECK(static_cast<double>(good) >= 0.95 * static_cast<double>(steps));

        Embedding random_layout;
        random_layout.n = n;
        random_layout.coords = testutil::random_coords(n, 555);
        const double db_opt = db_index(minmax_normalize(res.embedding), labels);
        const double db_rand = db_index(minmax_normalize(random_layout), labels);
        CHECK(db_opt < db_rand);
    }
    SUBCASE("configuration invariants are enforced") {
        const auto p = oracle::random_affinity(5, 1);
        OptimizerConfig cfg;
        cfg.iterations = 50;
        cfg.exaggeration_iters = 50;
        CHECK_THROWS_AS((void)run_tsne(p, cfg), argument_error);
        cfg.exaggeration_iters = 10;
        cfg.momentum_final = 1.0;
        CHECK_THROWS_AS((void)run_tsne(p, cfg), argument_error);
    }
}
