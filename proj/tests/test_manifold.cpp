#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <cstring>

#include "igeo/manifold.hpp"
#include "test_rng.hpp"

using namespace igeo;

TEST_CASE("model params validate their invariants") {
    CHECK_NOTHROW(ModelParams(2, {0.1, 0.9}, {1.0, 2.0}, {1.0, 1.0}));
    CHECK_THROWS_AS(ModelParams(0, {}, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1, {0.0}, {1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1, {1.0}, {1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1, {0.5}, {-1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1, {0.5}, {1.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(2, {0.5}, {1.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
    // 1e-12 is inside the open interval even though the diagonalization
    // modules refuse it
    CHECK_NOTHROW(ModelParams(1, {1e-12}, {1.0}, {1.0}));
}

TEST_CASE("metric blocks") {
    SUBCASE("uncorrelated limit at sigma 1") {
        const ModelParams params = ModelParams::uniform(1, 1e-12, 1.0, 1.0);
        const Mat2 g = metric_tensor(Macrostate::original({0.0, 1.0}), params).blocks[0];
        CHECK(g.a11 == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(g.a12 == doctest::Approx(0.0).epsilon(1e-11));
        CHECK(g.a22 == doctest::Approx(2.0).epsilon(1e-11));
    }
    SUBCASE("direct evaluation at sigma 2, r 0.5") {
        const ModelParams params = ModelParams::uniform(1, 0.5, 1.0, 1.0);
        const Mat2 g = metric_tensor(Macrostate::original({3.0, 2.0}), params).blocks[0];
        CHECK(g.a11 == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(g.a12 == doctest::Approx(0.125).epsilon(1e-15));
        CHECK(g.a21 == doctest::Approx(0.125).epsilon(1e-15));
        CHECK(g.a22 == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("two blocks keep their own r") {
        const ModelParams params(2, {0.1, 0.9}, {1.0, 1.0}, {1.0, 1.0});
        const BlockMetric g = metric_tensor(Macrostate::original({0.0, 1.0, 0.0, 1.0}), params);
        REQUIRE(g.blocks.size() == 2);
        CHECK(g.blocks[0].a12 == 0.1);
        CHECK(g.blocks[1].a12 == 0.9);
        CHECK(g.blocks[0].a22 == 2.0);
    }
    SUBCASE("non-positive sigma names the block") {
        const ModelParams params(2, {0.5, 0.5}, {1.0, 1.0}, {1.0, 1.0});
        CHECK_THROWS_WITH_AS(
            metric_tensor(Macrostate::original({0.0, 1.0, 0.0, -2.0}), params),
            doctest::Contains("sigma[1]"), std::domain_error);
    }
}

TEST_CASE("inverse metric") {
    SUBCASE("uncorrelated limit") {
        const ModelParams params = ModelParams::uniform(1, 1e-12, 1.0, 1.0);
        const Mat2 gi = inverse_metric(Macrostate::original({0.0, 1.0}), params).blocks[0];
        CHECK(gi.a11 == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(gi.a22 == doctest::Approx(0.5).epsilon(1e-11));
    }
    SUBCASE("direct evaluation at sigma 2, r 0.5") {
        const ModelParams params = ModelParams::uniform(1, 0.5, 1.0, 1.0);
        const Mat2 gi = inverse_metric(Macrostate::original({0.0, 2.0}), params).blocks[0];
        const double f = 4.0 / 1.75;
        CHECK(gi.a11 == doctest::Approx(2.0 * f).epsilon(1e-15));
        CHECK(gi.a12 == doctest::Approx(-0.5 * f).epsilon(1e-15));
        CHECK(gi.a22 == doctest::Approx(f).epsilon(1e-15));
    }
    SUBCASE("product with the metric is the identity") {
        TestRng rng;
        for (int i = 0; i < 500; ++i) {
            const double r = rng.uniform(1e-3, 1.0 - 1e-3);
            const double sg = rng.log_uniform(1e-3, 1e3);
            const ModelParams params = ModelParams::uniform(1, r, 1.0, 1.0);
            const Macrostate theta = Macrostate::original({rng.uniform(-5.0, 5.0), sg});
            const Mat2 g = metric_tensor(theta, params).blocks[0];
            const Mat2 gi = inverse_metric(theta, params).blocks[0];
            CHECK(max_abs_diff(g * gi, Mat2::identity()) < 1e-12);
        }
    }
}

TEST_CASE("line element") {
    const ModelParams params = ModelParams::uniform(1, 0.5, 1.0, 1.0);
    const Macrostate theta = Macrostate::original({0.0, 1.0});

    SUBCASE("null displacement") {
        const std::vector<double> d{0.0, 0.0};
        CHECK(line_element(theta, d, params) == 0.0);
    }
    SUBCASE("cross term contributes 2 r") {
        const std::vector<double> d{1.0, 1.0};
        CHECK(line_element(theta, d, params) == doctest::Approx(4.0).epsilon(1e-15));
        const ModelParams no_corr = ModelParams::uniform(1, 1e-12, 1.0, 1.0);
        CHECK(line_element(theta, d, no_corr) == doctest::Approx(3.0).epsilon(1e-11));
    }
    SUBCASE("matches dtheta^T g dtheta") {
        TestRng rng;
        for (int i = 0; i < 200; ++i) {
            const double r = rng.uniform(0.05, 0.95);
            const ModelParams p = ModelParams::uniform(1, r, 1.0, 1.0);
            const Macrostate th = Macrostate::original({rng.uniform(-3, 3), rng.log_uniform(0.1, 10)});
            const std::vector<double> d{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            const Mat2 g = metric_tensor(th, p).blocks[0];
            const double quad = g.a11 * d[0] * d[0] + 2.0 * g.a12 * d[0] * d[1] +
                                g.a22 * d[1] * d[1];
            CHECK(line_element(th, d, p) ==
                  doctest::Approx(quad).epsilon(1e-12));
        }
    }
    SUBCASE("dimension mismatch is an argument error") {
        const std::vector<double> d{1.0, 0.0, 0.0};
        CHECK_THROWS_AS(line_element(theta, d, params), std::invalid_argument);
    }
}

TEST_CASE("volume density") {
    SUBCASE("near-uncorrelated paper density at sigma 1") {
        const ModelParams params = ModelParams::uniform(1, 1e-12, 1.0, 1.0);
        CHECK(volume_density(Macrostate::original({0.0, 1.0}), params, DensityMode::Paper) ==
              doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("paper vs determinant differ by one sigma power") {
        const ModelParams params = ModelParams::uniform(1, 0.5, 1.0, 1.0);
        const Macrostate theta = Macrostate::original({0.0, 2.0});
        CHECK(volume_density(theta, params, DensityMode::Paper) ==
              doctest::Approx(std::sqrt(1.75) / 2.0).epsilon(1e-15));
        CHECK(volume_density(theta, params, DensityMode::Determinant) ==
              doctest::Approx(std::sqrt(1.75) / 4.0).epsilon(1e-15));
    }
    SUBCASE("multi-block product") {
        const ModelParams params(2, {0.5, 0.5}, {1.0, 1.0}, {1.0, 1.0});
        const Macrostate theta = Macrostate::original({0.0, 2.0, 0.0, 2.0});
        const double one = std::sqrt(1.75) / 2.0;
        CHECK(volume_density(theta, params, DensityMode::Paper) ==
              doctest::Approx(one * one).epsilon(1e-14));
    }
}

TEST_CASE("macrostate chart discipline") {
    const ModelParams params = ModelParams::uniform(1, 0.5, 1.0, 1.0);
    const Macrostate diag = Macrostate::diagonal({0.0, 1.0});
    CHECK_THROWS_AS(metric_tensor(diag, params), std::invalid_argument);
    CHECK_THROWS_AS(Macrostate::original({1.0}), std::invalid_argument);
}
