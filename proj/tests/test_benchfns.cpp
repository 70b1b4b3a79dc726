#include <doctest.h>

#include <cmath>

#include "cys/benchfns.hpp"
#include "cys/error.hpp"
#include "cys/oracles.hpp"
#include "cys/rng.hpp"

using namespace cys;

TEST_SUITE_BEGIN("benchfns");

TEST_CASE("quoted global minima evaluate to zero") {
    CHECK(evaluate(objective_by_name("himmelblau"), {3.0, 2.0}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(evaluate(objective_by_name("rastrigin"), {0.0, 0.0}) == 0.0);
    CHECK(evaluate(objective_by_name("salomon"), {0.0, 0.0}) == 0.0);
    CHECK(evaluate(objective_by_name("bukin"), {-10.0, 1.0}) == 0.0);
    CHECK(evaluate(objective_by_name("yang-n3"), {0.0, 0.0}) == 0.0);
}

TEST_CASE("out-of-domain points are rejected") {
    CHECK_THROWS_AS(evaluate(objective_by_name("rastrigin"), {11.0, 0.0}), RangeError);
    CHECK_THROWS_AS(evaluate(objective_by_name("bukin"), {-4.0, 0.0}), RangeError);
    CHECK_THROWS_AS(evaluate(objective_by_name("himmelblau"), {1.0}), ConfigError);
}

TEST_CASE("verify_minima passes for every catalogued minimum") {
    for (const auto& obj : benchmark_objectives()) {
        auto checks = verify_minima(obj, 1e-9, 1e-3);
        for (const auto& c : checks) {
            INFO(obj.name, " at value ", c.value_at_point);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("the four-decimal himmelblau point evaluates below 1e-3") {
    auto f = evaluate(objective_by_name("himmelblau"), {-3.7793, -3.2832});
    CHECK(std::abs(f) < 1e-3);
    CHECK(std::abs(f) > 1e-9);  // four-decimal coordinates are not exact
}

TEST_CASE("rastrigin, salomon, bukin and yang-n3 are nonnegative on their domains") {
    Rng rng(50);
    for (const auto* name : {"rastrigin", "salomon", "bukin", "yang-n3"}) {
        const auto& obj = objective_by_name(name);
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<double> x(2);
            for (std::size_t k = 0; k < 2; ++k) x[k] = rng.uniform(obj.lower[k], obj.upper[k]);
            CHECK(obj.evaluate(x) >= 0.0);
        }
    }
}

TEST_CASE("rastrigin and salomon are symmetric under central reflection") {
    Rng rng(51);
    for (const auto* name : {"rastrigin", "salomon"}) {
        const auto& obj = objective_by_name(name);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> x{rng.uniform(-10, 10), rng.uniform(-10, 10)};
            std::vector<double> nx{-x[0], -x[1]};
            CHECK(obj.evaluate(x) == doctest::Approx(obj.evaluate(nx)).epsilon(1e-12));
        }
    }
}

TEST_CASE("cross-in-tray is symmetric under both axis reflections") {
    const auto& obj = objective_by_name("cross-in-tray");
    Rng rng(52);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x{rng.uniform(-10, 10), rng.uniform(-10, 10)};
        for (auto [sx, sy] : {std::pair{-1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}}) {
            std::vector<double> y{sx * x[0], sy * x[1]};
            CHECK(obj.evaluate(x) == doctest::Approx(obj.evaluate(y)).epsilon(1e-12));
        }
    }
}

TEST_CASE("grid+refine oracle rediscovers the cross-in-tray catalogue") {
    const auto& obj = objective_by_name("cross-in-tray");
    auto located = oracle::oracle_grid_minima(obj, 0.004, 1e-4);
    REQUIRE(located.size() == 4);
    for (const auto& m : located) {
        CHECK(std::abs(std::abs(m.point[0]) - 1.349406685353340) < 1e-4);
        CHECK(std::abs(std::abs(m.point[1]) - 1.349406608602084) < 1e-4);
        CHECK(m.value == doctest::Approx(-2.062611870822739).epsilon(1e-9));
    }
}

TEST_CASE("grid+refine oracle finds all four himmelblau minima") {
    // the refinement band must cover the basin-floor variation at the grid
    // resolution (~ Hessian * step^2)
    const auto& obj = objective_by_name("himmelblau");
    auto located = oracle::oracle_grid_minima(obj, 0.05, 0.5);
    REQUIRE(located.size() == 4);
    for (const auto& m : located) CHECK(std::abs(m.value) < 1e-12);
}

TEST_CASE("descent started at a known minimum stays there") {
    for (const auto& obj : benchmark_objectives()) {
        for (const auto& m : obj.minima) {
            if (m.quoted_low_precision) continue;
            auto r = descend_from(obj, m.point, 20000);
            CHECK(r.best_value <= m.value + 1e-9);
            for (std::size_t k = 0; k < m.point.size(); ++k) {
                CHECK(std::abs(r.best_point[k] - m.point[k]) < 0.26);
            }
        }
    }
}

TEST_CASE("multistart reaches the basin floor on the smooth objectives") {
    CHECK(multistart_optimize(objective_by_name("himmelblau"), 100, 4000, 7).best_value < 1e-6);
    CHECK(multistart_optimize(objective_by_name("rastrigin"), 100, 4000, 7).best_value < 1e-3);
    CHECK(multistart_optimize(objective_by_name("salomon"), 100, 4000, 7).best_value < 1e-3);
}

TEST_CASE("multistart is deterministic under a seed") {
    auto a = multistart_optimize(objective_by_name("rastrigin"), 20, 2000, 9);
    auto b = multistart_optimize(objective_by_name("rastrigin"), 20, 2000, 9);
    CHECK(a.best_value == b.best_value);
    CHECK(a.best_point == b.best_point);
}

TEST_SUITE_END();
