#include <doctest.h>

#include <cmath>

#include "cys/error.hpp"
#include "cys/propagation.hpp"
#include "test_util.hpp"

using namespace cys;
using namespace cys::test;

TEST_SUITE_BEGIN("propagation");

namespace {

FeatureMatrix rows(const std::vector<std::vector<double>>& data) {
    FeatureMatrix m(data.size(), data.empty() ? 0 : data[0].size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::copy(data[i].begin(), data[i].end(), m.row(i).begin());
    }
    return m;
}

double spread(const FeatureMatrix& h) {
    double worst = 0.0;
    for (std::size_t i = 0; i < h.row_count(); ++i) {
        for (std::size_t j = i + 1; j < h.row_count(); ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < h.dimension(); ++k) {
                double d = h.at(i, k) - h.at(j, k);
                d2 += d * d;
            }
            worst = std::max(worst, std::sqrt(d2));
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("identical neighbor features give uniform attention") {
    auto g = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
    auto h = rows({{0.3}, {1.0}, {1.0}, {1.0}});
    PropagationConfig cfg;
    auto params = make_propagation_params(1, 7);
    auto coeffs = attention_coefficients(h, g, cfg, params);
    REQUIRE(coeffs[0].size() == 3);
    for (double a : coeffs[0]) CHECK(a == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("logits differing by ln 2 give coefficients (2/3, 1/3)") {
    auto g = make_graph(3, {{0, 1}, {0, 2}});
    auto h = rows({{0.0}, {1.0}, {0.0}});
    PropagationConfig cfg;
    cfg.logit = AttentionLogit::Pair;
    PropagationParams params;
    params.dim = 1;
    params.transform = {1.0};
    params.attention = {0.0, std::log(2.0), 0.0, 0.0};  // logit = ln2 * h_j
    auto coeffs = attention_coefficients(h, g, cfg, params);
    REQUIRE(coeffs[0].size() == 2);
    CHECK(coeffs[0][0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(coeffs[0][1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("attention coefficients sum to one for every node with neighbors") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto g = random_graph(12, 0.3, 100 + seed);
        FeatureMatrix h(12, 5);
        Rng rng(seed);
        for (auto& v : h.data()) v = rng.next_double() * 4 - 2;
        PropagationConfig cfg;
        auto params = make_propagation_params(5, seed);
        auto coeffs = attention_coefficients(h, g, cfg, params);
        for (std::size_t v = 0; v < 12; ++v) {
            if (g.degree(static_cast<NodeIdx>(v)) == 0) {
                CHECK(coeffs[v].empty());
                continue;
            }
            double sum = 0.0;
            for (double a : coeffs[v]) sum += a;
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("attention aggregation with a single neighbor copies its features") {
    auto g = make_graph(2, {{0, 1}});
    auto h = rows({{2.0, -1.0}, {5.0, 3.0}});
    PropagationConfig cfg;
    auto params = make_propagation_params(2, 3);
    auto coeffs = attention_coefficients(h, g, cfg, params);
    auto m = aggregate(h, g, coeffs, cfg);
    CHECK(m.at(0, 0) == doctest::Approx(5.0));
    CHECK(m.at(0, 1) == doctest::Approx(3.0));
}

TEST_CASE("uniform coefficients aggregate to the neighbor mean") {
    auto g = make_graph(3, {{0, 1}, {0, 2}});
    auto h = rows({{0.0}, {2.0}, {4.0}});
    std::vector<std::vector<double>> coeffs{{0.5, 0.5}, {1.0}, {1.0}};
    PropagationConfig cfg;
    auto m = aggregate(h, g, coeffs, cfg);
    CHECK(m.at(0, 0) == doctest::Approx(3.0));
}

TEST_CASE("convolution kernel on a path uses degree scaling") {
    auto g = make_graph(3, {{0, 1}, {1, 2}});
    auto h = rows({{1.0}, {0.0}, {5.0}});
    PropagationConfig cfg;
    cfg.variant = PropagationVariant::Convolution;
    auto m = aggregate(h, g, {}, cfg);
    // m_b = h_a / sqrt(2*1) + h_c / sqrt(2*1)
    CHECK(m.at(1, 0) == doctest::Approx(6.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("isomorphism sums neighbors; self-loop variant adds (1+eps) h_i") {
    auto g = make_graph(3, {{0, 1}, {0, 2}});
    auto h = rows({{1.0}, {2.0}, {3.0}});
    PropagationConfig cfg;
    cfg.variant = PropagationVariant::Isomorphism;
    CHECK(aggregate(h, g, {}, cfg).at(0, 0) == doctest::Approx(5.0));

    cfg.variant = PropagationVariant::IsomorphismSelfLoops;
    cfg.gin_epsilon = 0.5;
    CHECK(aggregate(h, g, {}, cfg).at(0, 0) == doctest::Approx(1.5 * 1.0 + 5.0));
}

TEST_CASE("update with identity activation, zero bias, zero scale is the identity") {
    auto g = make_graph(2, {{0, 1}});
    auto h = rows({{1.0, 2.0}, {-3.0, 4.0}});
    PropagationConfig cfg;
    cfg.activation = Activation::Identity;
    cfg.alpha_scale = 0.0;
    auto params = make_propagation_params(2, 1);
    auto coeffs = attention_coefficients(h, g, cfg, params);
    auto m = aggregate(h, g, coeffs, cfg);
    auto next = update(h, m, g, cfg);
    CHECK(next.data() == h.data());
}

TEST_CASE("single-neighbor residual update adds the neighbor") {
    auto g = make_graph(2, {{0, 1}});
    auto h = rows({{1.0}, {4.0}});
    PropagationConfig cfg;
    cfg.activation = Activation::Identity;
    cfg.alpha_scale = 1.0;
    auto params = make_propagation_params(1, 1);
    auto coeffs = attention_coefficients(h, g, cfg, params);
    auto next = update(h, aggregate(h, g, coeffs, cfg), g, cfg);
    CHECK(next.at(0, 0) == doctest::Approx(5.0));
    CHECK(next.at(1, 0) == doctest::Approx(5.0));
}

TEST_CASE("relu zeroes negative pre-activations") {
    SimpleGraph g(1);
    g.finalize();
    auto h = rows({{-2.0, 3.0}});
    PropagationConfig cfg;
    cfg.activation = Activation::Relu;
    FeatureMatrix m(1, 2, 0.0);
    auto next = update(h, m, g, cfg);
    CHECK(next.at(0, 0) == 0.0);
    CHECK(next.at(0, 1) == 3.0);
}

TEST_CASE("leaky relu keeps a 0.2 slope below zero") {
    SimpleGraph g(1);
    g.finalize();
    auto h = rows({{-2.0}});
    PropagationConfig cfg;
    cfg.activation = Activation::LeakyRelu;
    FeatureMatrix m(1, 1, 0.0);
    CHECK(update(h, m, g, cfg).at(0, 0) == doctest::Approx(-0.4));
}

TEST_CASE("one propagate layer equals the manual three-step composition") {
    auto g = random_graph(8, 0.4, 88);
    FeatureMatrix h(8, 3);
    Rng rng(4);
    for (auto& v : h.data()) v = rng.next_double();
    PropagationConfig cfg;
    cfg.layers = 1;
    cfg.seed = 12;

    auto states = propagate(h, g, cfg);
    REQUIRE(states.size() == 2);

    auto params = make_propagation_params(3, cfg.seed);
    auto coeffs = attention_coefficients(h, g, cfg, params);
    auto manual = update(h, aggregate(h, g, coeffs, cfg), g, cfg);
    CHECK(states.back().features.data() == manual.data());
}

TEST_CASE("edgeless graph layers are activation iterates of h0") {
    SimpleGraph g(3);
    g.finalize();
    auto h = rows({{1.0}, {-1.0}, {0.5}});
    PropagationConfig cfg;
    cfg.layers = 3;
    cfg.bias = 0.25;
    cfg.activation = Activation::Identity;
    auto states = propagate(h, g, cfg);
    CHECK(states.back().features.at(0, 0) == doctest::Approx(1.0 + 3 * 0.25));
    CHECK(states.back().features.at(1, 0) == doctest::Approx(-1.0 + 3 * 0.25));
}

TEST_CASE("two connected nodes contract toward each other") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        Rng rng(seed);
        auto g = make_graph(2, {{0, 1}});
        FeatureMatrix h(2, 4);
        for (auto& v : h.data()) v = rng.next_double() * 6 - 3;
        PropagationConfig cfg;
        cfg.activation = Activation::Identity;
        cfg.alpha_scale = 0.25 + 0.75 * rng.next_double();  // in (0,1]
        cfg.layers = 6;
        cfg.seed = seed;
        auto states = propagate(h, g, cfg);
        double prev = spread(states[0].features);
        for (std::size_t l = 1; l < states.size(); ++l) {
            double cur = spread(states[l].features);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("attention spread grows at most by the (1+alpha) residual factor") {
    // The residual update is h' = (I + alpha A) h with A row-stochastic on
    // nodes with neighbors, so spread can grow by at most (1 + alpha) per
    // layer; the normalized iterate never spreads out.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto g = random_graph(4 + seed % 12, 0.5, 500 + seed);
        FeatureMatrix h(g.node_count(), 3);
        Rng rng(seed * 3 + 1);
        for (auto& v : h.data()) v = rng.next_double() * 2 - 1;
        PropagationConfig cfg;
        cfg.activation = Activation::Identity;
        cfg.alpha_scale = 1.0;
        cfg.layers = 5;
        cfg.seed = seed;
        auto states = propagate(h, g, cfg);
        for (std::size_t l = 1; l < states.size(); ++l) {
            double prev = spread(states[l - 1].features);
            double cur = spread(states[l].features);
            CHECK(cur <= (1.0 + cfg.alpha_scale) * prev + 1e-9);
        }
    }
}

TEST_CASE("propagation is equivariant under node relabeling") {
    auto g = random_graph(9, 0.4, 654);
    const std::size_t n = g.node_count();
    FeatureMatrix h(n, 4);
    Rng rng(8);
    for (auto& v : h.data()) v = rng.next_double();

    PropagationConfig cfg;
    cfg.layers = 2;
    cfg.seed = 99;
    auto base = propagate(h, g, cfg).back().features;

    SimpleGraph gp(n);
    for (std::size_t v = 0; v < n; ++v) {
        for (auto w : g.neighbors(static_cast<NodeIdx>(v))) {
            gp.add_edge(static_cast<NodeIdx>(n - 1 - v),
                        static_cast<NodeIdx>(n - 1 - static_cast<std::size_t>(w)));
        }
    }
    gp.finalize();
    FeatureMatrix hp(n, 4);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t k = 0; k < 4; ++k) hp.at(n - 1 - v, k) = h.at(v, k);
    }
    auto perm = propagate(hp, gp, cfg).back().features;
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(base.at(v, k) == doctest::Approx(perm.at(n - 1 - v, k)).epsilon(1e-13));
        }
    }
}

TEST_CASE("fixed seed reproduces outputs bitwise; different seeds differ") {
    auto g = random_graph(10, 0.4, 31);
    FeatureMatrix h(10, 6);
    Rng rng(2);
    for (auto& v : h.data()) v = rng.next_double();
    PropagationConfig cfg;
    cfg.layers = 2;
    cfg.seed = 5;
    auto a = propagate(h, g, cfg).back().features;
    auto b = propagate(h, g, cfg).back().features;
    CHECK(a.data() == b.data());
    cfg.seed = 6;
    auto c = propagate(h, g, cfg).back().features;
    CHECK(a.data() != c.data());
}

TEST_CASE("per-node bias overrides the uniform bias") {
    SimpleGraph g(2);
    g.finalize();
    auto h = rows({{1.0}, {1.0}});
    PropagationConfig cfg;
    cfg.activation = Activation::Identity;
    cfg.bias = 100.0;  // ignored when node_bias is set
    cfg.node_bias = {0.5, -0.25};
    FeatureMatrix m(2, 1, 0.0);
    auto next = update(h, m, g, cfg);
    CHECK(next.at(0, 0) == doctest::Approx(1.5));
    CHECK(next.at(1, 0) == doctest::Approx(0.75));

    cfg.node_bias = {0.5};  // wrong size
    CHECK_THROWS_AS(update(h, m, g, cfg), ConfigError);
}

TEST_CASE("non-finite updates raise a numeric error naming the node") {
    SimpleGraph g(2);
    g.add_edge(0, 1);
    g.finalize();
    auto h = rows({{1e308}, {1e308}});
    PropagationConfig cfg;
    cfg.activation = Activation::Identity;
    cfg.alpha_scale = 1.0;
    cfg.layers = 1;
    CHECK_THROWS_WITH_AS(propagate(h, g, cfg), doctest::Contains("node"), NumericError);
}

TEST_CASE("unnormalized attention mode skips the softmax") {
    auto g = make_graph(2, {{0, 1}});
    auto h = rows({{1.0}, {2.0}});
    PropagationConfig cfg;
    cfg.unnormalized_attention = true;
    auto params = make_propagation_params(1, 9);
    auto coeffs = attention_coefficients(h, g, cfg, params);
    // single neighbor would softmax to exactly 1; raw exponential is not 1
    CHECK(coeffs[0][0] != doctest::Approx(1.0));
    CHECK(coeffs[0][0] > 0.0);
}

TEST_SUITE_END();
