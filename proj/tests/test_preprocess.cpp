#include <doctest.h>

#include <cmath>

#include "cys/error.hpp"
#include "cys/preprocess.hpp"
#include "test_util.hpp"

using namespace cys;
using namespace cys::test;

TEST_SUITE_BEGIN("preprocess");

namespace {

Hypergraph tiny_hypergraph() {
    IdMap ids;
    for (auto name : {"a", "b", "c", "d", "e"}) ids.intern(name);
    return Hypergraph(std::move(ids), {Hyperedge{{0, 1}, HyperedgeKind::CoInteraction, 0}});
}

}  // namespace

TEST_CASE("remove_isolated drops uncovered nodes") {
    auto [pruned, report] = remove_isolated(tiny_hypergraph());
    CHECK(report.removed_isolated == 3);  // c, d, e
    CHECK(pruned.node_count() == 2);
    CHECK(pruned.edge_count() == 1);
    CHECK(pruned.nodes().name(0) == "a");
    CHECK(pruned.nodes().name(1) == "b");
}

TEST_CASE("remove_isolated keeps a fully covered hypergraph intact") {
    IdMap ids;
    ids.intern("a");
    ids.intern("b");
    Hypergraph h(std::move(ids), {Hyperedge{{0, 1}, HyperedgeKind::CoPreference, {}}});
    auto [pruned, report] = remove_isolated(h);
    CHECK(report.removed_isolated == 0);
    CHECK(pruned.node_count() == 2);
}

TEST_CASE("threshold_filter keeps exactly the entries at or above t") {
    auto store = make_store({{"u1", "i1", 4}, {"u1", "i2", 2}});
    auto filtered = threshold_filter(store, 3.0);
    CHECK(filtered.entry_count() == 1);
    CHECK(filtered.item_count() == 1);
    CHECK(filtered.items().name(0) == "i1");
}

TEST_CASE("threshold_filter at t=0 is the identity on entries") {
    auto store = make_store({{"u1", "i1", 4}, {"u2", "i2", 0}, {"u3", "i3", 2.5}});
    auto filtered = threshold_filter(store, 0.0);
    CHECK(filtered.entry_count() == store.entry_count());
    CHECK(filtered.user_count() == store.user_count());
    CHECK(filtered.item_count() == store.item_count());
}

TEST_CASE("threshold_filter matches a linear-scan oracle and is monotone") {
    Rng rng(11);
    std::vector<std::tuple<std::string, std::string, double>> triples;
    for (int k = 0; k < 200; ++k) {
        triples.emplace_back("u" + std::to_string(rng.next_below(20)),
                             "i" + std::to_string(rng.next_below(30)),
                             static_cast<double>(rng.next_below(6)));
    }
    auto store = make_store(triples);

    std::size_t prev = store.entry_count() + 1;
    for (double t : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) {
        auto filtered = threshold_filter(store, t);
        std::size_t expected = 0;  // scan-and-keep oracle
        for (const auto& e : store.entries()) {
            if (e.rating >= t) ++expected;
        }
        CHECK(filtered.entry_count() == expected);
        CHECK(filtered.entry_count() <= prev);  // monotone shrinking
        prev = filtered.entry_count();
        for (const auto& e : filtered.entries()) CHECK(e.rating >= t);
    }
}

TEST_CASE("anomaly score is zero for constant or single ratings") {
    auto store = make_store({{"u1", "i1", 3}, {"u1", "i2", 3}, {"u2", "i1", 5}});
    auto psi = anomaly_scores(store);
    CHECK(psi[0] == 0.0);  // constant ratings, Var = 0
    CHECK(psi[1] == 0.0);  // single rating
}

TEST_CASE("anomaly score of the most active inconsistent user is the raw variance") {
    // u1 rates {1, 5}: frequency ratio 1 (most active), population Var = 4
    auto store = make_store({{"u1", "i1", 1}, {"u1", "i2", 5}, {"u2", "i1", 3}});
    auto psi = anomaly_scores(store);
    CHECK(psi[0] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("anomaly scoring scales by relative activity") {
    // u2 rates {0.5, 4.5} over 2 items; u1 has 4 nonzero entries
    auto store = make_store({{"u1", "i1", 3},
                             {"u1", "i2", 3},
                             {"u1", "i3", 3},
                             {"u1", "i4", 3},
                             {"u2", "i1", 0.5},
                             {"u2", "i2", 4.5}});
    auto psi = anomaly_scores(store);
    // freq 2/4, Var = 4 -> psi = 2
    CHECK(psi[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("anomaly scores ignore zero ratings") {
    auto store = make_store({{"u1", "i1", 0}, {"u1", "i2", 2}, {"u1", "i3", 4}});
    auto psi = anomaly_scores(store);
    // nonzero ratings {2,4}: Var = 1, freq = 1
    CHECK(psi[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("anomaly_scores rejects an empty store") {
    IdMap u, i;
    InteractionStore store(std::move(u), std::move(i), {});
    CHECK_THROWS_AS(anomaly_scores(store), ConfigError);
}

TEST_CASE("exclude_anomalies removes every entry of flagged users") {
    auto store = make_store({{"bad", "i1", 1},
                             {"bad", "i2", 5},
                             {"bad", "i3", 1},
                             {"ok", "i1", 4},
                             {"ok2", "i2", 4}});
    auto psi = anomaly_scores(store);
    REQUIRE(psi[0] > 0.9);  // freq 1, Var > 0.9
    auto cleaned = exclude_anomalies(store, psi, 0.9);
    CHECK(cleaned.user_count() == 2);
    CHECK(cleaned.entry_count() == 2);
    CHECK(!cleaned.users().find("bad").has_value());
}

TEST_CASE("exclude_anomalies is idempotent and a no-op below the cutoff") {
    auto store = make_store({{"u1", "i1", 4}, {"u2", "i2", 4}});
    auto psi = anomaly_scores(store);
    auto once = exclude_anomalies(store, psi, 0.9);
    CHECK(once.entry_count() == store.entry_count());
    auto psi2 = anomaly_scores(once);
    auto twice = exclude_anomalies(once, psi2, 0.9);
    CHECK(twice.entry_count() == once.entry_count());
}

TEST_CASE("trust is 1 for identical co-ratings") {
    auto store = make_store({{"u1", "i1", 4}, {"u2", "i1", 4}, {"u1", "i2", 2}, {"u2", "i2", 2}});
    auto trust = trust_scores(store);
    CHECK(trust.get(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(trust.get(1, 0) == doctest::Approx(1.0).epsilon(1e-15));  // symmetric accessor
}

TEST_CASE("trust for differences {0,2} is exp(-1)") {
    // co-rated items: i1 diff 0, i2 diff 2 -> population Var = 1
    auto store = make_store({{"u1", "i1", 4}, {"u2", "i1", 4}, {"u1", "i2", 4}, {"u2", "i2", 2}});
    auto trust = trust_scores(store);
    CHECK(trust.get(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("pairs with no co-rated item are absent") {
    auto store = make_store({{"u1", "i1", 4}, {"u2", "i2", 4}});
    auto trust = trust_scores(store);
    CHECK(!trust.contains(0, 1));
    CHECK(trust.get(0, 1) == 0.0);  // missing treated as 0 downstream
}

TEST_CASE("single co-rated item gives trust 1") {
    auto store = make_store({{"u1", "i1", 5}, {"u2", "i1", 1}});
    auto trust = trust_scores(store);
    CHECK(trust.get(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("trust table is symmetric and bounded on random stores") {
    Rng rng(99);
    std::vector<std::tuple<std::string, std::string, double>> triples;
    for (int k = 0; k < 150; ++k) {
        triples.emplace_back("u" + std::to_string(rng.next_below(10)),
                             "i" + std::to_string(rng.next_below(15)),
                             static_cast<double>(rng.next_below(6)));
    }
    auto store = make_store(triples);
    auto trust = trust_scores(store);
    for (const auto& [key, tau] : trust.pairs()) {
        CHECK(tau > 0.0);
        CHECK(tau <= 1.0);
        CHECK(trust.get(key.first, key.second) == trust.get(key.second, key.first));
    }
}

TEST_SUITE_END();
