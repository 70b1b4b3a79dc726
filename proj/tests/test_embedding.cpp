#include <doctest.h>

#include <cmath>
#include <map>

#include "cys/embedding.hpp"
#include "cys/error.hpp"
#include "test_util.hpp"

using namespace cys;
using namespace cys::test;

TEST_SUITE_BEGIN("embedding");

namespace {

SimpleGraph barbell() {
    SimpleGraph g(10);
    for (NodeIdx i = 0; i < 5; ++i) {
        for (NodeIdx j = i + 1; j < 5; ++j) g.add_edge(i, j);
    }
    for (NodeIdx i = 5; i < 10; ++i) {
        for (NodeIdx j = i + 1; j < 10; ++j) g.add_edge(i, j);
    }
    g.add_edge(4, 5);
    g.finalize();
    return g;
}

double cosine(std::span<const double> a, std::span<const double> b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

TEST_CASE("every walk starts at its designated node and follows edges") {
    auto g = random_graph(20, 0.25, 555);
    WalkParams wp;
    wp.length = 12;
    wp.per_node = 4;
    wp.seed = 9;
    auto corpus = generate_walks(g, wp);

    std::size_t expected_starts = 0;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        if (g.degree(static_cast<NodeIdx>(v)) > 0) ++expected_starts;
    }
    CHECK(corpus.walks.size() == expected_starts * 4);

    std::map<NodeIdx, int> starts;
    for (const auto& walk : corpus.walks) {
        REQUIRE(!walk.empty());
        starts[walk.front()]++;
        for (std::size_t k = 1; k < walk.size(); ++k) {
            CHECK(g.has_edge(walk[k - 1], walk[k]));
        }
        CHECK(walk.size() <= 12);
    }
    for (const auto& [node, count] : starts) CHECK(count == 4);
}

TEST_CASE("degree-1 start always steps to its unique neighbor") {
    auto g = make_graph(3, {{0, 1}, {1, 2}});
    WalkParams wp;
    wp.length = 2;
    wp.per_node = 8;
    wp.seed = 3;
    auto corpus = generate_walks(g, wp);
    for (const auto& walk : corpus.walks) {
        if (walk.front() == 0) {
            REQUIRE(walk.size() == 2);
            CHECK(walk[1] == 1);
        }
    }
}

TEST_CASE("zero-edge graph yields an empty corpus flagged as such") {
    SimpleGraph g(4);
    g.finalize();
    WalkParams wp;
    auto corpus = generate_walks(g, wp);
    CHECK(corpus.empty_graph);
    CHECK(corpus.walks.empty());
}

TEST_CASE("p=q=1 second-order steps from a star center are uniform") {
    // star center 0 with 8 leaves; check the third walk element, which is
    // produced by the biased second-order step
    const std::size_t leaves = 8;
    SimpleGraph g(leaves + 1);
    for (NodeIdx leaf = 1; leaf <= static_cast<NodeIdx>(leaves); ++leaf) g.add_edge(0, leaf);
    g.finalize();

    WalkParams wp;
    wp.length = 3;
    wp.per_node = 20000;
    wp.seed = 123;
    auto corpus = generate_walks(g, wp);

    // first-step distribution from the center
    std::map<NodeIdx, double> freq;
    double total = 0;
    for (const auto& walk : corpus.walks) {
        if (walk.front() == 0) {
            freq[walk[1]] += 1.0;
            total += 1.0;
        }
    }
    double expected = total / static_cast<double>(leaves);
    double chi2 = 0.0;
    for (NodeIdx leaf = 1; leaf <= static_cast<NodeIdx>(leaves); ++leaf) {
        double diff = freq[leaf] - expected;
        chi2 += diff * diff / expected;
    }
    CHECK(chi2 < 18.475);  // chi-square(7 dof) at 99%

    // biased step: leaf-started walks go leaf -> center -> x, where x is
    // uniform over all leaves (p = q = 1)
    freq.clear();
    total = 0;
    for (const auto& walk : corpus.walks) {
        if (walk.front() != 0) {
            REQUIRE(walk.size() == 3);
            CHECK(walk[1] == 0);
            freq[walk[2]] += 1.0;
            total += 1.0;
        }
    }
    expected = total / static_cast<double>(leaves);
    chi2 = 0.0;
    for (NodeIdx leaf = 1; leaf <= static_cast<NodeIdx>(leaves); ++leaf) {
        double diff = freq[leaf] - expected;
        chi2 += diff * diff / expected;
    }
    CHECK(chi2 < 18.475);
}

TEST_CASE("walk corpora are identical across serial and parallel generation") {
    auto g = random_graph(25, 0.3, 777);
    WalkParams wp;
    wp.length = 15;
    wp.per_node = 6;
    wp.seed = 42;
    auto par = generate_walks(g, wp);
    auto ser = generate_walks_serial(g, wp);
    REQUIRE(par.walks.size() == ser.walks.size());
    for (std::size_t i = 0; i < par.walks.size(); ++i) CHECK(par.walks[i] == ser.walks[i]);
}

TEST_CASE("skip-gram emits d-dimensional rows, deterministically") {
    auto g = barbell();
    WalkParams wp;
    wp.seed = 1;
    auto corpus = generate_walks(g, wp);

    SkipgramParams sp;
    sp.dim = 24;
    sp.epochs = 2;
    sp.seed = 5;
    auto a = train_skipgram(corpus, g.node_count(), sp);
    auto b = train_skipgram(corpus, g.node_count(), sp);
    CHECK(a.vectors.dimension() == 24);
    CHECK(a.vectors.row_count() == g.node_count());
    CHECK(a.vectors.data() == b.vectors.data());  // bitwise identical

    sp.seed = 6;
    auto c = train_skipgram(corpus, g.node_count(), sp);
    CHECK(a.vectors.data() != c.vectors.data());
}

TEST_CASE("skip-gram rejects dimension zero") {
    auto g = barbell();
    WalkParams wp;
    auto corpus = generate_walks(g, wp);
    SkipgramParams sp;
    sp.dim = 0;
    CHECK_THROWS_AS(train_skipgram(corpus, g.node_count(), sp), ConfigError);
}

TEST_CASE("nodes absent from the corpus get zero vectors and are reported") {
    auto g = make_graph(4, {{0, 1}});  // nodes 2,3 isolated
    WalkParams wp;
    wp.length = 5;
    wp.per_node = 3;
    auto corpus = generate_walks(g, wp);
    SkipgramParams sp;
    sp.dim = 8;
    sp.epochs = 1;
    auto table = train_skipgram(corpus, g.node_count(), sp);
    CHECK(table.absent_nodes == std::vector<NodeIdx>{2, 3});
    for (auto v : table.absent_nodes) {
        for (double x : table.vectors.row(static_cast<std::size_t>(v))) CHECK(x == 0.0);
    }
}

TEST_CASE("barbell cliques embed closer within than across") {
    auto g = barbell();
    WalkParams wp;
    wp.length = 20;
    wp.per_node = 20;
    wp.seed = 31;
    auto corpus = generate_walks(g, wp);
    SkipgramParams sp;
    sp.dim = 16;
    sp.epochs = 5;
    sp.seed = 17;
    auto table = train_skipgram(corpus, g.node_count(), sp);

    double intra = 0, inter = 0;
    int n_intra = 0, n_inter = 0;
    for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t j = i + 1; j < 10; ++j) {
            double c = cosine(table.vectors.row(i), table.vectors.row(j));
            if ((i < 5) == (j < 5)) {
                intra += c;
                ++n_intra;
            } else {
                inter += c;
                ++n_inter;
            }
        }
    }
    CHECK(intra / n_intra > inter / n_inter);
}

TEST_CASE("skip-gram stays finite at the stability learning rate") {
    // ~1.5e5-token corpus at the highest supported learning rate
    auto g = random_graph(250, 0.05, 999);
    WalkParams wp;
    wp.length = 25;
    wp.per_node = 24;
    wp.seed = 2;
    auto corpus = generate_walks(g, wp);
    CHECK(corpus.token_count() > 100000);
    SkipgramParams sp;
    sp.dim = 16;
    sp.epochs = 1;
    sp.learning_rate = 0.05;
    auto table = train_skipgram(corpus, g.node_count(), sp);
    CHECK(table.vectors.all_finite());
}

TEST_CASE("concat weights scale the two blocks independently") {
    EmbeddingTable emb;
    emb.vectors = FeatureMatrix(2, 2);
    emb.vectors.at(0, 0) = 1.0;
    emb.vectors.at(0, 1) = -2.0;
    emb.vectors.at(1, 0) = 0.5;

    CentralityVector cent;
    cent.degree = {1, 2};
    cent.closeness = {0.5, 1.0};
    cent.betweenness = {0, 1};
    cent.degree_norm = {0, 1};
    cent.closeness_norm = {0, 1};
    cent.betweenness_norm = {0, 1};

    SUBCASE("zero centrality weight zeroes the tail") {
        auto m = concat_features(emb, cent, 1.0, 0.0);
        REQUIRE(m.dimension() == 5);
        CHECK(m.at(0, 0) == 1.0);
        CHECK(m.at(0, 1) == -2.0);
        CHECK(m.at(0, 2) == 0.0);
        CHECK(m.at(1, 2) == 0.0);
        CHECK(m.at(1, 3) == 0.0);
        CHECK(m.at(1, 4) == 0.0);
    }
    SUBCASE("unit weights give plain concatenation in (closeness, degree, betweenness) order") {
        auto m = concat_features(emb, cent, 1.0, 1.0);
        CHECK(m.at(1, 2) == 1.0);  // closeness_norm
        CHECK(m.at(1, 3) == 1.0);  // degree_norm
        CHECK(m.at(1, 4) == 1.0);  // betweenness_norm
    }
    SUBCASE("doubling w_cent doubles exactly the last three components") {
        auto m1 = concat_features(emb, cent, 1.0, 1.0);
        auto m2 = concat_features(emb, cent, 1.0, 2.0);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t k = 0; k < 2; ++k) CHECK(m1.at(i, k) == m2.at(i, k));
            for (std::size_t k = 2; k < 5; ++k) CHECK(2.0 * m1.at(i, k) == m2.at(i, k));
        }
    }
    SUBCASE("lambda mix scales tail components individually") {
        CentralityMix mix{0.5, 0.25, 2.0};
        auto m = concat_features(emb, cent, 1.0, 1.0, mix);
        CHECK(m.at(1, 2) == 0.5);
        CHECK(m.at(1, 3) == 0.25);
        CHECK(m.at(1, 4) == 2.0);
    }
}

TEST_CASE("dimension 64 embeddings concat to 67-component rows") {
    EmbeddingTable emb;
    emb.vectors = FeatureMatrix(3, 64, 0.1);
    CentralityVector cent;
    for (auto* v : {&cent.degree, &cent.closeness, &cent.betweenness, &cent.degree_norm,
                    &cent.closeness_norm, &cent.betweenness_norm}) {
        v->assign(3, 0.5);
    }
    auto m = concat_features(emb, cent);
    CHECK(m.dimension() == 67);
}

TEST_CASE("concat rejects mismatched node sets") {
    EmbeddingTable emb;
    emb.vectors = FeatureMatrix(3, 4);
    CentralityVector cent;
    for (auto* v : {&cent.degree, &cent.closeness, &cent.betweenness, &cent.degree_norm,
                    &cent.closeness_norm, &cent.betweenness_norm}) {
        v->assign(2, 0.0);
    }
    CHECK_THROWS_AS(concat_features(emb, cent), ConfigError);
}

TEST_SUITE_END();
