// Timing comparison between the OpenMP kernels and their serial twins:
// closeness/betweenness centrality, walk generation, propagation layers,
// per-user recommendation scoring, and the dense consensus mat-vec. The
// kernels are written to produce identical numbers either way, so the table
// also asserts equality while it measures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cys/centrality.hpp"
#include "cys/dynamics.hpp"
#include "cys/embedding.hpp"
#include "cys/parallel.hpp"
#include "cys/propagation.hpp"
#include "cys/recommender.hpp"
#include "cys/rng.hpp"

using namespace cys;

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double time_of(Fn&& fn) {
    auto t0 = Clock::now();
    fn();
    auto t1 = Clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

SimpleGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
    SimpleGraph g(n);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng.next_double() < p) {
                g.add_edge(static_cast<NodeIdx>(i), static_cast<NodeIdx>(j));
            }
        }
    }
    g.finalize();
    return g;
}

bool nearly_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return false;
    }
    return true;
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-22s %10.4fs %10.4fs %8.2fx   %s\n", name, serial, parallel,
                serial / (parallel > 0 ? parallel : 1e-12), identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n = argc > 1 ? std::stoul(argv[1]) : 1200;
    std::printf("openmp workers: %d (serial column pins 1)\n", workers());
    std::printf("%-22s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    auto g = random_graph(n, 6.0 / static_cast<double>(n), 42);

    {
        std::vector<double> ser, par;
        double ts = time_of([&] { ser = closeness_centrality_serial(g); });
        double tp = time_of([&] { par = closeness_centrality(g); });
        report("closeness", ts, tp, nearly_equal(ser, par));
    }
    {
        std::vector<double> ser, par;
        double ts = time_of([&] { ser = betweenness_centrality_serial(g); });
        double tp = time_of([&] { par = betweenness_centrality(g); });
        report("betweenness", ts, tp, nearly_equal(ser, par));
    }
    {
        WalkParams wp;
        wp.length = 40;
        wp.per_node = 10;
        wp.seed = 7;
        WalkCorpus ser, par;
        double ts = time_of([&] { ser = generate_walks_serial(g, wp); });
        double tp = time_of([&] { par = generate_walks(g, wp); });
        report("walks", ts, tp, ser.walks == par.walks);
    }
    {
        FeatureMatrix h(g.node_count(), 64);
        Rng rng(3);
        for (auto& v : h.data()) v = rng.next_double();
        PropagationConfig cfg;
        cfg.layers = 4;
        cfg.seed = 11;
        std::vector<LayerState> ser, par;
        double ts = time_of([&] { ser = propagate_serial(h, g, cfg); });
        double tp = time_of([&] { par = propagate(h, g, cfg); });
        report("propagation", ts, tp,
               ser.back().features.data() == par.back().features.data());
    }
    {
        // synthetic store: every node rates ~20 random items
        IdMap users, items;
        std::vector<Interaction> entries;
        Rng rng(5);
        for (std::size_t u = 0; u < g.node_count(); ++u) {
            users.intern("u" + std::to_string(u));
        }
        std::size_t n_items = g.node_count() / 2 + 10;
        for (std::size_t i = 0; i < n_items; ++i) items.intern("i" + std::to_string(i));
        for (std::size_t u = 0; u < g.node_count(); ++u) {
            for (int k = 0; k < 20; ++k) {
                Interaction e;
                e.user = static_cast<NodeIdx>(u);
                e.item = static_cast<NodeIdx>(rng.next_below(n_items));
                e.rating = 1.0 + static_cast<double>(rng.next_below(5));
                entries.push_back(e);
            }
        }
        InteractionStore store(std::move(users), std::move(items), std::move(entries));
        FeatureMatrix f(store.user_count(), 32);
        for (auto& v : f.data()) v = rng.next_double();
        SimilarityConfig sim;
        sim.neighborhood = 30;
        Recommendations ser, par;
        double ts = time_of([&] { ser = recommend_all_serial(f, store, sim, 1.0, 10); });
        double tp = time_of([&] { par = recommend_all(f, store, sim, 1.0, 10); });
        bool same = ser.top_items.size() == par.top_items.size();
        for (std::size_t u = 0; same && u < ser.top_items.size(); ++u) {
            same = ser.top_items[u].size() == par.top_items[u].size();
            for (std::size_t k = 0; same && k < ser.top_items[u].size(); ++k) {
                same = ser.top_items[u][k].item == par.top_items[u][k].item &&
                       ser.top_items[u][k].score == par.top_items[u][k].score;
            }
        }
        report("recommendation", ts, tp, same);
    }
    {
        const std::size_t m = std::min<std::size_t>(n, 2000);
        PropagationMatrix w(m, 0.5);
        Rng rng(9);
        for (std::size_t i = 0; i < m; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                w.at(i, j) = rng.next_double();
                sum += w.at(i, j);
            }
            for (std::size_t j = 0; j < m; ++j) w.at(i, j) /= sum;
        }
        std::vector<double> p(m);
        for (auto& v : p) v = rng.next_double();
        std::vector<double> ser, par;
        double ts = time_of([&] {
            for (int r = 0; r < 50; ++r) ser = mat_vec_serial(w, p);
        });
        double tp = time_of([&] {
            for (int r = 0; r < 50; ++r) par = mat_vec(w, p);
        });
        report("consensus mat-vec x50", ts, tp, nearly_equal(ser, par));
    }
    return 0;
}
