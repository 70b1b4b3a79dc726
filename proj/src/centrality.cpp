#include "cys/centrality.hpp"

#include <algorithm>
#include <cstdint>

#include "cys/parallel.hpp"

namespace cys {

SimpleGraph project_hypergraph(const Hypergraph& h) {
    SimpleGraph g(h.node_count());
    for (const auto& e : h.edges()) {
        for (std::size_t a = 0; a < e.members.size(); ++a) {
            for (std::size_t b = a + 1; b < e.members.size(); ++b) {
                g.add_edge(e.members[a], e.members[b]);
            }
        }
    }
    g.finalize();
    return g;
}

std::vector<double> degree_centrality(const SimpleGraph& g) {
    std::vector<double> d(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        d[v] = static_cast<double>(g.degree(static_cast<NodeIdx>(v)));
    }
    return d;
}

namespace {

// Distance sum from `s` to every node it reaches (plain BFS).
double bfs_distance_sum(const SimpleGraph& g, NodeIdx s, std::vector<std::int32_t>& dist,
                        std::vector<NodeIdx>& queue) {
    dist.assign(g.node_count(), -1);
    queue.clear();
    dist[static_cast<std::size_t>(s)] = 0;
    queue.push_back(s);
    double sum = 0.0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeIdx v = queue[head];
        for (NodeIdx w : g.neighbors(v)) {
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                sum += dist[static_cast<std::size_t>(w)];
                queue.push_back(w);
            }
        }
    }
    return sum;
}

// One Brandes pass: shortest-path counts forward, dependency accumulation
// backward into delta_out (length n, zero-filled here).
void brandes_pass(const SimpleGraph& g, NodeIdx s, std::vector<double>& sigma,
                  std::vector<std::int32_t>& dist, std::vector<NodeIdx>& order,
                  double* delta_out) {
    const std::size_t n = g.node_count();
    sigma.assign(n, 0.0);
    dist.assign(n, -1);
    std::fill(delta_out, delta_out + n, 0.0);
    order.clear();

    sigma[static_cast<std::size_t>(s)] = 1.0;
    dist[static_cast<std::size_t>(s)] = 0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
        NodeIdx v = order[head];
        auto vi = static_cast<std::size_t>(v);
        for (NodeIdx w : g.neighbors(v)) {
            auto wi = static_cast<std::size_t>(w);
            if (dist[wi] < 0) {
                dist[wi] = dist[vi] + 1;
                order.push_back(w);
            }
            if (dist[wi] == dist[vi] + 1) sigma[wi] += sigma[vi];
        }
    }

    for (std::size_t k = order.size(); k-- > 1;) {
        NodeIdx w = order[k];
        auto wi = static_cast<std::size_t>(w);
        for (NodeIdx v : g.neighbors(w)) {
            auto vi = static_cast<std::size_t>(v);
            if (dist[vi] + 1 == dist[wi]) {
                delta_out[vi] += sigma[vi] / sigma[wi] * (1.0 + delta_out[wi]);
            }
        }
    }
}

}  // namespace

std::vector<double> closeness_centrality_serial(const SimpleGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> closeness(n, 0.0);
    std::vector<std::int32_t> dist;
    std::vector<NodeIdx> queue;
    queue.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
        double sum = bfs_distance_sum(g, static_cast<NodeIdx>(v), dist, queue);
        closeness[v] = sum > 0.0 ? 1.0 / sum : 0.0;
    }
    return closeness;
}

std::vector<double> closeness_centrality(const SimpleGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> closeness(n, 0.0);
    parallel_for(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t v) {
        thread_local std::vector<std::int32_t> dist;
        thread_local std::vector<NodeIdx> queue;
        double sum = bfs_distance_sum(g, static_cast<NodeIdx>(v), dist, queue);
        closeness[static_cast<std::size_t>(v)] = sum > 0.0 ? 1.0 / sum : 0.0;
    });
    return closeness;
}

std::vector<double> betweenness_centrality_serial(const SimpleGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> acc(n, 0.0);
    std::vector<double> sigma;
    std::vector<double> delta(n);
    std::vector<std::int32_t> dist;
    std::vector<NodeIdx> order;
    order.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        brandes_pass(g, static_cast<NodeIdx>(s), sigma, dist, order, delta.data());
        for (std::size_t v = 0; v < n; ++v) {
            if (v != s) acc[v] += delta[v];
        }
    }
    for (auto& x : acc) x *= 0.5;  // unordered-pair convention
    return acc;
}

std::vector<double> betweenness_centrality(const SimpleGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> acc(n, 0.0);
    if (n == 0) return acc;

    // Sources run in fixed-size blocks; each source writes its own dependency
    // row and rows are folded serially in source order, so the floating-point
    // sums match the serial twin for every worker count.
    constexpr std::size_t kBlock = 64;
    std::vector<double> block_delta(std::min(kBlock, n) * n);
    for (std::size_t base = 0; base < n; base += kBlock) {
        const std::size_t count = std::min(kBlock, n - base);
        parallel_for(static_cast<std::ptrdiff_t>(count), [&](std::ptrdiff_t k) {
            thread_local std::vector<double> sigma;
            thread_local std::vector<std::int32_t> dist;
            thread_local std::vector<NodeIdx> order;
            brandes_pass(g, static_cast<NodeIdx>(base + static_cast<std::size_t>(k)), sigma, dist,
                         order, block_delta.data() + static_cast<std::size_t>(k) * n);
        });
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t s = base + k;
            const double* row = block_delta.data() + k * n;
            for (std::size_t v = 0; v < n; ++v) {
                if (v != s) acc[v] += row[v];
            }
        }
    }
    for (auto& x : acc) x *= 0.5;
    return acc;
}

std::vector<double> min_max_normalize(const std::vector<double>& xs) {
    std::vector<double> out(xs.size(), 0.0);
    if (xs.empty()) return out;
    auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    double span = *mx - *mn;
    if (span <= 0.0) return out;
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - *mn) / span;
    return out;
}

CentralityVector compute_centralities(const SimpleGraph& g) {
    CentralityVector c;
    c.degree = degree_centrality(g);
    c.closeness = closeness_centrality(g);
    c.betweenness = betweenness_centrality(g);
    c.degree_norm = min_max_normalize(c.degree);
    c.closeness_norm = min_max_normalize(c.closeness);
    c.betweenness_norm = min_max_normalize(c.betweenness);
    return c;
}

}  // namespace cys
