#include <algorithm>
#include <queue>

#include "cys/error.hpp"
#include "cys/oracles.hpp"

namespace cys::oracle {

namespace {

std::vector<int> bfs_distances(const SimpleGraph& g, NodeIdx s) {
    std::vector<int> dist(g.node_count(), -1);
    std::queue<NodeIdx> q;
    dist[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
        auto v = q.front();
        q.pop();
        for (auto w : g.neighbors(v)) {
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                q.push(w);
            }
        }
    }
    return dist;
}

// Enumerate every shortest s->t path by walking the BFS distance field
// backwards from t; bump the interior-node counters along each path.
void enumerate_paths(const SimpleGraph& g, const std::vector<int>& dist, NodeIdx t,
                     std::vector<NodeIdx>& stack, std::vector<double>& through, double& count) {
    if (dist[static_cast<std::size_t>(t)] == 0) {
        count += 1.0;
        // stack holds the interior nodes walked so far (t excluded at the
        // top-level call, s has distance 0 and is never pushed)
        for (auto v : stack) through[static_cast<std::size_t>(v)] += 1.0;
        return;
    }
    for (auto w : g.neighbors(t)) {
        if (dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(t)] - 1) {
            if (dist[static_cast<std::size_t>(w)] != 0) stack.push_back(w);
            enumerate_paths(g, dist, w, stack, through, count);
            if (dist[static_cast<std::size_t>(w)] != 0) stack.pop_back();
        }
    }
}

std::vector<double> normalize_01(const std::vector<double>& xs) {
    std::vector<double> out(xs.size(), 0.0);
    if (xs.empty()) return out;
    double mn = xs[0], mx = xs[0];
    for (double x : xs) {
        mn = std::min(mn, x);
        mx = std::max(mx, x);
    }
    if (mx - mn <= 0.0) return out;
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - mn) / (mx - mn);
    return out;
}

}  // namespace

CentralityVector oracle_centrality(const SimpleGraph& g) {
    const std::size_t n = g.node_count();
    if (n > kClosenessCap) throw ConfigError("oracle_centrality: graph beyond the size cap");

    CentralityVector c;
    c.degree.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        c.degree[v] = static_cast<double>(g.neighbors(static_cast<NodeIdx>(v)).size());
    }

    c.closeness.assign(n, 0.0);
    std::vector<std::vector<int>> all_dist(n);
    for (std::size_t v = 0; v < n; ++v) {
        all_dist[v] = bfs_distances(g, static_cast<NodeIdx>(v));
        double sum = 0.0;
        for (int d : all_dist[v]) {
            if (d > 0) sum += d;
        }
        c.closeness[v] = sum > 0.0 ? 1.0 / sum : 0.0;
    }

    c.betweenness.assign(n, 0.0);
    if (n > kBetweennessCap) throw ConfigError("oracle_centrality: betweenness beyond the size cap");
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) {
            if (all_dist[s][t] <= 0) continue;  // unreachable or equal
            std::vector<NodeIdx> stack;
            std::vector<double> through(n, 0.0);
            double count = 0.0;
            enumerate_paths(g, all_dist[s], static_cast<NodeIdx>(t), stack, through, count);
            for (std::size_t v = 0; v < n; ++v) {
                if (v != s && v != t && count > 0.0) {
                    c.betweenness[v] += through[v] / count;
                }
            }
        }
    }

    c.degree_norm = normalize_01(c.degree);
    c.closeness_norm = normalize_01(c.closeness);
    c.betweenness_norm = normalize_01(c.betweenness);
    return c;
}

}  // namespace cys::oracle
