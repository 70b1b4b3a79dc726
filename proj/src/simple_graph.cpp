#include "cys/simple_graph.hpp"

#include <algorithm>
#include <queue>

#include "cys/error.hpp"

namespace cys {

SimpleGraph::SimpleGraph(std::size_t n, const std::vector<std::pair<NodeIdx, NodeIdx>>& edges)
    : adj_(n) {
    for (auto [u, v] : edges) add_edge(u, v);
    finalize();
}

void SimpleGraph::add_edge(NodeIdx u, NodeIdx v) {
    if (u == v) return;
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= adj_.size() ||
        static_cast<std::size_t>(v) >= adj_.size()) {
        throw RangeError("edge endpoint outside node range");
    }
    adj_[static_cast<std::size_t>(u)].push_back(v);
    adj_[static_cast<std::size_t>(v)].push_back(u);
}

void SimpleGraph::finalize() {
    for (auto& nbrs : adj_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
}

std::size_t SimpleGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& nbrs : adj_) twice += nbrs.size();
    return twice / 2;
}

bool SimpleGraph::has_edge(NodeIdx u, NodeIdx v) const {
    const auto& nbrs = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<int> SimpleGraph::components() const {
    std::vector<int> comp(adj_.size(), -1);
    int next = 0;
    std::queue<NodeIdx> q;
    for (std::size_t s = 0; s < adj_.size(); ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        q.push(static_cast<NodeIdx>(s));
        while (!q.empty()) {
            auto v = q.front();
            q.pop();
            for (auto w : adj_[static_cast<std::size_t>(v)]) {
                if (comp[static_cast<std::size_t>(w)] < 0) {
                    comp[static_cast<std::size_t>(w)] = next;
                    q.push(w);
                }
            }
        }
        ++next;
    }
    return comp;
}

void Digraph::add_edge(NodeIdx from, NodeIdx to) {
    if (from < 0 || to < 0 || static_cast<std::size_t>(from) >= out_.size() ||
        static_cast<std::size_t>(to) >= out_.size()) {
        throw RangeError("edge endpoint outside node range");
    }
    if (from == to) return;
    out_[static_cast<std::size_t>(from)].push_back(to);
}

void Digraph::finalize() {
    for (auto& nbrs : out_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
}

namespace {

std::vector<bool> reachable_from(const std::vector<std::vector<NodeIdx>>& adj, NodeIdx s) {
    std::vector<bool> seen(adj.size(), false);
    std::queue<NodeIdx> q;
    seen[static_cast<std::size_t>(s)] = true;
    q.push(s);
    while (!q.empty()) {
        auto v = q.front();
        q.pop();
        for (auto w : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                q.push(w);
            }
        }
    }
    return seen;
}

}  // namespace

bool Digraph::strongly_connected() const {
    if (out_.empty()) return true;
    auto fwd = reachable_from(out_, 0);
    for (bool b : fwd) {
        if (!b) return false;
    }
    std::vector<std::vector<NodeIdx>> rev(out_.size());
    for (std::size_t v = 0; v < out_.size(); ++v) {
        for (auto w : out_[v]) rev[static_cast<std::size_t>(w)].push_back(static_cast<NodeIdx>(v));
    }
    auto bwd = reachable_from(rev, 0);
    for (bool b : bwd) {
        if (!b) return false;
    }
    return true;
}

SimpleGraph Digraph::undirected() const {
    SimpleGraph g(out_.size());
    for (std::size_t v = 0; v < out_.size(); ++v) {
        for (auto w : out_[v]) g.add_edge(static_cast<NodeIdx>(v), w);
    }
    g.finalize();
    return g;
}

}  // namespace cys
