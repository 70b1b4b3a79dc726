#include "cys/social_graph.hpp"

#include <algorithm>
#include <cmath>

#include "cys/error.hpp"

namespace cys {

SocialGraph::SocialGraph(IdMap nodes, std::vector<SocialEdge> edges, std::size_t self_loops_dropped)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), self_loops_dropped_(self_loops_dropped) {
    for (const auto& e : edges_) {
        if (e.source < 0 || static_cast<std::size_t>(e.source) >= nodes_.size() || e.target < 0 ||
            static_cast<std::size_t>(e.target) >= nodes_.size()) {
            throw RangeError("social edge references an unknown node index");
        }
        if (e.source == e.target) {
            throw RangeError("social edge is a self-loop; drop before construction");
        }
        if (!std::isfinite(e.weight) || e.weight < 0.0 || e.weight > 1.0) {
            throw RangeError("social edge weight outside [0,1]");
        }
    }
}

std::vector<std::vector<NodeIdx>> SocialGraph::undirected_adjacency() const {
    std::vector<std::vector<NodeIdx>> adj(nodes_.size());
    for (const auto& e : edges_) {
        adj[static_cast<std::size_t>(e.source)].push_back(e.target);
        adj[static_cast<std::size_t>(e.target)].push_back(e.source);
    }
    for (auto& nbrs : adj) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return adj;
}

}  // namespace cys
