#pragma once

#include <cstddef>
#include <vector>

#include "cys/id_map.hpp"

namespace cys {

struct SocialEdge {
    NodeIdx source = 0;
    NodeIdx target = 0;
    double weight = 1.0;
};

// Weighted user-user edge list (trust links). Self-loops are rejected at
// construction and counted so loaders can surface a warning.
class SocialGraph {
public:
    SocialGraph() = default;
    SocialGraph(IdMap nodes, std::vector<SocialEdge> edges, std::size_t self_loops_dropped = 0);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const IdMap& nodes() const { return nodes_; }
    const std::vector<SocialEdge>& edges() const { return edges_; }
    std::size_t self_loops_dropped() const { return self_loops_dropped_; }

    // Undirected adjacency over the edge set (direction ignored), sorted and
    // deduplicated per node.
    std::vector<std::vector<NodeIdx>> undirected_adjacency() const;

private:
    IdMap nodes_;
    std::vector<SocialEdge> edges_;
    std::size_t self_loops_dropped_ = 0;
};

}  // namespace cys
