#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cys/id_map.hpp"

namespace cys {

// Undirected simple graph on dense node indices. Adjacency lists are sorted
// and free of duplicates and self-loops; neighbor order is therefore a fixed
// function of the edge set, which the deterministic kernels rely on.
class SimpleGraph {
public:
    SimpleGraph() = default;
    explicit SimpleGraph(std::size_t n) : adj_(n) {}
    SimpleGraph(std::size_t n, const std::vector<std::pair<NodeIdx, NodeIdx>>& edges);

    std::size_t node_count() const { return adj_.size(); }
    std::size_t edge_count() const;

    void add_edge(NodeIdx u, NodeIdx v);
    void finalize();  // sort + dedup adjacency; must be called after add_edge

    const std::vector<NodeIdx>& neighbors(NodeIdx v) const {
        return adj_[static_cast<std::size_t>(v)];
    }
    std::size_t degree(NodeIdx v) const { return adj_[static_cast<std::size_t>(v)].size(); }
    bool has_edge(NodeIdx u, NodeIdx v) const;

    // Connected component id per node (BFS order, deterministic).
    std::vector<int> components() const;

private:
    std::vector<std::vector<NodeIdx>> adj_;
};

// Directed graph used by the consensus dynamics; out-neighbors only.
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(std::size_t n) : out_(n) {}

    std::size_t node_count() const { return out_.size(); }
    void add_edge(NodeIdx from, NodeIdx to);
    void finalize();

    const std::vector<NodeIdx>& out_neighbors(NodeIdx v) const {
        return out_[static_cast<std::size_t>(v)];
    }

    bool strongly_connected() const;
    // Undirected view (used when feeding centralities into weight building).
    SimpleGraph undirected() const;

private:
    std::vector<std::vector<NodeIdx>> out_;
};

}  // namespace cys
