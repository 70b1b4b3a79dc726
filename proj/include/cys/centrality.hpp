#pragma once

#include <vector>

#include "cys/hypergraph.hpp"
#include "cys/simple_graph.hpp"

namespace cys {

// Degree, closeness, betweenness per node, raw plus min-max normalized.
// Closeness restricts the distance sum to the node's connected component;
// a node that reaches no one scores 0. Betweenness uses the unordered-pair
// convention.
struct CentralityVector {
    std::vector<double> degree;
    std::vector<double> closeness;
    std::vector<double> betweenness;
    std::vector<double> degree_norm;
    std::vector<double> closeness_norm;
    std::vector<double> betweenness_norm;

    std::size_t node_count() const { return degree.size(); }
};

// Clique expansion: two nodes are adjacent iff they share a hyperedge.
SimpleGraph project_hypergraph(const Hypergraph& h);

std::vector<double> degree_centrality(const SimpleGraph& g);

// OpenMP kernels (deterministic for any worker count) and their serial twins.
std::vector<double> closeness_centrality(const SimpleGraph& g);
std::vector<double> closeness_centrality_serial(const SimpleGraph& g);
std::vector<double> betweenness_centrality(const SimpleGraph& g);
std::vector<double> betweenness_centrality_serial(const SimpleGraph& g);

// min-max to [0,1]; a constant vector maps to all zeros.
std::vector<double> min_max_normalize(const std::vector<double>& xs);

CentralityVector compute_centralities(const SimpleGraph& g);

}  // namespace cys
