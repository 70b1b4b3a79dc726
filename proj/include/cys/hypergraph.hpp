#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cys/id_map.hpp"

namespace cys {

enum class HyperedgeKind { CoInteraction, CoPreference };

struct Hyperedge {
    std::vector<NodeIdx> members;  // sorted, unique, size >= 2
    HyperedgeKind kind = HyperedgeKind::CoInteraction;
    std::optional<NodeIdx> anchor_item;  // set iff kind == CoInteraction
};

// Node set plus typed hyperedges. Members are validated against the node set
// and every hyperedge has at least two members.
class Hypergraph {
public:
    Hypergraph() = default;
    Hypergraph(IdMap nodes, std::vector<Hyperedge> edges);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const IdMap& nodes() const { return nodes_; }
    const std::vector<Hyperedge>& edges() const { return edges_; }

    std::size_t count_kind(HyperedgeKind kind) const;

    // Number of hyperedges each node belongs to.
    std::vector<std::size_t> membership_degree() const;

private:
    IdMap nodes_;
    std::vector<Hyperedge> edges_;
};

class FeatureMatrix;
class InteractionStore;

// One hyperedge per item with >= 2 interacting users. When a window span is
// given (and the store is fully timestamped), only interactions with
// timestamp in [item_latest - window, item_latest] participate.
Hypergraph build_co_interaction(const InteractionStore& store,
                                std::optional<std::int64_t> window = std::nullopt);

struct CoPreferenceResult {
    Hypergraph hypergraph;
    std::vector<NodeIdx> zero_norm_nodes;  // excluded from similarity pairs
};

// Connected components of the gamma-thresholded pairwise-cosine graph;
// singleton components are dropped.
CoPreferenceResult build_co_preference(const IdMap& nodes, const FeatureMatrix& features,
                                       double gamma);

}  // namespace cys
