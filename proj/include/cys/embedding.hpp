#pragma once

#include <cstdint>
#include <vector>

#include "cys/centrality.hpp"
#include "cys/feature_matrix.hpp"
#include "cys/simple_graph.hpp"

namespace cys {

struct WalkParams {
    int length = 20;        // nodes per walk, w_0 .. w_{l-1}
    int per_node = 10;      // walks started at each node
    double return_p = 1.0;  // second-order return bias (1/p toward previous node)
    double in_out_q = 1.0;  // second-order exploration bias (1/q away)
    std::uint64_t seed = 0;
};

struct WalkCorpus {
    std::vector<std::vector<NodeIdx>> walks;
    WalkParams params;
    bool empty_graph = false;  // zero-edge input; corpus is empty

    std::size_t token_count() const {
        std::size_t n = 0;
        for (const auto& w : walks) n += w.size();
        return n;
    }
};

// k biased walks per non-isolated node. Walk (node, k) draws from its own
// seeded stream, so the parallel and serial generators emit identical
// corpora.
WalkCorpus generate_walks(const SimpleGraph& g, const WalkParams& params);
WalkCorpus generate_walks_serial(const SimpleGraph& g, const WalkParams& params);

struct SkipgramParams {
    std::size_t dim = 64;
    int window = 5;
    int negatives = 5;
    int epochs = 5;
    double learning_rate = 0.025;  // linearly decayed
    std::uint64_t seed = 0;
};

struct EmbeddingTable {
    FeatureMatrix vectors;  // one row per node
    SkipgramParams meta;
    std::vector<NodeIdx> absent_nodes;  // not in the corpus; rows left zero
};

// Skip-gram with negative sampling over the walk corpus. Single-writer
// training with a fixed example order: bitwise deterministic under a seed.
EmbeddingTable train_skipgram(const WalkCorpus& corpus, std::size_t node_count,
                              const SkipgramParams& params);

// Per-component scaling of the centrality tail (lambda mix); the tail order
// is (closeness, degree, betweenness).
struct CentralityMix {
    double closeness = 1.0;
    double degree = 1.0;
    double betweenness = 1.0;
};

// M_i = [w_emb * embedding_i || w_cent * mix * (closeness, degree,
// betweenness)_normalized]; dimension d+3.
FeatureMatrix concat_features(const EmbeddingTable& emb, const CentralityVector& cent,
                              double w_emb = 1.0, double w_cent = 1.0,
                              const CentralityMix& mix = {});

}  // namespace cys
