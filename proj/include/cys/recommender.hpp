#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cys/feature_matrix.hpp"
#include "cys/interaction_store.hpp"

namespace cys {

enum class SimilarityMetric { Euclidean, Jaccard, Cosine };
enum class JaccardBasis { ItemSets, NonzeroFeatures };

struct SimilarityConfig {
    SimilarityMetric metric = SimilarityMetric::Cosine;
    std::size_t neighborhood = 50;  // M
    JaccardBasis basis = JaccardBasis::ItemSets;
};

SimilarityMetric parse_metric(const std::string& name);
std::string metric_name(SimilarityMetric m);

// Euclidean distance mapped to a similarity via 1/(1+d); cosine in [-1,1].
// Cosine of a zero vector is undefined and throws.
double vector_similarity(std::span<const double> x, std::span<const double> y,
                         SimilarityMetric metric);

// |intersection| / |union| over sorted id sets; both-empty is undefined.
double jaccard_similarity(const std::vector<NodeIdx>& a, const std::vector<NodeIdx>& b);

struct Neighbor {
    NodeIdx user = 0;
    double similarity = 0.0;
};

// Top-M peers of `u` by similarity, excluding u; ties break toward the lower
// user index. Peers with undefined similarity are skipped; when every peer
// is undefined the list is empty and *all_undefined is set.
std::vector<Neighbor> neighbors(NodeIdx u, const FeatureMatrix& features,
                                const InteractionStore& store, const SimilarityConfig& cfg,
                                bool* all_undefined = nullptr);

struct ScoredItem {
    NodeIdx item = 0;
    double score = 0.0;
};

// Score of each candidate item: sum over neighbors of similarity * rating,
// ratings below `rating_floor` contributing zero.
std::vector<double> score_candidates(const std::vector<Neighbor>& nbrs,
                                     const InteractionStore& store, double rating_floor,
                                     const std::vector<NodeIdx>& candidates);

// All positively scored items for `u`, excluding items u already rated.
std::vector<ScoredItem> score_user(NodeIdx u, const std::vector<Neighbor>& nbrs,
                                   const InteractionStore& store, double rating_floor);

// K highest scores, descending; ties toward the lower item index.
std::vector<ScoredItem> top_k(std::vector<ScoredItem> scores, std::size_t k);

struct Recommendations {
    // Per user: ranked items with scores, plus the neighbor lists used.
    std::vector<std::vector<ScoredItem>> top_items;
    std::vector<std::vector<Neighbor>> neighbor_lists;
    std::size_t users_without_neighbors = 0;
};

// Per-user pipeline (neighbors -> score -> top-K) across the whole store;
// parallel over users with a serial twin.
Recommendations recommend_all(const FeatureMatrix& features, const InteractionStore& store,
                              const SimilarityConfig& cfg, double rating_floor, std::size_t k);
Recommendations recommend_all_serial(const FeatureMatrix& features, const InteractionStore& store,
                                     const SimilarityConfig& cfg, double rating_floor,
                                     std::size_t k);

}  // namespace cys
