#include "cys/recommender.hpp"

#include <algorithm>
#include <cmath>

#include "cys/error.hpp"
#include "cys/parallel.hpp"

namespace cys {

SimilarityMetric parse_metric(const std::string& name) {
    if (name == "euclidean") return SimilarityMetric::Euclidean;
    if (name == "jaccard") return SimilarityMetric::Jaccard;
    if (name == "cosine") return SimilarityMetric::Cosine;
    throw ConfigError("unknown similarity metric: " + name);
}

std::string metric_name(SimilarityMetric m) {
    switch (m) {
        case SimilarityMetric::Euclidean: return "euclidean";
        case SimilarityMetric::Jaccard: return "jaccard";
        case SimilarityMetric::Cosine: return "cosine";
    }
    return "?";
}

double vector_similarity(std::span<const double> x, std::span<const double> y,
                         SimilarityMetric metric) {
    if (x.size() != y.size()) throw ConfigError("similarity of vectors with different dimensions");
    switch (metric) {
        case SimilarityMetric::Euclidean: {
            double d2 = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                double d = x[k] - y[k];
                d2 += d * d;
            }
            return 1.0 / (1.0 + std::sqrt(d2));
        }
        case SimilarityMetric::Cosine: {
            double dot = 0.0, nx = 0.0, ny = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                dot += x[k] * y[k];
                nx += x[k] * x[k];
                ny += y[k] * y[k];
            }
            if (nx == 0.0 || ny == 0.0) {
                throw NumericError("cosine similarity undefined for a zero vector");
            }
            return dot / (std::sqrt(nx) * std::sqrt(ny));
        }
        case SimilarityMetric::Jaccard:
            throw ConfigError("jaccard similarity operates on sets, not vectors");
    }
    throw ConfigError("unreachable similarity metric");
}

double jaccard_similarity(const std::vector<NodeIdx>& a, const std::vector<NodeIdx>& b) {
    if (a.empty() && b.empty()) {
        throw NumericError("jaccard similarity undefined for two empty sets");
    }
    std::size_t inter = 0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] == b[ib]) {
            ++inter;
            ++ia;
            ++ib;
        } else if (a[ia] < b[ib]) {
            ++ia;
        } else {
            ++ib;
        }
    }
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

std::vector<NodeIdx> rated_items(const InteractionStore& store, NodeIdx u) {
    std::vector<NodeIdx> items;
    for (const auto& e : store.user_entries(u)) items.push_back(e.item);
    return items;  // already sorted by item
}

std::vector<NodeIdx> nonzero_features(const FeatureMatrix& f, NodeIdx u) {
    std::vector<NodeIdx> idx;
    auto row = f.row(static_cast<std::size_t>(u));
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k] != 0.0) idx.push_back(static_cast<NodeIdx>(k));
    }
    return idx;
}

}  // namespace

std::vector<Neighbor> neighbors(NodeIdx u, const FeatureMatrix& features,
                                const InteractionStore& store, const SimilarityConfig& cfg,
                                bool* all_undefined) {
    if (cfg.neighborhood < 1) throw ConfigError("neighborhood size must be >= 1");
    const auto n = static_cast<NodeIdx>(store.user_count());
    if (u < 0 || u >= n) throw ConfigError("unknown user index");
    const bool needs_features =
        cfg.metric != SimilarityMetric::Jaccard || cfg.basis == JaccardBasis::NonzeroFeatures;
    if (needs_features && features.row_count() != store.user_count()) {
        throw ConfigError("feature rows do not match the store's user count");
    }

    std::vector<Neighbor> candidates;
    candidates.reserve(static_cast<std::size_t>(n) - 1);
    bool any_defined = false;

    std::vector<NodeIdx> u_set;
    if (cfg.metric == SimilarityMetric::Jaccard) {
        u_set = cfg.basis == JaccardBasis::ItemSets ? rated_items(store, u)
                                                    : nonzero_features(features, u);
    }

    for (NodeIdx v = 0; v < n; ++v) {
        if (v == u) continue;
        double sim;
        try {
            if (cfg.metric == SimilarityMetric::Jaccard) {
                auto v_set = cfg.basis == JaccardBasis::ItemSets ? rated_items(store, v)
                                                                 : nonzero_features(features, v);
                sim = jaccard_similarity(u_set, v_set);
            } else {
                sim = vector_similarity(features.row(static_cast<std::size_t>(u)),
                                        features.row(static_cast<std::size_t>(v)), cfg.metric);
            }
        } catch (const NumericError&) {
            continue;  // undefined pair; skipped
        }
        any_defined = true;
        candidates.push_back({v, sim});
    }

    if (all_undefined) *all_undefined = !any_defined;

    std::sort(candidates.begin(), candidates.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.user < b.user;
    });
    if (candidates.size() > cfg.neighborhood) candidates.resize(cfg.neighborhood);
    return candidates;
}

std::vector<double> score_candidates(const std::vector<Neighbor>& nbrs,
                                     const InteractionStore& store, double rating_floor,
                                     const std::vector<NodeIdx>& candidates) {
    std::vector<double> scores(candidates.size(), 0.0);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (candidates[c] < 0) continue;  // item absent from this store
        double s = 0.0;
        for (const auto& nb : nbrs) {
            auto r = store.rating(nb.user, candidates[c]);
            if (r && *r >= rating_floor) s += nb.similarity * *r;
        }
        scores[c] = s;
    }
    return scores;
}

std::vector<ScoredItem> score_user(NodeIdx u, const std::vector<Neighbor>& nbrs,
                                   const InteractionStore& store, double rating_floor) {
    // Accumulate over neighbor entries: cheaper than probing every item.
    std::vector<double> acc(store.item_count(), 0.0);
    for (const auto& nb : nbrs) {
        for (const auto& e : store.user_entries(nb.user)) {
            if (e.rating >= rating_floor) acc[static_cast<std::size_t>(e.item)] += nb.similarity * e.rating;
        }
    }
    std::vector<ScoredItem> out;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        if (acc[i] == 0.0) continue;
        if (store.has_rated(u, static_cast<NodeIdx>(i))) continue;  // training items excluded
        out.push_back({static_cast<NodeIdx>(i), acc[i]});
    }
    return out;
}

std::vector<ScoredItem> top_k(std::vector<ScoredItem> scores, std::size_t k) {
    if (k < 1) throw ConfigError("top-k requires k >= 1");
    std::sort(scores.begin(), scores.end(), [](const ScoredItem& a, const ScoredItem& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.item < b.item;
    });
    if (scores.size() > k) scores.resize(k);
    return scores;
}

namespace {

Recommendations recommend_impl(const FeatureMatrix& features, const InteractionStore& store,
                               const SimilarityConfig& cfg, double rating_floor, std::size_t k,
                               bool parallel) {
    const std::size_t n = store.user_count();
    Recommendations rec;
    rec.top_items.resize(n);
    rec.neighbor_lists.resize(n);
    std::vector<std::uint8_t> empty_flags(n, 0);

    auto run_user = [&](std::size_t u) {
        bool undefined = false;
        auto nbrs = neighbors(static_cast<NodeIdx>(u), features, store, cfg, &undefined);
        if (undefined) empty_flags[u] = 1;
        rec.top_items[u] = top_k(score_user(static_cast<NodeIdx>(u), nbrs, store, rating_floor), k);
        rec.neighbor_lists[u] = std::move(nbrs);
    };

    if (parallel) {
        parallel_for(static_cast<std::ptrdiff_t>(n),
                     [&](std::ptrdiff_t u) { run_user(static_cast<std::size_t>(u)); });
    } else {
        for (std::size_t u = 0; u < n; ++u) run_user(u);
    }
    for (auto f : empty_flags) rec.users_without_neighbors += f;
    return rec;
}

}  // namespace

Recommendations recommend_all(const FeatureMatrix& features, const InteractionStore& store,
                              const SimilarityConfig& cfg, double rating_floor, std::size_t k) {
    return recommend_impl(features, store, cfg, rating_floor, k, true);
}

Recommendations recommend_all_serial(const FeatureMatrix& features, const InteractionStore& store,
                                     const SimilarityConfig& cfg, double rating_floor,
                                     std::size_t k) {
    return recommend_impl(features, store, cfg, rating_floor, k, false);
}

}  // namespace cys
