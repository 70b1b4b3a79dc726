#pragma once

#include <filesystem>
#include <string>

#include "cys/feature_matrix.hpp"
#include "cys/id_map.hpp"
#include "cys/interaction_store.hpp"
#include "cys/social_graph.hpp"

namespace cys {

// Ratings file: UTF-8, one interaction per line, whitespace separated:
//   user item rating [timestamp]
// Lines starting with '#' and blank lines are ignored.
InteractionStore load_interactions(const std::filesystem::path& path,
                                   DedupRule rule = DedupRule::KeepMax);

// Trust file: `source target [weight]`, weight defaults to 1.0. Self-loops
// are dropped (counted in SocialGraph::self_loops_dropped). When `users` is
// given, its ids come first so indices align with an InteractionStore.
SocialGraph load_social(const std::filesystem::path& path, const IdMap* users = nullptr);

// Embedding text format: `node v1 v2 ... vd` per line.
void save_features(const std::filesystem::path& path, const IdMap& nodes,
                   const FeatureMatrix& features);
std::pair<IdMap, FeatureMatrix> load_features(const std::filesystem::path& path);

void save_interactions(const std::filesystem::path& path, const InteractionStore& store);

// Node-id mapping sidecar (`index name` per line).
void save_id_map(const std::filesystem::path& path, const IdMap& ids);

}  // namespace cys
