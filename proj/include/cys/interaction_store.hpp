#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cys/id_map.hpp"

namespace cys {

inline constexpr double kRatingMin = 0.0;
inline constexpr double kRatingMax = 5.0;

struct Interaction {
    NodeIdx user = 0;
    NodeIdx item = 0;
    double rating = 0.0;
    std::optional<std::int64_t> timestamp;
};

enum class DedupRule { KeepLast, KeepMax };

// Sparse user x item rating matrix. Entries are kept sorted by (user, item);
// at most one entry per pair survives ingestion. Immutable after build.
class InteractionStore {
public:
    InteractionStore() = default;
    InteractionStore(IdMap users, IdMap items, std::vector<Interaction> entries,
                     DedupRule rule = DedupRule::KeepMax);

    std::size_t user_count() const { return users_.size(); }
    std::size_t item_count() const { return items_.size(); }
    std::size_t entry_count() const { return entries_.size(); }

    const IdMap& users() const { return users_; }
    const IdMap& items() const { return items_; }
    const std::vector<Interaction>& entries() const { return entries_; }

    // Entries of one user, ordered by item index.
    std::span<const Interaction> user_entries(NodeIdx user) const;

    std::optional<double> rating(NodeIdx user, NodeIdx item) const;
    bool has_rated(NodeIdx user, NodeIdx item) const { return rating(user, item).has_value(); }

    // True when every entry carries a timestamp (required for time windows
    // and the by-time split).
    bool fully_timestamped() const { return fully_timestamped_; }

    std::size_t duplicates_removed() const { return duplicates_removed_; }

    // Rebuild with a reduced entry list, dropping users/items that no longer
    // appear.
    struct Filtered;
    Filtered filter_entries(const std::vector<bool>& keep_entry) const;

private:
    void index_entries();

    IdMap users_;
    IdMap items_;
    std::vector<Interaction> entries_;
    std::vector<std::uint32_t> user_begin_;  // size user_count()+1
    bool fully_timestamped_ = false;
    std::size_t duplicates_removed_ = 0;
};

struct InteractionStore::Filtered {
    InteractionStore store;
    std::vector<NodeIdx> user_old_to_new;  // -1 where dropped
    std::vector<NodeIdx> item_old_to_new;
};

}  // namespace cys
