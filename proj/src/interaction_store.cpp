#include "cys/interaction_store.hpp"

#include <algorithm>
#include <unordered_map>

#include "cys/error.hpp"

namespace cys {

InteractionStore::InteractionStore(IdMap users, IdMap items, std::vector<Interaction> entries,
                                   DedupRule rule)
    : users_(std::move(users)), items_(std::move(items)), entries_(std::move(entries)) {
    for (const auto& e : entries_) {
        if (e.user < 0 || static_cast<std::size_t>(e.user) >= users_.size() || e.item < 0 ||
            static_cast<std::size_t>(e.item) >= items_.size()) {
            throw RangeError("interaction references an unknown user or item index");
        }
        if (!(e.rating >= kRatingMin && e.rating <= kRatingMax)) {
            throw RangeError("rating outside [0,5]");
        }
    }

    // Stable sort keeps file order within a (user, item) group so KeepLast is
    // well defined.
    std::stable_sort(entries_.begin(), entries_.end(), [](const Interaction& a, const Interaction& b) {
        if (a.user != b.user) return a.user < b.user;
        return a.item < b.item;
    });

    std::vector<Interaction> dedup;
    dedup.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size();) {
        std::size_t j = i + 1;
        while (j < entries_.size() && entries_[j].user == entries_[i].user &&
               entries_[j].item == entries_[i].item) {
            ++j;
        }
        std::size_t pick = j - 1;  // KeepLast: last occurrence in file order
        if (rule == DedupRule::KeepMax) {
            for (std::size_t k = i; k < j; ++k) {
                // ties resolved toward the later occurrence
                if (entries_[k].rating >= entries_[pick].rating) pick = k;
            }
        }
        dedup.push_back(entries_[pick]);
        duplicates_removed_ += (j - i) - 1;
        i = j;
    }
    entries_ = std::move(dedup);
    index_entries();
}

void InteractionStore::index_entries() {
    user_begin_.assign(users_.size() + 1, 0);
    for (const auto& e : entries_) user_begin_[static_cast<std::size_t>(e.user) + 1]++;
    for (std::size_t u = 1; u < user_begin_.size(); ++u) user_begin_[u] += user_begin_[u - 1];
    fully_timestamped_ = !entries_.empty();
    for (const auto& e : entries_) {
        if (!e.timestamp) {
            fully_timestamped_ = false;
            break;
        }
    }
}

std::span<const Interaction> InteractionStore::user_entries(NodeIdx user) const {
    if (user < 0 || static_cast<std::size_t>(user) >= users_.size()) return {};
    auto b = user_begin_[static_cast<std::size_t>(user)];
    auto e = user_begin_[static_cast<std::size_t>(user) + 1];
    return {entries_.data() + b, entries_.data() + e};
}

std::optional<double> InteractionStore::rating(NodeIdx user, NodeIdx item) const {
    auto span = user_entries(user);
    auto it = std::lower_bound(span.begin(), span.end(), item,
                               [](const Interaction& e, NodeIdx i) { return e.item < i; });
    if (it != span.end() && it->item == item) return it->rating;
    return std::nullopt;
}

InteractionStore::Filtered InteractionStore::filter_entries(const std::vector<bool>& keep_entry) const {
    if (keep_entry.size() != entries_.size()) {
        throw RangeError("keep mask size does not match entry count");
    }
    std::vector<NodeIdx> user_map(users_.size(), -1);
    std::vector<NodeIdx> item_map(items_.size(), -1);

    IdMap new_users;
    IdMap new_items;
    std::vector<Interaction> kept;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!keep_entry[i]) continue;
        const auto& e = entries_[i];
        auto& u = user_map[static_cast<std::size_t>(e.user)];
        if (u < 0) u = new_users.intern(users_.name(e.user));
        auto& it = item_map[static_cast<std::size_t>(e.item)];
        if (it < 0) it = new_items.intern(items_.name(e.item));
        Interaction ne = e;
        ne.user = u;
        ne.item = it;
        kept.push_back(ne);
    }
    Filtered out{InteractionStore(std::move(new_users), std::move(new_items), std::move(kept)),
                 std::move(user_map), std::move(item_map)};
    return out;
}

}  // namespace cys
