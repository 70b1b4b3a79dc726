#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cys {

using NodeIdx = std::int32_t;

// Opaque external ids (strings in the input files) mapped to dense indices
// at load time. The mapping is persisted alongside every output so runs are
// reproducible and artifacts can be joined back to the raw data.
class IdMap {
public:
    NodeIdx intern(const std::string& name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        auto idx = static_cast<NodeIdx>(names_.size());
        names_.push_back(name);
        index_.emplace(names_.back(), idx);
        return idx;
    }

    std::optional<NodeIdx> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& name(NodeIdx idx) const { return names_.at(static_cast<std::size_t>(idx)); }
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeIdx> index_;
};

}  // namespace cys
