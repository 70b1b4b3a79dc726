#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "cys/hypergraph.hpp"
#include "cys/interaction_store.hpp"

namespace cys {

struct CleanReport {
    std::size_t removed_isolated = 0;
    std::size_t removed_duplicates = 0;
    std::vector<std::pair<NodeIdx, double>> flagged_anomalies;  // (user, psi)
    std::size_t kept_entries = 0;
};

// Symmetric pairwise trust values in (0,1]; pairs with no co-rated items are
// absent (consumers treat missing as 0).
class TrustTable {
public:
    void set(NodeIdx a, NodeIdx b, double tau) { values_[key(a, b)] = tau; }

    double get(NodeIdx a, NodeIdx b, double missing = 0.0) const {
        auto it = values_.find(key(a, b));
        return it == values_.end() ? missing : it->second;
    }

    bool contains(NodeIdx a, NodeIdx b) const { return values_.count(key(a, b)) > 0; }
    std::size_t size() const { return values_.size(); }
    const std::map<std::pair<NodeIdx, NodeIdx>, double>& pairs() const { return values_; }

private:
    static std::pair<NodeIdx, NodeIdx> key(NodeIdx a, NodeIdx b) {
        return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    }
    std::map<std::pair<NodeIdx, NodeIdx>, double> values_;
};

// Nodes with hyperedge-membership degree 0 are removed; hyperedges unchanged.
std::pair<Hypergraph, CleanReport> remove_isolated(const Hypergraph& h);

// Keep exactly the entries with rating >= t; users/items left without
// entries are dropped from the id sets.
InteractionStore threshold_filter(const InteractionStore& store, double t);

// Activity-weighted rating variance per user (population variance). Users
// with at most one nonzero rating score 0.
std::vector<double> anomaly_scores(const InteractionStore& store);

inline constexpr double kDefaultAnomalyCutoff = 0.9;

// Remove every entry of users whose score exceeds phi.
InteractionStore exclude_anomalies(const InteractionStore& store, const std::vector<double>& scores,
                                   double phi);

// tau_ij = exp(-Var(rating differences over co-rated items)) for pairs with
// at least one co-rated item.
TrustTable trust_scores(const InteractionStore& store);

}  // namespace cys
