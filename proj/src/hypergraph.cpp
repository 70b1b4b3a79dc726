#include "cys/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cys/error.hpp"
#include "cys/feature_matrix.hpp"
#include "cys/interaction_store.hpp"
#include "cys/parallel.hpp"

namespace cys {

Hypergraph::Hypergraph(IdMap nodes, std::vector<Hyperedge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    for (auto& e : edges_) {
        std::sort(e.members.begin(), e.members.end());
        e.members.erase(std::unique(e.members.begin(), e.members.end()), e.members.end());
        if (e.members.size() < 2) throw RangeError("hyperedge has fewer than 2 members");
        for (auto m : e.members) {
            if (m < 0 || static_cast<std::size_t>(m) >= nodes_.size()) {
                throw RangeError("hyperedge member outside node set");
            }
        }
        if (e.kind == HyperedgeKind::CoInteraction && !e.anchor_item) {
            throw RangeError("co-interaction hyperedge lacks an anchor item");
        }
        if (e.kind == HyperedgeKind::CoPreference && e.anchor_item) {
            throw RangeError("co-preference hyperedge must not carry an anchor item");
        }
    }
}

std::size_t Hypergraph::count_kind(HyperedgeKind kind) const {
    std::size_t n = 0;
    for (const auto& e : edges_) {
        if (e.kind == kind) ++n;
    }
    return n;
}

std::vector<std::size_t> Hypergraph::membership_degree() const {
    std::vector<std::size_t> deg(nodes_.size(), 0);
    for (const auto& e : edges_) {
        for (auto m : e.members) deg[static_cast<std::size_t>(m)]++;
    }
    return deg;
}

Hypergraph build_co_interaction(const InteractionStore& store, std::optional<std::int64_t> window) {
    if (window && !store.fully_timestamped()) {
        throw ConfigError("co-interaction time window requires timestamps on every interaction");
    }

    // Group interactions by item.
    std::vector<std::vector<const Interaction*>> by_item(store.item_count());
    for (const auto& e : store.entries()) by_item[static_cast<std::size_t>(e.item)].push_back(&e);

    IdMap nodes;
    for (const auto& name : store.users().names()) nodes.intern(name);

    std::vector<Hyperedge> edges;
    for (std::size_t item = 0; item < by_item.size(); ++item) {
        const auto& group = by_item[item];
        if (group.size() < 2) continue;
        std::vector<NodeIdx> members;
        if (window) {
            std::int64_t latest = (*group.front()->timestamp);
            for (const auto* e : group) latest = std::max(latest, *e->timestamp);
            for (const auto* e : group) {
                if (*e->timestamp >= latest - *window) members.push_back(e->user);
            }
        } else {
            for (const auto* e : group) members.push_back(e->user);
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (members.size() < 2) continue;
        edges.push_back(Hyperedge{std::move(members), HyperedgeKind::CoInteraction,
                                  static_cast<NodeIdx>(item)});
    }
    return Hypergraph(std::move(nodes), std::move(edges));
}

namespace {

struct UnionFind {
    std::vector<NodeIdx> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    NodeIdx find(NodeIdx x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(NodeIdx a, NodeIdx b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;
    }
};

}  // namespace

CoPreferenceResult build_co_preference(const IdMap& nodes, const FeatureMatrix& features,
                                       double gamma) {
    if (nodes.size() != features.row_count()) {
        throw ConfigError("node set and feature matrix disagree on row count");
    }
    if (!(gamma > 0.0 && gamma <= 1.0)) throw RangeError("gamma must lie in (0,1]");
    features.require_finite("co-preference features");

    const std::size_t n = features.row_count();
    std::vector<double> norm(n, 0.0);
    std::vector<NodeIdx> zero_norm;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (double v : features.row(i)) s += v * v;
        norm[i] = std::sqrt(s);
        if (norm[i] == 0.0) zero_norm.push_back(static_cast<NodeIdx>(i));
    }

    // Pairwise pass, parallel over the anchor node; each i collects its own
    // j > i matches so the merged edge order is schedule independent.
    std::vector<std::vector<NodeIdx>> matches(n);
    parallel_for(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t i) {
        if (norm[static_cast<std::size_t>(i)] == 0.0) return;
        auto fi = features.row(static_cast<std::size_t>(i));
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
            if (norm[j] == 0.0) continue;
            auto fj = features.row(j);
            double dot = 0.0;
            for (std::size_t k = 0; k < fi.size(); ++k) dot += fi[k] * fj[k];
            double cosine = dot / (norm[static_cast<std::size_t>(i)] * norm[j]);
            if (cosine >= gamma) matches[static_cast<std::size_t>(i)].push_back(static_cast<NodeIdx>(j));
        }
    });

    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto j : matches[i]) uf.unite(static_cast<NodeIdx>(i), j);
    }

    std::map<NodeIdx, std::vector<NodeIdx>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        if (norm[i] == 0.0) continue;
        groups[uf.find(static_cast<NodeIdx>(i))].push_back(static_cast<NodeIdx>(i));
    }

    IdMap out_nodes;
    for (const auto& name : nodes.names()) out_nodes.intern(name);
    std::vector<Hyperedge> edges;
    for (auto& [root, members] : groups) {
        if (members.size() < 2) continue;
        edges.push_back(Hyperedge{std::move(members), HyperedgeKind::CoPreference, std::nullopt});
    }
    return CoPreferenceResult{Hypergraph(std::move(out_nodes), std::move(edges)), std::move(zero_norm)};
}

}  // namespace cys
