#include "cys/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "cys/error.hpp"

namespace cys {

namespace {

double population_variance(const std::vector<double>& xs) {
    if (xs.size() <= 1) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(xs.size());
}

}  // namespace

std::pair<Hypergraph, CleanReport> remove_isolated(const Hypergraph& h) {
    auto deg = h.membership_degree();
    IdMap kept;
    std::vector<NodeIdx> remap(h.node_count(), -1);
    for (std::size_t v = 0; v < h.node_count(); ++v) {
        if (deg[v] > 0) remap[v] = kept.intern(h.nodes().name(static_cast<NodeIdx>(v)));
    }

    std::vector<Hyperedge> edges = h.edges();
    for (auto& e : edges) {
        for (auto& m : e.members) m = remap[static_cast<std::size_t>(m)];
    }

    CleanReport report;
    report.removed_isolated = h.node_count() - kept.size();
    return {Hypergraph(std::move(kept), std::move(edges)), report};
}

InteractionStore threshold_filter(const InteractionStore& store, double t) {
    if (t < kRatingMin || t > kRatingMax) throw RangeError("threshold outside [0,5]");
    std::vector<bool> keep(store.entry_count());
    const auto& entries = store.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) keep[i] = entries[i].rating >= t;
    return store.filter_entries(keep).store;
}

std::vector<double> anomaly_scores(const InteractionStore& store) {
    if (store.entry_count() == 0) throw ConfigError("anomaly scores of an empty store");

    std::size_t max_nonzero = 0;
    std::vector<std::vector<double>> nonzero(store.user_count());
    for (const auto& e : store.entries()) {
        if (e.rating != 0.0) nonzero[static_cast<std::size_t>(e.user)].push_back(e.rating);
    }
    for (const auto& xs : nonzero) max_nonzero = std::max(max_nonzero, xs.size());

    std::vector<double> psi(store.user_count(), 0.0);
    if (max_nonzero == 0) return psi;
    for (std::size_t u = 0; u < nonzero.size(); ++u) {
        if (nonzero[u].size() <= 1) continue;
        double freq = static_cast<double>(nonzero[u].size()) / static_cast<double>(max_nonzero);
        psi[u] = freq * population_variance(nonzero[u]);
    }
    return psi;
}

InteractionStore exclude_anomalies(const InteractionStore& store, const std::vector<double>& scores,
                                   double phi) {
    if (scores.size() != store.user_count()) {
        throw ConfigError("anomaly scores do not cover every user in the store");
    }
    std::vector<bool> keep(store.entry_count());
    const auto& entries = store.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        keep[i] = scores[static_cast<std::size_t>(entries[i].user)] <= phi;
    }
    return store.filter_entries(keep).store;
}

TrustTable trust_scores(const InteractionStore& store) {
    // Per item, every pair of raters contributes one rating difference.
    // Accumulating (count, sum, sum of squares) per pair gives the
    // population variance in one pass.
    struct PairStats {
        std::int64_t n = 0;
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    std::map<std::pair<NodeIdx, NodeIdx>, PairStats> stats;

    std::vector<std::vector<std::pair<NodeIdx, double>>> by_item(store.item_count());
    for (const auto& e : store.entries()) {
        by_item[static_cast<std::size_t>(e.item)].emplace_back(e.user, e.rating);
    }
    for (auto& group : by_item) {
        std::sort(group.begin(), group.end());
        for (std::size_t a = 0; a < group.size(); ++a) {
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                double diff = group[a].second - group[b].second;  // r_ui - r_uj with i=min idx
                auto& s = stats[{group[a].first, group[b].first}];
                s.n += 1;
                s.sum += diff;
                s.sum_sq += diff * diff;
            }
        }
    }

    TrustTable table;
    for (const auto& [key, s] : stats) {
        double mean = s.sum / static_cast<double>(s.n);
        double var = s.sum_sq / static_cast<double>(s.n) - mean * mean;
        var = std::max(var, 0.0);
        table.set(key.first, key.second, std::exp(-var));
    }
    return table;
}

}  // namespace cys
