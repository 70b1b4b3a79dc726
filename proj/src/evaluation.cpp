#include "cys/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "cys/error.hpp"
#include "cys/rng.hpp"

namespace cys {

SplitResult split(const InteractionStore& store, const EvalProtocol& protocol) {
    if (protocol.negatives < 0) throw ConfigError("negative count must be >= 0");
    if (protocol.split == SplitKind::LeaveOneOutByTime && !store.fully_timestamped()) {
        throw ConfigError("by-time split requires timestamps on every interaction");
    }

    const std::size_t users = store.user_count();
    const std::size_t items = store.item_count();

    SplitResult out;
    out.held_out.assign(users, -1);
    out.negatives.resize(users);

    std::vector<bool> drop(store.entry_count(), false);

    // Entries are sorted by (user, item); user_entries gives each user's
    // slice. Position of an entry in the global array:
    const auto& entries = store.entries();

    for (std::size_t u = 0; u < users; ++u) {
        auto span = store.user_entries(static_cast<NodeIdx>(u));
        if (span.size() < 2) {
            if (span.size() >= 1) out.excluded_users++;
            continue;
        }
        std::size_t pick = 0;
        if (protocol.split == SplitKind::LeaveOneOutByTime) {
            // Latest timestamp; ties resolved toward the higher item index.
            for (std::size_t k = 1; k < span.size(); ++k) {
                if (*span[k].timestamp >= *span[pick].timestamp) pick = k;
            }
        } else {
            Rng rng(derive_seed(protocol.seed, "split", static_cast<std::uint64_t>(u)));
            pick = static_cast<std::size_t>(rng.next_below(span.size()));
        }
        out.held_out[u] = span[pick].item;
        auto global_index = static_cast<std::size_t>(&span[pick] - entries.data());
        drop[global_index] = true;

        if (protocol.negatives > 0) {
            if (static_cast<std::size_t>(protocol.negatives) + span.size() > items) {
                throw ConfigError("not enough never-interacted items to sample negatives for user " +
                                  store.users().name(static_cast<NodeIdx>(u)));
            }
            Rng rng(derive_seed(protocol.seed, "negatives", static_cast<std::uint64_t>(u)));
            std::vector<bool> taken(items, false);
            auto& negs = out.negatives[u];
            negs.reserve(static_cast<std::size_t>(protocol.negatives));
            while (negs.size() < static_cast<std::size_t>(protocol.negatives)) {
                auto i = static_cast<NodeIdx>(rng.next_below(items));
                if (taken[static_cast<std::size_t>(i)]) continue;
                if (store.has_rated(static_cast<NodeIdx>(u), i)) continue;
                taken[static_cast<std::size_t>(i)] = true;
                negs.push_back(i);
            }
        }
    }

    // Rebuild the train store over the SAME id maps so downstream indices
    // line up with the full store.
    std::vector<Interaction> train_entries;
    train_entries.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!drop[i]) train_entries.push_back(entries[i]);
    }
    IdMap users_copy = store.users();
    IdMap items_copy = store.items();
    out.train = InteractionStore(std::move(users_copy), std::move(items_copy),
                                 std::move(train_entries));
    return out;
}

namespace {

MetricsReport compute_metrics_impl(const std::vector<std::vector<NodeIdx>>& rankings,
                                   const std::vector<std::vector<NodeIdx>>& relevant,
                                   const std::vector<std::vector<double>>* gains,
                                   const std::vector<int>& k_list) {
    if (rankings.size() != relevant.size()) {
        throw ConfigError("rankings and relevant sets must align");
    }
    if (gains && gains->size() != relevant.size()) {
        throw ConfigError("gains and relevant sets must align");
    }
    for (int k : k_list) {
        if (k < 1) throw ConfigError("metric cutoff K must be >= 1");
    }

    MetricsReport report;
    struct Acc {
        KahanSum hr, mrr, ndcg, precision, recall;
    };
    std::map<int, Acc> acc;
    for (int k : k_list) acc[k];

    for (std::size_t u = 0; u < rankings.size(); ++u) {
        const auto& rel_items = relevant[u];
        if (rel_items.empty()) {
            report.users_skipped++;
            continue;
        }
        if (gains && (*gains)[u].size() != rel_items.size()) {
            throw ConfigError("gains must give one value per relevant item");
        }
        // sorted (item, gain) pairs; gain 2^rel - 1, rel = 1 when binary
        std::vector<std::pair<NodeIdx, double>> rel(rel_items.size());
        for (std::size_t i = 0; i < rel_items.size(); ++i) {
            double g = gains ? std::pow(2.0, (*gains)[u][i]) - 1.0 : 1.0;
            rel[i] = {rel_items[i], g};
        }
        std::sort(rel.begin(), rel.end());
        report.users_evaluated++;
        const auto& ranking = rankings[u];

        auto gain_of = [&](NodeIdx item) -> const double* {
            auto it = std::lower_bound(rel.begin(), rel.end(), item,
                                       [](const auto& p, NodeIdx i) { return p.first < i; });
            if (it != rel.end() && it->first == item) return &it->second;
            return nullptr;
        };
        std::vector<double> ideal_gains(rel.size());
        for (std::size_t i = 0; i < rel.size(); ++i) ideal_gains[i] = rel[i].second;
        std::sort(ideal_gains.begin(), ideal_gains.end(), std::greater<>());

        for (int k : k_list) {
            auto kk = static_cast<std::size_t>(k);
            std::size_t limit = std::min(kk, ranking.size());
            std::size_t hits = 0;
            std::size_t first_rank = 0;
            double dcg = 0.0;
            for (std::size_t r = 0; r < limit; ++r) {
                if (const double* g = gain_of(ranking[r])) {
                    ++hits;
                    if (first_rank == 0) first_rank = r + 1;
                    dcg += *g / std::log2(static_cast<double>(r) + 2.0);
                }
            }
            double idcg = 0.0;
            std::size_t ideal = std::min(kk, rel.size());
            for (std::size_t r = 0; r < ideal; ++r) {
                idcg += ideal_gains[r] / std::log2(static_cast<double>(r) + 2.0);
            }
            auto& a = acc[k];
            a.hr.add(hits > 0 ? 1.0 : 0.0);
            a.mrr.add(first_rank > 0 ? 1.0 / static_cast<double>(first_rank) : 0.0);
            a.ndcg.add(idcg > 0.0 ? dcg / idcg : 0.0);
            a.precision.add(static_cast<double>(hits) / static_cast<double>(k));
            a.recall.add(static_cast<double>(hits) / static_cast<double>(rel.size()));
        }
    }

    for (int k : k_list) {
        MetricsAtK m;
        if (report.users_evaluated > 0) {
            auto n = static_cast<double>(report.users_evaluated);
            m.hr = acc[k].hr.value() / n;
            m.mrr = acc[k].mrr.value() / n;
            m.ndcg = acc[k].ndcg.value() / n;
            m.precision = acc[k].precision.value() / n;
            m.recall = acc[k].recall.value() / n;
        }
        report.at_k[k] = m;
    }
    return report;
}

}  // namespace

MetricsReport compute_metrics(const std::vector<std::vector<NodeIdx>>& rankings,
                              const std::vector<std::vector<NodeIdx>>& relevant,
                              const std::vector<int>& k_list) {
    return compute_metrics_impl(rankings, relevant, nullptr, k_list);
}

MetricsReport compute_metrics_graded(const std::vector<std::vector<NodeIdx>>& rankings,
                                     const std::vector<std::vector<NodeIdx>>& relevant,
                                     const std::vector<std::vector<double>>& gains,
                                     const std::vector<int>& k_list) {
    return compute_metrics_impl(rankings, relevant, &gains, k_list);
}

}  // namespace cys
