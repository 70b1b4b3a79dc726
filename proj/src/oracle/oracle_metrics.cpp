#include <algorithm>
#include <cmath>
#include <set>

#include "cys/error.hpp"
#include "cys/oracles.hpp"

namespace cys::oracle {

MetricsReport oracle_metrics(const std::vector<std::vector<NodeIdx>>& rankings,
                             const std::vector<std::vector<NodeIdx>>& relevant,
                             const std::vector<int>& k_list) {
    if (rankings.size() != relevant.size()) throw ConfigError("oracle_metrics: size mismatch");
    for (int k : k_list) {
        if (k < 1) throw ConfigError("oracle_metrics: K must be >= 1");
    }

    MetricsReport report;
    for (int k : k_list) report.at_k[k];

    std::size_t evaluated = 0;
    std::size_t skipped = 0;
    for (std::size_t u = 0; u < rankings.size(); ++u) {
        std::set<NodeIdx> rel(relevant[u].begin(), relevant[u].end());
        if (rel.empty()) {
            ++skipped;
            continue;
        }
        ++evaluated;
        for (int k : k_list) {
            auto& m = report.at_k[k];

            // hit(u,K): at least one relevant item in the top K
            bool hit = false;
            for (int r = 0; r < k && r < static_cast<int>(rankings[u].size()); ++r) {
                if (rel.count(rankings[u][static_cast<std::size_t>(r)])) hit = true;
            }
            m.hr += hit ? 1.0 : 0.0;

            // reciprocal rank of the first relevant item, zero beyond K
            double rr = 0.0;
            for (int r = 0; r < static_cast<int>(rankings[u].size()); ++r) {
                if (rel.count(rankings[u][static_cast<std::size_t>(r)])) {
                    if (r + 1 <= k) rr = 1.0 / static_cast<double>(r + 1);
                    break;
                }
            }
            m.mrr += rr;

            // DCG with rel_i in {0,1}: sum (2^rel - 1)/log2(i+1)
            double dcg = 0.0;
            for (int r = 0; r < k && r < static_cast<int>(rankings[u].size()); ++r) {
                double reli = rel.count(rankings[u][static_cast<std::size_t>(r)]) ? 1.0 : 0.0;
                dcg += (std::pow(2.0, reli) - 1.0) / std::log2(static_cast<double>(r + 1) + 1.0);
            }
            double idcg = 0.0;
            int ideal = std::min<int>(k, static_cast<int>(rel.size()));
            for (int r = 0; r < ideal; ++r) {
                idcg += 1.0 / std::log2(static_cast<double>(r + 1) + 1.0);
            }
            m.ndcg += idcg > 0.0 ? dcg / idcg : 0.0;

            // |R_u ∩ S_u| with S_u the top-K set
            double inter = 0.0;
            for (int r = 0; r < k && r < static_cast<int>(rankings[u].size()); ++r) {
                if (rel.count(rankings[u][static_cast<std::size_t>(r)])) inter += 1.0;
            }
            m.precision += inter / static_cast<double>(k);
            m.recall += inter / static_cast<double>(rel.size());
        }
    }

    report.users_evaluated = evaluated;
    report.users_skipped = skipped;
    for (int k : k_list) {
        auto& m = report.at_k[k];
        if (evaluated > 0) {
            auto n = static_cast<double>(evaluated);
            m.hr /= n;
            m.mrr /= n;
            m.ndcg /= n;
            m.precision /= n;
            m.recall /= n;
        }
    }
    return report;
}

}  // namespace cys::oracle
