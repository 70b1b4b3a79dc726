#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cys/interaction_store.hpp"

namespace cys {

enum class SplitKind { LeaveOneOutByTime, LeaveOneOutRandom };

struct EvalProtocol {
    SplitKind split = SplitKind::LeaveOneOutByTime;
    int negatives = 99;  // 0 = rank over all unseen items
    std::vector<int> k_list = {1, 5, 10, 15, 20};
    std::uint64_t seed = 0;
};

// Leave-one-out split. The train store keeps the full store's user/item id
// maps so indices stay aligned; held-out items and negatives are expressed
// in that same item index space. Users with fewer than two interactions are
// excluded (held_out = -1) and counted.
struct SplitResult {
    InteractionStore train;
    std::vector<NodeIdx> held_out;               // per user; -1 when excluded
    std::vector<std::vector<NodeIdx>> negatives;  // per user
    std::size_t excluded_users = 0;
};

SplitResult split(const InteractionStore& store, const EvalProtocol& protocol);

struct MetricsAtK {
    double hr = 0.0;
    double mrr = 0.0;
    double ndcg = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

struct MetricsReport {
    std::map<int, MetricsAtK> at_k;
    std::size_t users_evaluated = 0;
    std::size_t users_skipped = 0;  // empty relevant set
};

// Ranking metrics with binary relevance. MRR counts the first relevant item
// only when its rank is within K. Averages use compensated summation in
// user order.
MetricsReport compute_metrics(const std::vector<std::vector<NodeIdx>>& rankings,
                              const std::vector<std::vector<NodeIdx>>& relevant,
                              const std::vector<int>& k_list);

// Graded-relevance variant: NDCG uses gains (2^rel - 1) with rel taken from
// `gains` (aligned with `relevant`); the set-based metrics stay binary.
// With a single relevant item per user this coincides with the binary form.
MetricsReport compute_metrics_graded(const std::vector<std::vector<NodeIdx>>& rankings,
                                     const std::vector<std::vector<NodeIdx>>& relevant,
                                     const std::vector<std::vector<double>>& gains,
                                     const std::vector<int>& k_list);

// Compensated (Kahan) accumulator for order-stable averaging.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace cys
