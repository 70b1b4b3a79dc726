#include "cys/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "cys/error.hpp"
#include "cys/parallel.hpp"
#include "cys/rng.hpp"

namespace cys {

namespace {

// Second-order step: previous node prev, current node v. Unnormalized
// weights over v's neighbors: 1/p back to prev, 1 to common neighbors of
// prev, 1/q otherwise.
NodeIdx biased_step(const SimpleGraph& g, NodeIdx prev, NodeIdx v, double p, double q, Rng& rng,
                    std::vector<double>& weights) {
    const auto& nbrs = g.neighbors(v);
    weights.clear();
    double total = 0.0;
    for (NodeIdx x : nbrs) {
        double w;
        if (x == prev) {
            w = 1.0 / p;
        } else if (g.has_edge(prev, x)) {
            w = 1.0;
        } else {
            w = 1.0 / q;
        }
        total += w;
        weights.push_back(total);
    }
    double r = rng.next_double() * total;
    auto it = std::upper_bound(weights.begin(), weights.end(), r);
    std::size_t k = std::min(static_cast<std::size_t>(it - weights.begin()), nbrs.size() - 1);
    return nbrs[k];
}

std::vector<NodeIdx> run_walk(const SimpleGraph& g, NodeIdx start, const WalkParams& params,
                              Rng& rng, std::vector<double>& weights) {
    std::vector<NodeIdx> walk;
    walk.reserve(static_cast<std::size_t>(params.length));
    walk.push_back(start);
    if (params.length == 1) return walk;

    const auto& first_nbrs = g.neighbors(start);
    if (first_nbrs.empty()) return walk;  // dead end at the start
    walk.push_back(first_nbrs[rng.next_below(first_nbrs.size())]);

    while (walk.size() < static_cast<std::size_t>(params.length)) {
        NodeIdx v = walk.back();
        if (g.neighbors(v).empty()) break;
        NodeIdx prev = walk[walk.size() - 2];
        walk.push_back(biased_step(g, prev, v, params.return_p, params.in_out_q, rng, weights));
    }
    return walk;
}

template <bool Parallel>
WalkCorpus generate_walks_impl(const SimpleGraph& g, const WalkParams& params) {
    if (params.length < 2) throw ConfigError("walk length must be >= 2");
    if (params.per_node < 1) throw ConfigError("walks per node must be >= 1");
    if (!(params.return_p > 0.0) || !(params.in_out_q > 0.0)) {
        throw ConfigError("walk bias parameters p and q must be positive");
    }

    WalkCorpus corpus;
    corpus.params = params;
    if (g.edge_count() == 0) {
        corpus.empty_graph = true;
        return corpus;
    }

    std::vector<NodeIdx> starts;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        if (g.degree(static_cast<NodeIdx>(v)) > 0) starts.push_back(static_cast<NodeIdx>(v));
    }

    const std::size_t total = starts.size() * static_cast<std::size_t>(params.per_node);
    corpus.walks.resize(total);
    auto fill = [&](std::size_t idx) {
        NodeIdx start = starts[idx / static_cast<std::size_t>(params.per_node)];
        auto k = static_cast<std::uint64_t>(idx % static_cast<std::size_t>(params.per_node));
        Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(start), k));
        std::vector<double> weights;
        corpus.walks[idx] = run_walk(g, start, params, rng, weights);
    };

    if constexpr (Parallel) {
        parallel_for(static_cast<std::ptrdiff_t>(total),
                     [&](std::ptrdiff_t i) { fill(static_cast<std::size_t>(i)); });
    } else {
        for (std::size_t i = 0; i < total; ++i) fill(i);
    }
    return corpus;
}

constexpr double kMaxLogit = 6.0;

double sigmoid(double x) {
    if (x > kMaxLogit) return 1.0;
    if (x < -kMaxLogit) return 0.0;
    return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace

WalkCorpus generate_walks(const SimpleGraph& g, const WalkParams& params) {
    return generate_walks_impl<true>(g, params);
}

WalkCorpus generate_walks_serial(const SimpleGraph& g, const WalkParams& params) {
    return generate_walks_impl<false>(g, params);
}

EmbeddingTable train_skipgram(const WalkCorpus& corpus, std::size_t node_count,
                              const SkipgramParams& params) {
    if (params.dim == 0) throw ConfigError("embedding dimension must be >= 1");
    if (corpus.walks.empty()) throw ConfigError("skip-gram training needs a nonempty corpus");

    const std::size_t d = params.dim;
    EmbeddingTable table;
    table.meta = params;
    table.vectors = FeatureMatrix(node_count, d, 0.0);

    // Unigram^0.75 negative-sampling distribution over corpus tokens.
    std::vector<double> counts(node_count, 0.0);
    for (const auto& walk : corpus.walks) {
        for (NodeIdx v : walk) counts[static_cast<std::size_t>(v)] += 1.0;
    }
    std::vector<double> cumulative(node_count, 0.0);
    double total_mass = 0.0;
    for (std::size_t v = 0; v < node_count; ++v) {
        if (counts[v] > 0.0) total_mass += std::pow(counts[v], 0.75);
        cumulative[v] = total_mass;
    }

    Rng init_rng(derive_seed(params.seed, "skipgram-init"));
    std::vector<double> context(node_count * d, 0.0);
    for (std::size_t v = 0; v < node_count; ++v) {
        if (counts[v] == 0.0) {
            table.absent_nodes.push_back(static_cast<NodeIdx>(v));
            // keep the init stream aligned so absent nodes do not shift
            // other rows' initial values
            for (std::size_t j = 0; j < d; ++j) init_rng.next_double();
            continue;
        }
        auto row = table.vectors.row(v);
        for (std::size_t j = 0; j < d; ++j) {
            row[j] = (init_rng.next_double() - 0.5) / static_cast<double>(d);
        }
    }

    auto sample_negative = [&](Rng& rng) {
        double r = rng.next_double() * total_mass;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
        auto v = static_cast<std::size_t>(it - cumulative.begin());
        return std::min(v, node_count - 1);
    };

    const std::size_t tokens_per_epoch = corpus.token_count();
    const double total_tokens =
        static_cast<double>(tokens_per_epoch) * static_cast<double>(params.epochs);

    Rng rng(derive_seed(params.seed, "skipgram-train"));
    std::vector<double> grad_center(d);
    std::size_t processed = 0;

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        for (const auto& walk : corpus.walks) {
            for (std::size_t pos = 0; pos < walk.size(); ++pos) {
                ++processed;
                double alpha = params.learning_rate *
                               std::max(1.0 - static_cast<double>(processed) / (total_tokens + 1.0),
                                        1e-4);
                auto center = static_cast<std::size_t>(walk[pos]);
                auto span = 1 + static_cast<std::size_t>(rng.next_below(
                                    static_cast<std::uint64_t>(params.window)));
                std::size_t lo = pos >= span ? pos - span : 0;
                std::size_t hi = std::min(walk.size() - 1, pos + span);
                for (std::size_t cpos = lo; cpos <= hi; ++cpos) {
                    if (cpos == pos) continue;
                    auto target = static_cast<std::size_t>(walk[cpos]);
                    auto center_row = table.vectors.row(center);
                    std::fill(grad_center.begin(), grad_center.end(), 0.0);
                    for (int neg = 0; neg <= params.negatives; ++neg) {
                        std::size_t sample;
                        double label;
                        if (neg == 0) {
                            sample = target;
                            label = 1.0;
                        } else {
                            sample = sample_negative(rng);
                            if (sample == target) continue;
                            label = 0.0;
                        }
                        double* out = context.data() + sample * d;
                        double dot = 0.0;
                        for (std::size_t j = 0; j < d; ++j) dot += center_row[j] * out[j];
                        double g = (label - sigmoid(dot)) * alpha;
                        for (std::size_t j = 0; j < d; ++j) {
                            grad_center[j] += g * out[j];
                            out[j] += g * center_row[j];
                        }
                    }
                    for (std::size_t j = 0; j < d; ++j) center_row[j] += grad_center[j];
                }
            }
        }
    }

    table.vectors.require_finite("skip-gram embeddings");
    return table;
}

FeatureMatrix concat_features(const EmbeddingTable& emb, const CentralityVector& cent,
                              double w_emb, double w_cent, const CentralityMix& mix) {
    const std::size_t n = emb.vectors.row_count();
    if (cent.node_count() != n) {
        throw ConfigError("embedding rows (" + std::to_string(n) + ") and centrality rows (" +
                          std::to_string(cent.node_count()) + ") disagree");
    }
    const std::size_t d = emb.vectors.dimension();
    FeatureMatrix m(n, d + 3);
    for (std::size_t i = 0; i < n; ++i) {
        auto src = emb.vectors.row(i);
        auto dst = m.row(i);
        for (std::size_t j = 0; j < d; ++j) dst[j] = w_emb * src[j];
        dst[d + 0] = w_cent * mix.closeness * cent.closeness_norm[i];
        dst[d + 1] = w_cent * mix.degree * cent.degree_norm[i];
        dst[d + 2] = w_cent * mix.betweenness * cent.betweenness_norm[i];
    }
    return m;
}

}  // namespace cys
