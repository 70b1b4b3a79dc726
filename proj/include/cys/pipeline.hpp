#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cys/centrality.hpp"
#include "cys/dynamics.hpp"
#include "cys/embedding.hpp"
#include "cys/evaluation.hpp"
#include "cys/hypergraph.hpp"
#include "cys/interaction_store.hpp"
#include "cys/preprocess.hpp"
#include "cys/propagation.hpp"
#include "cys/recommender.hpp"
#include "cys/social_graph.hpp"

namespace cys {

using Json = nlohmann::json;

struct RunConfig {
    // dataset
    std::string ratings_path;
    std::string trust_path;  // optional
    std::string out_dir = "out";

    // preprocessing
    std::string dedup = "keep-max";  // keep-max | keep-last
    double threshold = 1.0;
    double anomaly_phi = 0.9;

    // hypergraph
    double gamma = 0.7;
    std::optional<std::int64_t> window;
    bool co_preference_pass = true;

    // features
    bool use_centrality = true;  // w_cent zeroed when off
    double w_emb = 1.0;
    double w_cent = 1.0;
    CentralityMix feature_mix;  // lambda scaling of the centrality tail

    // embedding
    std::size_t dim = 64;
    int walk_length = 20;
    int walks_per_node = 10;
    double p = 1.0;
    double q = 1.0;
    int sg_window = 5;
    int sg_negatives = 5;
    int sg_epochs = 5;
    double sg_learning_rate = 0.025;

    // propagation
    std::string variant = "gat";
    int layers = 2;

    // recommendation
    std::string metric = "cosine";
    std::size_t neighbors = 50;
    std::optional<double> rating_floor;  // defaults to `threshold`

    // evaluation protocol
    std::string split = "auto";  // auto | by-time | random
    int negatives = 99;
    std::vector<int> k_list = {1, 5, 10, 15, 20};
    bool graded_ndcg = false;  // gains from the held-out rating instead of binary

    // batching
    int batch_size = 128;
    int max_iter = 1;
    double batch_eps = 1e-6;

    // consensus-dynamics defaults (simulate-dcse / simulate-cehs)
    double eta = 0.5;
    double rho_v = 0.2;
    LambdaMix dynamics_lambda;

    std::uint64_t seed = 42;
    int workers = 0;

    double floor() const { return rating_floor.value_or(threshold); }
};

// Flat `key = value` config file; '#' starts a comment.
RunConfig load_config_file(const std::filesystem::path& path);
void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value);
Json config_to_json(const RunConfig& cfg);

// Hash partition of hypergraph nodes into disjoint covering batches.
struct BatchPlan {
    int n_batches = 1;
    int max_iter = 1;
    double eps = 1e-6;
    std::vector<int> batch_of_node;
    std::vector<std::vector<NodeIdx>> batches;
};

BatchPlan batch_partition(const Hypergraph& h, int n_batches, int max_iter, double eps,
                          std::uint64_t seed);

// ---- pipeline stages (shared with the sweep harness) ----

struct LoadedData {
    InteractionStore full;
    SplitResult split;
    std::optional<SocialGraph> social;
};

struct CleanedData {
    InteractionStore store;  // thresholded, anomaly-filtered train store
    CleanReport report;
    TrustTable trust;
    std::vector<std::pair<NodeIdx, double>> flagged;  // full-store user idx, psi
};

struct GraphData {
    Hypergraph hyper;          // co-interaction, isolated nodes removed
    SimpleGraph graph;         // clique expansion
    CentralityVector cent;
    std::vector<NodeIdx> clean_to_hyper;  // -1 where dropped as isolated
    std::vector<NodeIdx> hyper_to_clean;
    BatchPlan batches;
    std::size_t isolated_removed = 0;
};

struct EmbedData {
    EmbeddingTable table;  // rows in hypergraph node space
    std::size_t walk_count = 0;
    std::size_t token_count = 0;
};

struct FeatureData {
    FeatureMatrix features;     // in cleaned-store user space (zero rows for dropped users)
    SimpleGraph message_graph;  // co-interaction + co-preference projection (hyper space)
    std::size_t co_preference_edges = 0;
    int propagation_rounds = 0;
    double final_round_delta = 0.0;
};

struct EvalData {
    MetricsReport cys;
    MetricsReport popularity;  // baseline on the identical split
    std::size_t users_unmapped = 0;  // evaluated users dropped by cleaning
};

LoadedData stage_load(const RunConfig& cfg);
CleanedData stage_clean(const LoadedData& data, const RunConfig& cfg);
GraphData stage_graph(const CleanedData& cleaned, const RunConfig& cfg);
EmbedData stage_embed(const GraphData& graph, const RunConfig& cfg);
FeatureData stage_features(const CleanedData& cleaned, const GraphData& graph,
                           const EmbedData& embed, const RunConfig& cfg);
EvalData stage_evaluate(const LoadedData& loaded, const CleanedData& cleaned,
                        const GraphData& graph, const FeatureData& features,
                        const RunConfig& cfg);

Json metrics_to_json(const MetricsReport& m);

// Full Algorithm-1 run. Writes report.json, timings.json and per-stage
// artifacts under cfg.out_dir when `write_artifacts`; returns the report
// (which never contains wall times; those live in timings.json).
Json run_pipeline(const RunConfig& cfg, bool write_artifacts = true);

}  // namespace cys
