#include "cys/sweep.hpp"

#include <map>
#include <memory>
#include <sstream>

#include "cys/error.hpp"

namespace cys {

std::size_t SweepAxes::cell_count() const {
    std::size_t n = 1;
    if (use_centrality) n *= use_centrality->size();
    if (variants) n *= variants->size();
    if (thresholds) n *= thresholds->size();
    if (metrics) n *= metrics->size();
    if (batch_sizes) n *= batch_sizes->size();
    if (dims) n *= dims->size();
    if (lambda_grid) n *= lambda_grid->size();
    return n;
}

SweepAxes table_axes() {
    SweepAxes axes;
    axes.use_centrality = std::vector<bool>{true, false};
    axes.variants = std::vector<std::string>{"gat", "gcn", "gin", "gin-sl"};
    axes.thresholds = std::vector<double>{1, 2, 3, 4, 5};
    axes.metrics = std::vector<std::string>{"euclidean", "jaccard", "cosine"};
    return axes;
}

SweepAxes lambda_axes() {
    SweepAxes axes;
    std::vector<std::array<double, 3>> grid;
    const std::array<double, 4> values{0.1, 0.3, 0.6, 0.9};
    for (double a : values) {
        for (double b : values) {
            for (double c : values) grid.push_back({a, b, c});
        }
    }
    axes.lambda_grid = std::move(grid);
    return axes;
}

namespace {

// Stage caches keyed by the exact sub-config each stage depends on.
struct StageCache {
    std::map<std::string, std::shared_ptr<LoadedData>> loaded;
    std::map<std::string, std::shared_ptr<CleanedData>> cleaned;
    std::map<std::string, std::shared_ptr<GraphData>> graph;
    std::map<std::string, std::shared_ptr<EmbedData>> embed;
    std::map<std::string, std::shared_ptr<FeatureData>> features;
};

std::string load_key(const RunConfig& c) {
    std::ostringstream k;
    k << c.ratings_path << '|' << c.trust_path << '|' << c.dedup << '|' << c.split << '|'
      << c.negatives << '|' << c.seed;
    return k.str();
}

std::string clean_key(const RunConfig& c) {
    std::ostringstream k;
    k << load_key(c) << '|' << c.threshold << '|' << c.anomaly_phi;
    return k.str();
}

std::string graph_key(const RunConfig& c) {
    std::ostringstream k;
    k << clean_key(c) << '|' << (c.window ? std::to_string(*c.window) : "-") << '|'
      << c.batch_size << '|' << c.max_iter << '|' << c.batch_eps;
    return k.str();
}

std::string embed_key(const RunConfig& c) {
    std::ostringstream k;
    k << graph_key(c) << '|' << c.dim << '|' << c.walk_length << '|' << c.walks_per_node << '|'
      << c.p << '|' << c.q << '|' << c.sg_window << '|' << c.sg_negatives << '|' << c.sg_epochs
      << '|' << c.sg_learning_rate;
    return k.str();
}

std::string feature_key(const RunConfig& c) {
    std::ostringstream k;
    k << embed_key(c) << '|' << c.use_centrality << '|' << c.w_emb << '|' << c.w_cent << '|'
      << c.feature_mix.closeness << '|' << c.feature_mix.degree << '|' << c.feature_mix.betweenness
      << '|' << c.co_preference_pass << '|' << c.gamma << '|' << c.variant << '|' << c.layers;
    return k.str();
}

Json run_cell(const RunConfig& cfg, StageCache& cache) {
    auto loaded = cache.loaded.find(load_key(cfg));
    if (loaded == cache.loaded.end()) {
        loaded = cache.loaded.emplace(load_key(cfg), std::make_shared<LoadedData>(stage_load(cfg)))
                     .first;
    }
    auto cleaned = cache.cleaned.find(clean_key(cfg));
    if (cleaned == cache.cleaned.end()) {
        cleaned = cache.cleaned
                      .emplace(clean_key(cfg),
                               std::make_shared<CleanedData>(stage_clean(*loaded->second, cfg)))
                      .first;
    }
    auto graph = cache.graph.find(graph_key(cfg));
    if (graph == cache.graph.end()) {
        graph = cache.graph
                    .emplace(graph_key(cfg),
                             std::make_shared<GraphData>(stage_graph(*cleaned->second, cfg)))
                    .first;
    }
    auto embed = cache.embed.find(embed_key(cfg));
    if (embed == cache.embed.end()) {
        if (cache.embed.size() >= 4) cache.embed.clear();
        embed = cache.embed
                    .emplace(embed_key(cfg),
                             std::make_shared<EmbedData>(stage_embed(*graph->second, cfg)))
                    .first;
    }
    auto features = cache.features.find(feature_key(cfg));
    if (features == cache.features.end()) {
        if (cache.features.size() >= 4) cache.features.clear();
        features =
            cache.features
                .emplace(feature_key(cfg),
                         std::make_shared<FeatureData>(
                             stage_features(*cleaned->second, *graph->second, *embed->second, cfg)))
                .first;
    }
    auto eval = stage_evaluate(*loaded->second, *cleaned->second, *graph->second,
                               *features->second, cfg);
    Json j = metrics_to_json(eval.cys);
    j["popularity"] = metrics_to_json(eval.popularity);
    return j;
}

}  // namespace

SweepResult run_sweep(const RunConfig& base, const SweepAxes& axes, std::ostream* progress) {
    // Materialize the axis lists (absent axis = single pass-through cell).
    auto centrality = axes.use_centrality.value_or(std::vector<bool>{base.use_centrality});
    auto variants = axes.variants.value_or(std::vector<std::string>{base.variant});
    auto thresholds = axes.thresholds.value_or(std::vector<double>{base.threshold});
    auto metrics = axes.metrics.value_or(std::vector<std::string>{base.metric});
    auto batch_sizes = axes.batch_sizes.value_or(std::vector<int>{base.batch_size});
    auto dims = axes.dims.value_or(std::vector<std::size_t>{base.dim});
    auto lambdas = axes.lambda_grid.value_or(std::vector<std::array<double, 3>>{
        {base.feature_mix.degree, base.feature_mix.closeness, base.feature_mix.betweenness}});

    SweepResult result;
    StageCache cache;
    std::size_t done = 0;
    const std::size_t total = centrality.size() * variants.size() * thresholds.size() *
                              metrics.size() * batch_sizes.size() * dims.size() * lambdas.size();

    for (bool cent : centrality) {
        for (const auto& variant : variants) {
            for (double threshold : thresholds) {
                for (const auto& metric : metrics) {
                    for (int batch : batch_sizes) {
                        for (auto dim : dims) {
                            for (const auto& lam : lambdas) {
                                RunConfig cfg = base;
                                cfg.use_centrality = cent;
                                cfg.variant = variant;
                                cfg.threshold = threshold;
                                cfg.metric = metric;
                                cfg.batch_size = batch;
                                cfg.dim = dim;
                                cfg.feature_mix.degree = lam[0];
                                cfg.feature_mix.closeness = lam[1];
                                cfg.feature_mix.betweenness = lam[2];

                                SweepCell cell;
                                cell.axes = {
                                    {"use_centrality", cent},
                                    {"variant", variant},
                                    {"threshold", threshold},
                                    {"metric", metric},
                                    {"batch_size", batch},
                                    {"dim", dim},
                                    {"lambda_degree", lam[0]},
                                    {"lambda_closeness", lam[1]},
                                    {"lambda_betweenness", lam[2]},
                                };
                                try {
                                    cell.metrics = run_cell(cfg, cache);
                                    cell.ok = true;
                                } catch (const std::exception& e) {
                                    cell.error = e.what();
                                    result.failed++;
                                }
                                result.cells.push_back(std::move(cell));
                                ++done;
                                if (progress) {
                                    (*progress) << "sweep cell " << done << "/" << total
                                                << (result.cells.back().ok ? "" : " FAILED")
                                                << '\n';
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return result;
}

std::string sweep_csv(const SweepResult& result, const std::vector<int>& k_list) {
    std::ostringstream out;
    out << "use_centrality,variant,threshold,metric,batch_size,dim,lambda_degree,"
           "lambda_closeness,lambda_betweenness";
    for (int k : k_list) {
        out << ",hr@" << k << ",mrr@" << k << ",ndcg@" << k << ",precision@" << k << ",recall@"
            << k;
    }
    out << ",status\n";
    out.precision(10);
    for (const auto& cell : result.cells) {
        out << (cell.axes.at("use_centrality").get<bool>() ? "true" : "false") << ','
            << cell.axes.at("variant").get<std::string>() << ','
            << cell.axes.at("threshold").get<double>() << ','
            << cell.axes.at("metric").get<std::string>() << ','
            << cell.axes.at("batch_size").get<int>() << ',' << cell.axes.at("dim").get<std::size_t>()
            << ',' << cell.axes.at("lambda_degree").get<double>() << ','
            << cell.axes.at("lambda_closeness").get<double>() << ','
            << cell.axes.at("lambda_betweenness").get<double>();
        for (int k : k_list) {
            auto key = std::to_string(k);
            if (cell.ok && cell.metrics.contains("metrics") &&
                cell.metrics["metrics"].contains(key)) {
                const auto& m = cell.metrics["metrics"][key];
                out << ',' << m["hr"].get<double>() << ',' << m["mrr"].get<double>() << ','
                    << m["ndcg"].get<double>() << ',' << m["precision"].get<double>() << ','
                    << m["recall"].get<double>();
            } else {
                out << ",,,,,";
            }
        }
        out << ',' << (cell.ok ? "ok" : "error: " + cell.error) << '\n';
    }
    return out.str();
}

}  // namespace cys
