#include "cys/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "cys/error.hpp"
#include "cys/io.hpp"
#include "cys/parallel.hpp"
#include "cys/rng.hpp"

namespace cys {

namespace {

DedupRule parse_dedup(const std::string& s) {
    if (s == "keep-max") return DedupRule::KeepMax;
    if (s == "keep-last") return DedupRule::KeepLast;
    throw ConfigError("unknown dedup rule: " + s);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::string tok;
    std::istringstream iss(s);
    while (std::getline(iss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

}  // namespace

void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "ratings") cfg.ratings_path = value;
    else if (key == "trust") cfg.trust_path = value;
    else if (key == "out") cfg.out_dir = value;
    else if (key == "dedup") cfg.dedup = value;
    else if (key == "threshold") cfg.threshold = std::stod(value);
    else if (key == "anomaly_phi") cfg.anomaly_phi = std::stod(value);
    else if (key == "gamma") cfg.gamma = std::stod(value);
    else if (key == "window") cfg.window = std::stoll(value);
    else if (key == "co_preference") cfg.co_preference_pass = value == "true" || value == "1";
    else if (key == "use_centrality") cfg.use_centrality = value == "true" || value == "1";
    else if (key == "w_emb") cfg.w_emb = std::stod(value);
    else if (key == "w_cent") cfg.w_cent = std::stod(value);
    else if (key == "lambda_closeness") cfg.feature_mix.closeness = std::stod(value);
    else if (key == "lambda_degree") cfg.feature_mix.degree = std::stod(value);
    else if (key == "lambda_betweenness") cfg.feature_mix.betweenness = std::stod(value);
    else if (key == "dim") cfg.dim = static_cast<std::size_t>(std::stoul(value));
    else if (key == "walk_length") cfg.walk_length = std::stoi(value);
    else if (key == "walks_per_node") cfg.walks_per_node = std::stoi(value);
    else if (key == "p") cfg.p = std::stod(value);
    else if (key == "q") cfg.q = std::stod(value);
    else if (key == "sg_window") cfg.sg_window = std::stoi(value);
    else if (key == "sg_negatives") cfg.sg_negatives = std::stoi(value);
    else if (key == "sg_epochs") cfg.sg_epochs = std::stoi(value);
    else if (key == "sg_learning_rate") cfg.sg_learning_rate = std::stod(value);
    else if (key == "variant") cfg.variant = value;
    else if (key == "layers") cfg.layers = std::stoi(value);
    else if (key == "metric") cfg.metric = value;
    else if (key == "neighbors") cfg.neighbors = static_cast<std::size_t>(std::stoul(value));
    else if (key == "rating_floor") cfg.rating_floor = std::stod(value);
    else if (key == "split") cfg.split = value;
    else if (key == "negatives") cfg.negatives = std::stoi(value);
    else if (key == "k_list") cfg.k_list = parse_int_list(value);
    else if (key == "graded_ndcg") cfg.graded_ndcg = value == "true" || value == "1";
    else if (key == "batch_size") cfg.batch_size = std::stoi(value);
    else if (key == "max_iter") cfg.max_iter = std::stoi(value);
    else if (key == "batch_eps") cfg.batch_eps = std::stod(value);
    else if (key == "eta") cfg.eta = std::stod(value);
    else if (key == "rho_v") cfg.rho_v = std::stod(value);
    else if (key == "dyn_lambda_degree") cfg.dynamics_lambda.degree = std::stod(value);
    else if (key == "dyn_lambda_closeness") cfg.dynamics_lambda.closeness = std::stod(value);
    else if (key == "dyn_lambda_betweenness") cfg.dynamics_lambda.betweenness = std::stod(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "workers") cfg.workers = std::stoi(value);
    else throw ConfigError("unknown config key: " + key);
}

RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

Json config_to_json(const RunConfig& cfg) {
    Json j;
    j["ratings"] = cfg.ratings_path;
    j["trust"] = cfg.trust_path;
    j["dedup"] = cfg.dedup;
    j["threshold"] = cfg.threshold;
    j["anomaly_phi"] = cfg.anomaly_phi;
    j["gamma"] = cfg.gamma;
    if (cfg.window) j["window"] = *cfg.window;
    j["co_preference"] = cfg.co_preference_pass;
    j["use_centrality"] = cfg.use_centrality;
    j["w_emb"] = cfg.w_emb;
    j["w_cent"] = cfg.w_cent;
    j["lambda"] = {{"closeness", cfg.feature_mix.closeness},
                   {"degree", cfg.feature_mix.degree},
                   {"betweenness", cfg.feature_mix.betweenness}};
    j["dim"] = cfg.dim;
    j["walk_length"] = cfg.walk_length;
    j["walks_per_node"] = cfg.walks_per_node;
    j["p"] = cfg.p;
    j["q"] = cfg.q;
    j["sg_window"] = cfg.sg_window;
    j["sg_negatives"] = cfg.sg_negatives;
    j["sg_epochs"] = cfg.sg_epochs;
    j["sg_learning_rate"] = cfg.sg_learning_rate;
    j["variant"] = cfg.variant;
    j["layers"] = cfg.layers;
    j["metric"] = cfg.metric;
    j["neighbors"] = cfg.neighbors;
    j["rating_floor"] = cfg.floor();
    j["split"] = cfg.split;
    j["negatives"] = cfg.negatives;
    j["k_list"] = cfg.k_list;
    j["graded_ndcg"] = cfg.graded_ndcg;
    j["batch_size"] = cfg.batch_size;
    j["max_iter"] = cfg.max_iter;
    j["batch_eps"] = cfg.batch_eps;
    j["eta"] = cfg.eta;
    j["rho_v"] = cfg.rho_v;
    j["dyn_lambda"] = {{"degree", cfg.dynamics_lambda.degree},
                       {"closeness", cfg.dynamics_lambda.closeness},
                       {"betweenness", cfg.dynamics_lambda.betweenness}};
    j["seed"] = cfg.seed;
    return j;
}

BatchPlan batch_partition(const Hypergraph& h, int n_batches, int max_iter, double eps,
                          std::uint64_t seed) {
    if (n_batches < 1) throw ConfigError("batch count must be >= 1");
    BatchPlan plan;
    plan.n_batches = n_batches;
    plan.max_iter = max_iter;
    plan.eps = eps;
    plan.batch_of_node.resize(h.node_count());
    plan.batches.resize(static_cast<std::size_t>(n_batches));
    for (std::size_t v = 0; v < h.node_count(); ++v) {
        // Hash the node name (not the index) so the assignment is stable
        // under reindexing.
        auto hv = mix_seed(derive_seed(seed, "batch"), hash_label(h.nodes().name(static_cast<NodeIdx>(v))));
        int b = static_cast<int>(hv % static_cast<std::uint64_t>(n_batches));
        plan.batch_of_node[v] = b;
        plan.batches[static_cast<std::size_t>(b)].push_back(static_cast<NodeIdx>(v));
    }
    return plan;
}

LoadedData stage_load(const RunConfig& cfg) {
    if (cfg.ratings_path.empty()) throw ConfigError("no ratings path configured");
    LoadedData data;
    data.full = load_interactions(cfg.ratings_path, parse_dedup(cfg.dedup));
    if (data.full.entry_count() == 0) throw ParseError("ratings file has no interactions");

    EvalProtocol proto;
    proto.negatives = cfg.negatives;
    proto.k_list = cfg.k_list;
    proto.seed = derive_seed(cfg.seed, "protocol");
    if (cfg.split == "by-time") {
        proto.split = SplitKind::LeaveOneOutByTime;
    } else if (cfg.split == "random") {
        proto.split = SplitKind::LeaveOneOutRandom;
    } else if (cfg.split == "auto") {
        proto.split = data.full.fully_timestamped() ? SplitKind::LeaveOneOutByTime
                                                    : SplitKind::LeaveOneOutRandom;
    } else {
        throw ConfigError("unknown split kind: " + cfg.split);
    }
    data.split = split(data.full, proto);

    if (!cfg.trust_path.empty()) {
        data.social = load_social(cfg.trust_path, &data.full.users());
    }
    return data;
}

CleanedData stage_clean(const LoadedData& data, const RunConfig& cfg) {
    CleanedData out;
    auto thresholded = threshold_filter(data.split.train, cfg.threshold);
    if (thresholded.entry_count() == 0) {
        // Threshold wiped every interaction (e.g. t above the rating scale's
        // maximum). Nothing to score; downstream stages run on the empty
        // store and the report carries zeros.
        out.store = std::move(thresholded);
    } else {
        auto psi = anomaly_scores(thresholded);
        out.store = exclude_anomalies(thresholded, psi, cfg.anomaly_phi);
        for (std::size_t u = 0; u < psi.size(); ++u) {
            if (psi[u] > cfg.anomaly_phi) {
                auto full_idx =
                    data.full.users().find(thresholded.users().name(static_cast<NodeIdx>(u)));
                out.flagged.emplace_back(full_idx.value_or(-1), psi[u]);
            }
        }
        out.trust = trust_scores(out.store);
    }
    out.report.removed_duplicates = data.full.duplicates_removed();
    out.report.kept_entries = out.store.entry_count();
    out.report.flagged_anomalies = out.flagged;
    return out;
}

GraphData stage_graph(const CleanedData& cleaned, const RunConfig& cfg) {
    GraphData out;
    auto hyper = build_co_interaction(cleaned.store, cfg.window);
    auto [pruned, clean_report] = remove_isolated(hyper);
    out.isolated_removed = clean_report.removed_isolated;
    out.hyper = std::move(pruned);

    out.clean_to_hyper.assign(cleaned.store.user_count(), -1);
    out.hyper_to_clean.assign(out.hyper.node_count(), -1);
    for (std::size_t v = 0; v < out.hyper.node_count(); ++v) {
        auto name = out.hyper.nodes().name(static_cast<NodeIdx>(v));
        auto c = cleaned.store.users().find(name);
        if (!c) throw Error("hypergraph node missing from cleaned store: " + name);
        out.clean_to_hyper[static_cast<std::size_t>(*c)] = static_cast<NodeIdx>(v);
        out.hyper_to_clean[v] = *c;
    }

    out.graph = project_hypergraph(out.hyper);
    out.cent = compute_centralities(out.graph);

    int n_batches = std::max(
        1, static_cast<int>((out.hyper.node_count() + static_cast<std::size_t>(cfg.batch_size) - 1) /
                            static_cast<std::size_t>(cfg.batch_size)));
    out.batches = batch_partition(out.hyper, n_batches, cfg.max_iter, cfg.batch_eps, cfg.seed);
    return out;
}

EmbedData stage_embed(const GraphData& graph, const RunConfig& cfg) {
    WalkParams wp;
    wp.length = cfg.walk_length;
    wp.per_node = cfg.walks_per_node;
    wp.return_p = cfg.p;
    wp.in_out_q = cfg.q;
    wp.seed = derive_seed(cfg.seed, "walks");
    auto corpus = generate_walks(graph.graph, wp);

    // Batch processing: the corpus is consumed batch by batch, so the batch
    // plan fixes the training order.
    if (graph.batches.n_batches > 1 && !corpus.walks.empty()) {
        std::vector<std::vector<NodeIdx>> ordered;
        ordered.reserve(corpus.walks.size());
        auto per_node = static_cast<std::size_t>(cfg.walks_per_node);
        // walks are grouped per start node in node order; regroup by batch
        std::vector<std::size_t> first_walk_of_node(graph.graph.node_count(), SIZE_MAX);
        std::size_t w = 0;
        while (w < corpus.walks.size()) {
            auto node = static_cast<std::size_t>(corpus.walks[w].front());
            first_walk_of_node[node] = w;
            w += per_node;
        }
        for (const auto& batch : graph.batches.batches) {
            for (NodeIdx v : batch) {
                auto start = first_walk_of_node[static_cast<std::size_t>(v)];
                if (start == SIZE_MAX) continue;  // isolated in projection
                for (std::size_t k = 0; k < per_node; ++k) {
                    ordered.push_back(std::move(corpus.walks[start + k]));
                }
            }
        }
        corpus.walks = std::move(ordered);
    }

    SkipgramParams sp;
    sp.dim = cfg.dim;
    sp.window = cfg.sg_window;
    sp.negatives = cfg.sg_negatives;
    sp.epochs = cfg.sg_epochs;
    sp.learning_rate = cfg.sg_learning_rate;
    sp.seed = derive_seed(cfg.seed, "skipgram");

    EmbedData out;
    out.walk_count = corpus.walks.size();
    out.token_count = corpus.token_count();
    if (corpus.walks.empty()) {
        // Edgeless projection (degenerate cleaning output): no walk
        // evidence, every node keeps the zero vector.
        out.table.meta = sp;
        out.table.vectors = FeatureMatrix(graph.graph.node_count(), sp.dim, 0.0);
        for (std::size_t v = 0; v < graph.graph.node_count(); ++v) {
            out.table.absent_nodes.push_back(static_cast<NodeIdx>(v));
        }
        return out;
    }
    out.table = train_skipgram(corpus, graph.graph.node_count(), sp);
    return out;
}

FeatureData stage_features(const CleanedData& cleaned, const GraphData& graph,
                           const EmbedData& embed, const RunConfig& cfg) {
    FeatureData out;
    double w_cent = cfg.use_centrality ? cfg.w_cent : 0.0;
    auto m0 = concat_features(embed.table, graph.cent, cfg.w_emb, w_cent, cfg.feature_mix);

    // Co-preference hyperedges come from the concatenated features; they
    // extend the message-passing graph beyond the co-interaction projection.
    Hypergraph merged = graph.hyper;
    if (cfg.co_preference_pass) {
        auto co_pref = build_co_preference(graph.hyper.nodes(), m0, cfg.gamma);
        out.co_preference_edges = co_pref.hypergraph.edge_count();
        std::vector<Hyperedge> edges = graph.hyper.edges();
        for (const auto& e : co_pref.hypergraph.edges()) edges.push_back(e);
        IdMap nodes;
        for (const auto& name : graph.hyper.nodes().names()) nodes.intern(name);
        merged = Hypergraph(std::move(nodes), std::move(edges));
    }
    out.message_graph = project_hypergraph(merged);

    PropagationConfig pc;
    pc.variant = parse_variant(cfg.variant);
    pc.layers = cfg.layers;
    pc.seed = derive_seed(cfg.seed, "propagation");

    // Rounds of the batched sweep: re-apply the L-layer operator until the
    // per-round feature delta drops below eps or max_iter rounds ran.
    FeatureMatrix current = std::move(m0);
    double delta = 0.0;
    int rounds = 0;
    for (int r = 0; r < std::max(1, cfg.max_iter); ++r) {
        auto states = propagate(current, out.message_graph, pc);
        const auto& next = states.back().features;
        delta = 0.0;
        for (std::size_t i = 0; i < next.data().size(); ++i) {
            delta = std::max(delta, std::abs(next.data()[i] - current.data()[i]));
        }
        current = next;
        ++rounds;
        if (delta < graph.batches.eps) break;
    }
    out.propagation_rounds = rounds;
    out.final_round_delta = delta;

    // Expand into cleaned-store user space; users dropped as isolated get
    // zero rows (no walk evidence).
    FeatureMatrix expanded(cleaned.store.user_count(), current.dimension(), 0.0);
    for (std::size_t v = 0; v < current.row_count(); ++v) {
        auto c = static_cast<std::size_t>(graph.hyper_to_clean[v]);
        auto src = current.row(v);
        auto dst = expanded.row(c);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    out.features = std::move(expanded);
    return out;
}

EvalData stage_evaluate(const LoadedData& loaded, const CleanedData& cleaned,
                        const GraphData& graph, const FeatureData& features,
                        const RunConfig& cfg) {
    (void)graph;
    EvalData out;

    SimilarityConfig sim;
    sim.metric = parse_metric(cfg.metric);
    sim.neighborhood = cfg.neighbors;

    const auto& full = loaded.full;
    const auto& train_clean = cleaned.store;

    // Popularity of items in the cleaned train store (by clean item idx).
    std::vector<double> popularity(train_clean.item_count(), 0.0);
    for (const auto& e : train_clean.entries()) {
        popularity[static_cast<std::size_t>(e.item)] += 1.0;
    }

    std::vector<std::vector<NodeIdx>> rankings_cys;
    std::vector<std::vector<NodeIdx>> rankings_pop;
    std::vector<std::vector<NodeIdx>> relevant;

    std::vector<std::size_t> evaluated_users;
    for (std::size_t u0 = 0; u0 < full.user_count(); ++u0) {
        if (loaded.split.held_out[u0] >= 0) evaluated_users.push_back(u0);
    }

    std::vector<std::vector<NodeIdx>> cand_lists(evaluated_users.size());
    std::vector<std::vector<NodeIdx>> cys_lists(evaluated_users.size());
    std::vector<std::vector<NodeIdx>> pop_lists(evaluated_users.size());
    std::vector<std::uint8_t> unmapped(evaluated_users.size(), 0);

    parallel_for(static_cast<std::ptrdiff_t>(evaluated_users.size()), [&](std::ptrdiff_t idx) {
        auto u0 = evaluated_users[static_cast<std::size_t>(idx)];
        const auto& uname = full.users().name(static_cast<NodeIdx>(u0));
        auto uc = train_clean.users().find(uname);
        if (!uc) {
            unmapped[static_cast<std::size_t>(idx)] = 1;
            return;
        }

        // Candidates: held-out item plus sampled negatives; with
        // negatives = 0 the ranking runs over every item unseen in training.
        // Mapped into the cleaned item space (-1 when cleaning dropped the
        // item entirely).
        std::vector<NodeIdx> candidates_full;
        candidates_full.push_back(loaded.split.held_out[u0]);
        if (cfg.negatives == 0) {
            for (std::size_t i = 0; i < full.item_count(); ++i) {
                auto item = static_cast<NodeIdx>(i);
                if (item == loaded.split.held_out[u0]) continue;
                if (!loaded.split.train.has_rated(static_cast<NodeIdx>(u0), item)) {
                    candidates_full.push_back(item);
                }
            }
        } else {
            for (auto neg : loaded.split.negatives[u0]) candidates_full.push_back(neg);
        }

        std::vector<NodeIdx> candidates_clean(candidates_full.size(), -1);
        for (std::size_t c = 0; c < candidates_full.size(); ++c) {
            auto item_name = full.items().name(candidates_full[c]);
            auto ic = train_clean.items().find(item_name);
            if (ic) candidates_clean[c] = *ic;
        }

        bool undef = false;
        auto nbrs = neighbors(*uc, features.features, train_clean, sim, &undef);
        auto scores = score_candidates(nbrs, train_clean, cfg.floor(), candidates_clean);

        // Rank candidate positions by score (desc), ties toward the lower
        // full-item index.
        std::vector<std::size_t> order(candidates_full.size());
        for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
        auto rank_by = [&](const std::vector<double>& s) {
            auto ord = order;
            std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
                if (s[a] != s[b]) return s[a] > s[b];
                return candidates_full[a] < candidates_full[b];
            });
            std::vector<NodeIdx> ranked(ord.size());
            for (std::size_t c = 0; c < ord.size(); ++c) ranked[c] = candidates_full[ord[c]];
            return ranked;
        };
        cys_lists[static_cast<std::size_t>(idx)] = rank_by(scores);

        std::vector<double> pop_scores(candidates_full.size(), 0.0);
        for (std::size_t c = 0; c < candidates_full.size(); ++c) {
            if (candidates_clean[c] >= 0) {
                pop_scores[c] = popularity[static_cast<std::size_t>(candidates_clean[c])];
            }
        }
        pop_lists[static_cast<std::size_t>(idx)] = rank_by(pop_scores);
        cand_lists[static_cast<std::size_t>(idx)] = {loaded.split.held_out[u0]};
    });

    std::vector<std::vector<double>> gains;
    for (std::size_t idx = 0; idx < evaluated_users.size(); ++idx) {
        if (unmapped[idx]) {
            out.users_unmapped++;
            continue;
        }
        if (cfg.graded_ndcg) {
            auto u0 = static_cast<NodeIdx>(evaluated_users[idx]);
            auto rating = full.rating(u0, loaded.split.held_out[static_cast<std::size_t>(u0)]);
            gains.push_back({rating.value_or(1.0)});
        }
        rankings_cys.push_back(std::move(cys_lists[idx]));
        rankings_pop.push_back(std::move(pop_lists[idx]));
        relevant.push_back(std::move(cand_lists[idx]));
    }

    if (cfg.graded_ndcg) {
        out.cys = compute_metrics_graded(rankings_cys, relevant, gains, cfg.k_list);
        out.popularity = compute_metrics_graded(rankings_pop, relevant, gains, cfg.k_list);
    } else {
        out.cys = compute_metrics(rankings_cys, relevant, cfg.k_list);
        out.popularity = compute_metrics(rankings_pop, relevant, cfg.k_list);
    }
    return out;
}

Json metrics_to_json(const MetricsReport& m) {
    Json j;
    j["users_evaluated"] = m.users_evaluated;
    j["users_skipped"] = m.users_skipped;
    Json per_k;
    for (const auto& [k, v] : m.at_k) {
        per_k[std::to_string(k)] = {{"hr", v.hr},
                                    {"mrr", v.mrr},
                                    {"ndcg", v.ndcg},
                                    {"precision", v.precision},
                                    {"recall", v.recall}};
    }
    j["metrics"] = per_k;
    return j;
}

Json run_pipeline(const RunConfig& cfg, bool write_artifacts) {
    namespace fs = std::filesystem;
    using Clock = std::chrono::steady_clock;

    if (cfg.workers > 0) set_workers(cfg.workers);

    Json timings;
    auto timed = [&](const char* name, auto&& fn) {
        auto t0 = Clock::now();
        auto result = fn();
        auto t1 = Clock::now();
        timings[name] = std::chrono::duration<double>(t1 - t0).count();
        return result;
    };

    auto loaded = timed("load", [&] { return stage_load(cfg); });
    auto cleaned = timed("clean", [&] { return stage_clean(loaded, cfg); });
    auto graph = timed("graph", [&] { return stage_graph(cleaned, cfg); });
    auto embed = timed("embed", [&] { return stage_embed(graph, cfg); });
    auto features = timed("features", [&] { return stage_features(cleaned, graph, embed, cfg); });
    auto eval = timed("evaluate", [&] {
        return stage_evaluate(loaded, cleaned, graph, features, cfg);
    });

    Json report;
    report["config"] = config_to_json(cfg);
    report["protocol"] = {
        {"split", cfg.split},
        {"negatives", cfg.negatives},
        {"k_list", cfg.k_list},
    };
    report["preprocess"] = {
        {"removed_duplicates", cleaned.report.removed_duplicates},
        {"removed_isolated", graph.isolated_removed},
        {"flagged_anomalies", cleaned.flagged.size()},
        {"kept_entries", cleaned.report.kept_entries},
        {"trust_pairs", cleaned.trust.size()},
        {"excluded_single_interaction_users", loaded.split.excluded_users},
    };
    report["graph"] = {
        {"users_full", loaded.full.user_count()},
        {"items_full", loaded.full.item_count()},
        {"entries_full", loaded.full.entry_count()},
        {"users_clean", cleaned.store.user_count()},
        {"items_clean", cleaned.store.item_count()},
        {"entries_clean", cleaned.store.entry_count()},
        {"hyperedges_co_interaction", graph.hyper.edge_count()},
        {"hyperedges_co_preference", features.co_preference_edges},
        {"hyper_nodes", graph.hyper.node_count()},
        {"projected_edges", graph.graph.edge_count()},
        {"message_graph_edges", features.message_graph.edge_count()},
        {"social_nodes", loaded.social ? loaded.social->node_count() : 0},
        {"social_edges", loaded.social ? loaded.social->edge_count() : 0},
        {"social_self_loops_dropped", loaded.social ? loaded.social->self_loops_dropped() : 0},
    };
    report["batches"] = {
        {"n_batches", graph.batches.n_batches},
        {"max_iter", graph.batches.max_iter},
        {"eps", graph.batches.eps},
    };
    report["embedding"] = {
        {"dim", cfg.dim},
        {"walks", embed.walk_count},
        {"tokens", embed.token_count},
        {"absent_nodes", embed.table.absent_nodes.size()},
    };
    report["propagation"] = {
        {"variant", cfg.variant},
        {"layers", cfg.layers},
        {"rounds", features.propagation_rounds},
        {"final_round_delta", features.final_round_delta},
    };
    report["evaluation"] = metrics_to_json(eval.cys);
    report["evaluation"]["users_unmapped"] = eval.users_unmapped;
    report["baselines"]["popularity"] = metrics_to_json(eval.popularity);
    report["seed"] = cfg.seed;

    if (write_artifacts) {
        fs::create_directories(cfg.out_dir);
        std::ofstream(fs::path(cfg.out_dir) / "report.json") << report.dump(2) << '\n';
        std::ofstream(fs::path(cfg.out_dir) / "timings.json") << timings.dump(2) << '\n';
        save_id_map(fs::path(cfg.out_dir) / "users.txt", cleaned.store.users());
        save_id_map(fs::path(cfg.out_dir) / "items.txt", cleaned.store.items());
        save_features(fs::path(cfg.out_dir) / "features.txt", cleaned.store.users(),
                      features.features);

        std::ofstream cent_csv(fs::path(cfg.out_dir) / "centrality.csv");
        cent_csv << "node,degree,closeness,betweenness,deg_norm,close_norm,betw_norm\n";
        cent_csv.precision(17);
        for (std::size_t v = 0; v < graph.hyper.node_count(); ++v) {
            cent_csv << graph.hyper.nodes().name(static_cast<NodeIdx>(v)) << ',' << graph.cent.degree[v]
                     << ',' << graph.cent.closeness[v] << ',' << graph.cent.betweenness[v] << ','
                     << graph.cent.degree_norm[v] << ',' << graph.cent.closeness_norm[v] << ','
                     << graph.cent.betweenness_norm[v] << '\n';
        }

        SimilarityConfig sim;
        sim.metric = parse_metric(cfg.metric);
        sim.neighborhood = cfg.neighbors;
        std::size_t top = cfg.k_list.empty() ? 10 : static_cast<std::size_t>(
                                                        *std::max_element(cfg.k_list.begin(),
                                                                          cfg.k_list.end()));
        auto recs = recommend_all(features.features, cleaned.store, sim, cfg.floor(), top);
        std::ofstream rec_out(fs::path(cfg.out_dir) / "recommendations.txt");
        rec_out.precision(17);
        for (std::size_t u = 0; u < recs.top_items.size(); ++u) {
            int rank = 1;
            for (const auto& si : recs.top_items[u]) {
                rec_out << cleaned.store.users().name(static_cast<NodeIdx>(u)) << ' '
                        << cleaned.store.items().name(si.item) << ' ' << si.score << ' ' << rank++
                        << '\n';
            }
        }
    }
    return report;
}

}  // namespace cys
