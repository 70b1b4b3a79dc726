#include <CLI11.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "cys/benchfns.hpp"
#include "cys/dynamics.hpp"
#include "cys/error.hpp"
#include "cys/io.hpp"
#include "cys/oracles.hpp"
#include "cys/parallel.hpp"
#include "cys/pipeline.hpp"
#include "cys/rng.hpp"
#include "cys/sweep.hpp"

namespace fs = std::filesystem;
using cys::Json;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    int workers = 0;
    std::string out_dir;
};

cys::RunConfig resolve_config(const GlobalOpts& g) {
    cys::RunConfig cfg;
    if (!g.config_path.empty()) cfg = cys::load_config_file(g.config_path);
    if (g.seed) cfg.seed = *g.seed;
    if (g.workers > 0) cfg.workers = g.workers;
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    if (cfg.workers > 0) cys::set_workers(cfg.workers);
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw cys::Error("cannot write " + path.string());
    out << text;
}

cys::Digraph load_digraph(const std::string& path, cys::IdMap& ids) {
    std::ifstream in(path);
    if (!in) throw cys::ParseError("cannot open edge file: " + path);
    std::vector<std::pair<cys::NodeIdx, cys::NodeIdx>> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream iss(line);
        std::string a, b;
        if (line.empty() || line[0] == '#') continue;
        if (!(iss >> a >> b)) {
            throw cys::ParseError("edge file line " + std::to_string(lineno) +
                                  ": expected 'from to'");
        }
        edges.emplace_back(ids.intern(a), ids.intern(b));
    }
    cys::Digraph g(ids.size());
    for (auto [a, b] : edges) g.add_edge(a, b);
    g.finalize();
    return g;
}

cys::Digraph random_digraph(std::size_t n, double extra, std::uint64_t seed) {
    cys::Digraph g(n);
    cys::Rng rng(seed);
    std::vector<cys::NodeIdx> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<cys::NodeIdx>(i);
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.next_below(i)]);
    for (std::size_t i = 0; i < n; ++i) g.add_edge(perm[i], perm[(i + 1) % n]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && rng.next_double() < extra) {
                g.add_edge(static_cast<cys::NodeIdx>(i), static_cast<cys::NodeIdx>(j));
            }
        }
    }
    g.finalize();
    return g;
}

std::vector<double> initial_preferences(const std::string& file, std::size_t n,
                                        std::uint64_t seed) {
    std::vector<double> p0(n);
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw cys::ParseError("cannot open p0 file: " + file);
        for (auto& v : p0) {
            if (!(in >> v)) throw cys::ParseError("p0 file has fewer than n values");
        }
        return p0;
    }
    cys::Rng rng(cys::derive_seed(seed, "p0"));
    for (auto& v : p0) v = rng.next_double();
    return p0;
}

std::string trajectory_csv(const cys::SimulationResult& result, int layer_count) {
    std::ostringstream out;
    out << "t,spread,consensus_estimate";
    for (int l = 0; l < layer_count; ++l) out << ",layer" << l << "_spread";
    if (layer_count > 0) out << ",inter_layer_spread";
    out << '\n';
    out.precision(17);
    for (const auto& pt : result.trajectory) {
        out << pt.t << ',' << pt.spread << ',' << pt.consensus_estimate;
        for (double s : pt.layer_spreads) out << ',' << s;
        if (layer_count > 0) out << ',' << pt.inter_layer_spread;
        out << '\n';
    }
    return out.str();
}

Json verdict_json(const cys::SimulationResult& result, const cys::Equilibrium& eq) {
    Json j;
    j["converged"] = result.converged;
    j["steps"] = result.steps;
    j["pi"] = eq.pi;
    j["component"] = eq.component;
    j["predicted_consensus"] = result.predicted;
    j["achieved_consensus"] = result.achieved;
    j["max_consensus_error"] = result.max_consensus_error;
    j["verdict_ok"] = result.verdict_ok;
    return j;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"CyberSwarm hypergraph recommendation pipeline"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config_path, "flat key=value config file");
    app.add_option("--seed", g.seed, "global seed (overrides config)");
    app.add_option("--workers", g.workers, "worker threads (0 = all cores)");
    app.add_option("--out", g.out_dir, "output directory");

    std::string ratings, trust;
    auto add_data_opts = [&](CLI::App* cmd, bool require_ratings = true) {
        auto* opt = cmd->add_option("--ratings", ratings, "ratings file (user item rating [ts])");
        if (require_ratings) opt->required();
        cmd->add_option("--trust", trust, "trust file (source target [weight])");
    };

    // --- preprocess ---
    auto* cmd_pre = app.add_subcommand("preprocess", "clean the interaction store");
    double threshold = 1.0, phi = 0.9;
    std::string dedup = "keep-max";
    add_data_opts(cmd_pre);
    cmd_pre->add_option("--threshold", threshold, "rating threshold t");
    cmd_pre->add_option("--phi", phi, "anomaly cutoff");
    cmd_pre->add_option("--dedup", dedup, "keep-max|keep-last");

    // --- hypergraph ---
    auto* cmd_hyper = app.add_subcommand("hypergraph", "build the co-interaction hypergraph");
    std::optional<std::int64_t> window;
    add_data_opts(cmd_hyper);
    cmd_hyper->add_option("--window", window, "co-interaction time window (seconds)");
    cmd_hyper->add_option("--threshold", threshold, "rating threshold t");

    // --- centrality ---
    auto* cmd_cent = app.add_subcommand("centrality", "degree/closeness/betweenness CSV");
    add_data_opts(cmd_cent);
    cmd_cent->add_option("--threshold", threshold, "rating threshold t");

    // --- embed ---
    auto* cmd_embed = app.add_subcommand("embed", "random-walk embeddings");
    std::size_t dim = 64;
    int walk_len = 20, walks_per_node = 10, sg_window = 5, sg_negatives = 5, sg_epochs = 5;
    double p = 1.0, q = 1.0;
    add_data_opts(cmd_embed);
    cmd_embed->add_option("--dim", dim);
    cmd_embed->add_option("--walk-len", walk_len);
    cmd_embed->add_option("--walks-per-node", walks_per_node);
    cmd_embed->add_option("--p", p);
    cmd_embed->add_option("--q", q);
    cmd_embed->add_option("--window", sg_window);
    cmd_embed->add_option("--negatives", sg_negatives);
    cmd_embed->add_option("--epochs", sg_epochs);

    // --- propagate ---
    auto* cmd_prop = app.add_subcommand("propagate", "message-passing over the features");
    std::string variant = "gat";
    int layers = 2;
    add_data_opts(cmd_prop);
    cmd_prop->add_option("--variant", variant, "gat|gcn|gin|gin-sl");
    cmd_prop->add_option("--layers", layers);

    // --- recommend ---
    auto* cmd_rec = app.add_subcommand("recommend", "top-K recommendations per user");
    std::string metric = "cosine";
    std::size_t neighborhood = 50, topk = 10;
    add_data_opts(cmd_rec);
    cmd_rec->add_option("--metric", metric, "euclidean|jaccard|cosine");
    cmd_rec->add_option("--neighbors", neighborhood);
    cmd_rec->add_option("--topk", topk);

    // --- evaluate ---
    auto* cmd_eval = app.add_subcommand("evaluate", "leave-one-out ranking metrics");
    std::string split_kind = "auto";
    int negatives = 99;
    add_data_opts(cmd_eval);
    cmd_eval->add_option("--split", split_kind, "auto|by-time|random");
    cmd_eval->add_option("--negatives", negatives);
    cmd_eval->add_option("--metric", metric);
    cmd_eval->add_option("--variant", variant);

    // --- sweep ---
    auto* cmd_sweep = app.add_subcommand("sweep", "ablation / hyperparameter grid");
    std::vector<std::string> axes_names;
    add_data_opts(cmd_sweep);
    cmd_sweep
        ->add_option("--axis", axes_names,
                     "axis: centrality|variant|threshold|metric|batch|dim|lambda|table")
        ->required();
    cmd_sweep->add_option("--split", split_kind, "auto|by-time|random");

    // --- run ---
    auto* cmd_run = app.add_subcommand("run", "full pipeline");
    add_data_opts(cmd_run, false);
    cmd_run->add_option("--split", split_kind, "auto|by-time|random");
    cmd_run->add_option("--threshold", threshold);
    cmd_run->add_option("--variant", variant);
    cmd_run->add_option("--metric", metric);
    cmd_run->add_option("--dim", dim);

    // --- simulate-dcse ---
    auto* cmd_dcse = app.add_subcommand("simulate-dcse", "flat consensus dynamics verifier");
    std::string edges_file, p0_file;
    std::size_t random_nodes = 20;
    double random_extra = 0.2, eta = 0.5;
    std::vector<double> lambda_mix{1.0 / 3, 1.0 / 3, 1.0 / 3};
    double tol = 1e-8;
    std::int64_t t_max = 100000;
    cmd_dcse->add_option("--edges", edges_file, "directed edge list file (from to)");
    cmd_dcse->add_option("--random-nodes", random_nodes, "random graph size (no --edges)");
    cmd_dcse->add_option("--random-extra", random_extra, "extra arc probability");
    cmd_dcse->add_option("--eta", eta);
    cmd_dcse->add_option("--lambda", lambda_mix, "degree closeness betweenness mix")->expected(3);
    cmd_dcse->add_option("--p0", p0_file, "initial preferences file (one value per line)");
    cmd_dcse->add_option("--tol", tol);
    cmd_dcse->add_option("--tmax", t_max);
    bool lambda_grid = false;
    cmd_dcse->add_flag("--lambda-grid", lambda_grid,
                       "sweep the centrality mix over {0.1,0.3,0.6,0.9}^3");

    // --- simulate-cehs ---
    auto* cmd_cehs = app.add_subcommand("simulate-cehs", "hierarchical consensus verifier");
    std::vector<std::size_t> layer_sizes{4, 4};
    double rho_v = 0.2, h_prob = 0.5, v_prob = 0.3;
    cmd_cehs->add_option("--layer-sizes", layer_sizes, "nodes per layer")->expected(-1);
    cmd_cehs->add_option("--rho", rho_v, "vertical influence share");
    cmd_cehs->add_option("--h-prob", h_prob, "horizontal edge probability");
    cmd_cehs->add_option("--v-prob", v_prob, "vertical edge probability");
    cmd_cehs->add_option("--eta", eta);
    cmd_cehs->add_option("--lambda", lambda_mix)->expected(3);
    cmd_cehs->add_option("--p0", p0_file);
    cmd_cehs->add_option("--tol", tol);
    cmd_cehs->add_option("--tmax", t_max);

    // --- bench-fns ---
    auto* cmd_bench = app.add_subcommand("bench-fns", "benchmark objective optimizer harness");
    std::string fn_name = "all";
    int restarts = 100;
    std::size_t budget = 4000;
    cmd_bench->add_option("--fn", fn_name, "function name or 'all'");
    cmd_bench->add_option("--restarts", restarts);
    cmd_bench->add_option("--budget", budget, "objective evaluations per restart");

    // --- oracle (hidden) ---
    auto* cmd_oracle = app.add_subcommand("oracle", "regenerate golden reference values");
    cmd_oracle->group("");  // hidden
    std::string oracle_what = "minima";
    cmd_oracle->add_option("--what", oracle_what, "minima|centrality|equilibrium");
    cmd_oracle->add_option("--edges", edges_file, "edge list for centrality/equilibrium");
    cmd_oracle->add_option("--eta", eta);

    CLI11_PARSE(app, argc, argv);

    auto cfg = resolve_config(g);
    if (!ratings.empty()) cfg.ratings_path = ratings;
    if (!trust.empty()) cfg.trust_path = trust;
    const fs::path out_dir = cfg.out_dir;

    if (app.got_subcommand(cmd_pre)) {
        cfg.threshold = threshold;
        cfg.anomaly_phi = phi;
        cfg.dedup = dedup;
        auto loaded = cys::stage_load(cfg);
        auto cleaned = cys::stage_clean(loaded, cfg);
        fs::create_directories(out_dir);
        cys::save_interactions(out_dir / "cleaned_ratings.txt", cleaned.store);
        Json j;
        j["preprocess"] = {{"removed_duplicates", cleaned.report.removed_duplicates},
                           {"flagged_anomalies", cleaned.flagged.size()},
                           {"kept_entries", cleaned.report.kept_entries},
                           {"trust_pairs", cleaned.trust.size()}};
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    if (app.got_subcommand(cmd_hyper) || app.got_subcommand(cmd_cent)) {
        cfg.threshold = threshold;
        cfg.window = window;
        auto loaded = cys::stage_load(cfg);
        auto cleaned = cys::stage_clean(loaded, cfg);
        auto graph = cys::stage_graph(cleaned, cfg);
        fs::create_directories(out_dir);
        if (app.got_subcommand(cmd_hyper)) {
            std::ofstream edges(out_dir / "hyperedges.txt");
            for (const auto& e : graph.hyper.edges()) {
                edges << (e.kind == cys::HyperedgeKind::CoInteraction ? "co-interaction"
                                                                      : "co-preference");
                if (e.anchor_item) {
                    edges << ' ' << cleaned.store.items().name(*e.anchor_item);
                } else {
                    edges << " -";
                }
                for (auto m : e.members) edges << ' ' << graph.hyper.nodes().name(m);
                edges << '\n';
            }
            Json j;
            j["nodes"] = graph.hyper.node_count();
            j["hyperedges"] = graph.hyper.edge_count();
            j["isolated_removed"] = graph.isolated_removed;
            j["projected_edges"] = graph.graph.edge_count();
            std::cout << j.dump(2) << '\n';
        } else {
            std::ostringstream csv;
            csv << "node,degree,closeness,betweenness,deg_norm,close_norm,betw_norm\n";
            csv.precision(17);
            for (std::size_t v = 0; v < graph.hyper.node_count(); ++v) {
                csv << graph.hyper.nodes().name(static_cast<cys::NodeIdx>(v)) << ','
                    << graph.cent.degree[v] << ',' << graph.cent.closeness[v] << ','
                    << graph.cent.betweenness[v] << ',' << graph.cent.degree_norm[v] << ','
                    << graph.cent.closeness_norm[v] << ',' << graph.cent.betweenness_norm[v]
                    << '\n';
            }
            write_text(out_dir / "centrality.csv", csv.str());
            std::cout << csv.str();
        }
        return 0;
    }

    if (app.got_subcommand(cmd_embed) || app.got_subcommand(cmd_prop)) {
        cfg.dim = dim;
        cfg.walk_length = walk_len;
        cfg.walks_per_node = walks_per_node;
        cfg.p = p;
        cfg.q = q;
        cfg.sg_window = sg_window;
        cfg.sg_negatives = sg_negatives;
        cfg.sg_epochs = sg_epochs;
        cfg.variant = variant;
        cfg.layers = layers;
        auto loaded = cys::stage_load(cfg);
        auto cleaned = cys::stage_clean(loaded, cfg);
        auto graph = cys::stage_graph(cleaned, cfg);
        auto embed = cys::stage_embed(graph, cfg);
        fs::create_directories(out_dir);
        if (app.got_subcommand(cmd_embed)) {
            cys::save_features(out_dir / "embedding.txt", graph.hyper.nodes(), embed.table.vectors);
            std::cout << "wrote " << (out_dir / "embedding.txt").string() << " ("
                      << embed.table.vectors.row_count() << " x " << embed.table.vectors.dimension()
                      << ")\n";
        } else {
            auto features = cys::stage_features(cleaned, graph, embed, cfg);
            cys::save_features(out_dir / "features.txt", cleaned.store.users(), features.features);
            std::cout << "wrote " << (out_dir / "features.txt").string() << " ("
                      << features.features.row_count() << " x " << features.features.dimension()
                      << ")\n";
        }
        return 0;
    }

    if (app.got_subcommand(cmd_rec)) {
        cfg.metric = metric;
        cfg.neighbors = neighborhood;
        auto loaded = cys::stage_load(cfg);
        auto cleaned = cys::stage_clean(loaded, cfg);
        auto graph = cys::stage_graph(cleaned, cfg);
        auto embed = cys::stage_embed(graph, cfg);
        auto features = cys::stage_features(cleaned, graph, embed, cfg);
        cys::SimilarityConfig sim;
        sim.metric = cys::parse_metric(cfg.metric);
        sim.neighborhood = cfg.neighbors;
        auto recs = cys::recommend_all(features.features, cleaned.store, sim, cfg.floor(), topk);
        std::cout.precision(17);
        for (std::size_t u = 0; u < recs.top_items.size(); ++u) {
            int rank = 1;
            for (const auto& si : recs.top_items[u]) {
                std::cout << cleaned.store.users().name(static_cast<cys::NodeIdx>(u)) << ' '
                          << cleaned.store.items().name(si.item) << ' ' << si.score << ' '
                          << rank++ << '\n';
            }
        }
        return 0;
    }

    if (app.got_subcommand(cmd_eval)) {
        cfg.split = split_kind;
        cfg.negatives = negatives;
        cfg.metric = metric;
        cfg.variant = variant;
        auto loaded = cys::stage_load(cfg);
        auto cleaned = cys::stage_clean(loaded, cfg);
        auto graph = cys::stage_graph(cleaned, cfg);
        auto embed = cys::stage_embed(graph, cfg);
        auto features = cys::stage_features(cleaned, graph, embed, cfg);
        auto eval = cys::stage_evaluate(loaded, cleaned, graph, features, cfg);
        Json j = cys::metrics_to_json(eval.cys);
        j["popularity_baseline"] = cys::metrics_to_json(eval.popularity);
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    if (app.got_subcommand(cmd_sweep)) {
        cfg.split = split_kind;
        cys::SweepAxes axes;
        for (const auto& name : axes_names) {
            if (name == "table") {
                axes = cys::table_axes();
            } else if (name == "lambda") {
                axes.lambda_grid = cys::lambda_axes().lambda_grid;
            } else if (name == "centrality") {
                axes.use_centrality = std::vector<bool>{true, false};
            } else if (name == "variant") {
                axes.variants = std::vector<std::string>{"gat", "gcn", "gin", "gin-sl"};
            } else if (name == "threshold") {
                axes.thresholds = std::vector<double>{1, 2, 3, 4, 5};
            } else if (name == "metric") {
                axes.metrics = std::vector<std::string>{"euclidean", "jaccard", "cosine"};
            } else if (name == "batch") {
                axes.batch_sizes = std::vector<int>{16, 32, 64, 128, 256, 512};
            } else if (name == "dim") {
                axes.dims = std::vector<std::size_t>{8, 16, 32, 64, 128, 256};
            } else {
                throw cys::ConfigError("unknown sweep axis: " + name);
            }
        }
        auto result = cys::run_sweep(cfg, axes, &std::cerr);
        auto csv = cys::sweep_csv(result, cfg.k_list);
        fs::create_directories(out_dir);
        write_text(out_dir / "sweep.csv", csv);
        std::cout << csv;
        return result.failed == 0 ? 0 : 2;
    }

    if (app.got_subcommand(cmd_run)) {
        cfg.split = split_kind;
        auto report = cys::run_pipeline(cfg, true);
        std::cout << report.dump(2) << '\n';
        return 0;
    }

    // config-file dynamics defaults apply when the flags were not given
    if (cmd_dcse->count("--eta") == 0 && cmd_cehs->count("--eta") == 0) eta = cfg.eta;
    if (cmd_cehs->count("--rho") == 0) rho_v = cfg.rho_v;
    if (cmd_dcse->count("--lambda") == 0 && cmd_cehs->count("--lambda") == 0) {
        lambda_mix = {cfg.dynamics_lambda.degree, cfg.dynamics_lambda.closeness,
                      cfg.dynamics_lambda.betweenness};
    }

    if (app.got_subcommand(cmd_dcse)) {
        cys::LambdaMix mix{lambda_mix[0], lambda_mix[1], lambda_mix[2]};
        cys::IdMap ids;
        cys::Digraph graph = edges_file.empty()
                                 ? random_digraph(random_nodes, random_extra, cfg.seed)
                                 : load_digraph(edges_file, ids);
        auto cent = cys::compute_centralities(graph.undirected());

        if (lambda_grid) {
            // one row per centrality-mix cell on the same graph and P(0)
            auto p0g = initial_preferences(p0_file, graph.node_count(), cfg.seed);
            std::ostringstream csv;
            csv << "lambda_degree,lambda_closeness,lambda_betweenness,primitive,converged,"
                   "steps,achieved,predicted,error\n";
            csv.precision(12);
            const std::array<double, 4> values{0.1, 0.3, 0.6, 0.9};
            cys::SimulationOptions gopts;
            gopts.tol = tol;
            gopts.t_max = t_max;
            for (double ld : values) {
                for (double lc : values) {
                    for (double lb : values) {
                        auto wg = cys::build_weights(graph, cent, cys::LambdaMix{ld, lc, lb}, eta);
                        bool primitive = cys::check_primitive(wg) == cys::Primitivity::Primitive;
                        auto r = cys::simulate_dcse(wg, p0g, gopts);
                        csv << ld << ',' << lc << ',' << lb << ',' << (primitive ? 1 : 0) << ','
                            << (r.converged ? 1 : 0) << ',' << r.steps << ',' << r.achieved[0]
                            << ',' << r.predicted[0] << ',' << r.max_consensus_error << '\n';
                    }
                }
            }
            fs::create_directories(out_dir);
            write_text(out_dir / "lambda_grid.csv", csv.str());
            std::cout << csv.str();
            return 0;
        }

        auto w = cys::build_weights(graph, cent, mix, eta);
        auto p0 = initial_preferences(p0_file, graph.node_count(), cfg.seed);

        cys::SimulationOptions opts;
        opts.tol = tol;
        opts.t_max = t_max;
        auto result = cys::simulate_dcse(w, p0, opts);
        auto eq = cys::equilibrium(w);

        fs::create_directories(out_dir);
        write_text(out_dir / "trajectory.csv", trajectory_csv(result, 0));
        auto verdict = verdict_json(result, eq);
        auto primitivity = cys::check_primitive(w);
        verdict["primitive"] = primitivity == cys::Primitivity::Primitive
                                   ? "primitive"
                                   : (primitivity == cys::Primitivity::NotPrimitive
                                          ? "not-primitive"
                                          : "undetermined");
        write_text(out_dir / "verdict.json", verdict.dump(2) + "\n");
        std::cout << verdict.dump(2) << '\n';
        return result.converged ? 0 : 2;
    }

    if (app.got_subcommand(cmd_cehs)) {
        cys::LambdaMix mix{lambda_mix[0], lambda_mix[1], lambda_mix[2]};
        cys::LayeredGraph lg;
        lg.layer_count = static_cast<int>(layer_sizes.size());
        for (std::size_t l = 0; l < layer_sizes.size(); ++l) {
            for (std::size_t k = 0; k < layer_sizes[l]; ++k) {
                lg.layer.push_back(static_cast<int>(l));
            }
        }
        lg.node_count = lg.layer.size();
        lg.rho_v = rho_v;
        cys::Rng rng(cys::derive_seed(cfg.seed, "cehs-graph"));
        // ring inside each layer keeps it connected; extra random horizontal
        // edges on top; random vertical couplings with a guaranteed fallback
        std::size_t base = 0;
        for (std::size_t l = 0; l < layer_sizes.size(); ++l) {
            auto sz = layer_sizes[l];
            for (std::size_t k = 0; k + 1 < sz; ++k) {
                lg.horizontal_edges.emplace_back(static_cast<cys::NodeIdx>(base + k),
                                                 static_cast<cys::NodeIdx>(base + k + 1));
            }
            if (sz > 2) {
                lg.horizontal_edges.emplace_back(static_cast<cys::NodeIdx>(base + sz - 1),
                                                 static_cast<cys::NodeIdx>(base));
            }
            for (std::size_t a = 0; a < sz; ++a) {
                for (std::size_t b = a + 2; b < sz; ++b) {
                    if (rng.next_double() < h_prob) {
                        lg.horizontal_edges.emplace_back(static_cast<cys::NodeIdx>(base + a),
                                                         static_cast<cys::NodeIdx>(base + b));
                    }
                }
            }
            base += sz;
        }
        std::size_t base_a = 0;
        for (std::size_t la = 0; la < layer_sizes.size(); ++la) {
            std::size_t base_b = base_a + layer_sizes[la];
            for (std::size_t lb = la + 1; lb < layer_sizes.size(); ++lb) {
                bool any = false;
                for (std::size_t a = 0; a < layer_sizes[la]; ++a) {
                    for (std::size_t b = 0; b < layer_sizes[lb]; ++b) {
                        if (rng.next_double() < v_prob) {
                            lg.vertical_edges.emplace_back(static_cast<cys::NodeIdx>(base_a + a),
                                                           static_cast<cys::NodeIdx>(base_b + b));
                            any = true;
                        }
                    }
                }
                if (!any && rho_v > 0.0) {
                    lg.vertical_edges.emplace_back(static_cast<cys::NodeIdx>(base_a),
                                                   static_cast<cys::NodeIdx>(base_b));
                }
                base_b += layer_sizes[lb];
            }
            base_a += layer_sizes[la];
        }

        cys::CentralityVector cent;
        for (auto* v : {&cent.degree, &cent.closeness, &cent.betweenness, &cent.degree_norm,
                        &cent.closeness_norm, &cent.betweenness_norm}) {
            v->assign(lg.node_count, 1.0);
        }
        auto p0 = initial_preferences(p0_file, lg.node_count, cfg.seed);
        cys::SimulationOptions opts;
        opts.tol = tol;
        opts.t_max = t_max;
        auto result = cys::simulate_cehs(lg, cent, mix, eta, p0, opts);

        fs::create_directories(out_dir);
        write_text(out_dir / "trajectory.csv", trajectory_csv(result.base, lg.layer_count));
        auto mats = cys::build_hierarchical(lg, cent, mix, eta);
        auto eq = cys::equilibrium(mats.combined);
        auto verdict = verdict_json(result.base, eq);
        verdict["layer_consensus"] = result.layer_consensus;
        verdict["intra_layer_spread"] = result.final_intra_layer_spread;
        verdict["inter_layer_spread"] = result.final_inter_layer_spread;
        write_text(out_dir / "verdict.json", verdict.dump(2) + "\n");
        std::cout << verdict.dump(2) << '\n';
        return result.base.converged ? 0 : 2;
    }

    if (app.got_subcommand(cmd_bench)) {
        std::cout << "name,best_value,best_point,evals\n";
        std::cout.precision(12);
        for (const auto& obj : cys::benchmark_objectives()) {
            if (fn_name != "all" && obj.name != fn_name) continue;
            auto r = cys::multistart_optimize(obj, restarts, budget, cfg.seed);
            std::cout << obj.name << ',' << r.best_value << ",\"(";
            for (std::size_t k = 0; k < r.best_point.size(); ++k) {
                std::cout << (k ? " " : "") << r.best_point[k];
            }
            std::cout << ")\"," << r.evaluations << '\n';
        }
        return 0;
    }

    if (app.got_subcommand(cmd_oracle)) {
        Json j;
        if (oracle_what == "minima") {
            for (const auto& obj : cys::benchmark_objectives()) {
                double step = obj.name == "cross-in-tray" ? 0.004 : 0.05;
                double band = obj.name == "cross-in-tray" ? 1e-4 : 0.5;
                auto located = cys::oracle::oracle_grid_minima(obj, step, band);
                Json list = Json::array();
                for (const auto& m : located) {
                    list.push_back({{"point", m.point}, {"value", m.value}});
                }
                j[obj.name] = list;
            }
        } else if (oracle_what == "centrality") {
            cys::IdMap ids;
            auto graph = load_digraph(edges_file, ids);
            auto c = cys::oracle::oracle_centrality(graph.undirected());
            j["degree"] = c.degree;
            j["closeness"] = c.closeness;
            j["betweenness"] = c.betweenness;
        } else if (oracle_what == "equilibrium") {
            cys::IdMap ids;
            auto graph = load_digraph(edges_file, ids);
            auto cent = cys::compute_centralities(graph.undirected());
            auto w = cys::build_weights(graph, cent, cys::LambdaMix{}, eta);
            j["pi"] = cys::oracle::oracle_equilibrium(w);
        } else {
            throw cys::ConfigError("unknown oracle target: " + oracle_what);
        }
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const cys::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 2;
    } catch (const cys::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
