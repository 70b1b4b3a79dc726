#include "cys/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cys/error.hpp"
#include "cys/parallel.hpp"

namespace cys {

void PropagationMatrix::validate(double tol) const {
    for (std::size_t i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            double v = at(i, j);
            if (!std::isfinite(v)) throw NumericError("non-finite propagation weight");
            if (i != j && v < 0.0) throw NumericError("negative off-diagonal propagation weight");
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol) {
            throw NumericError("propagation row " + std::to_string(i) + " sums to " +
                               std::to_string(sum));
        }
    }
}

double PropagationMatrix::row_sum(std::size_t i) const {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += at(i, j);
    return s;
}

Digraph PropagationMatrix::support() const {
    Digraph g(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (i != j && at(i, j) > 0.0) {
                g.add_edge(static_cast<NodeIdx>(i), static_cast<NodeIdx>(j));
            }
        }
    }
    g.finalize();
    return g;
}

PropagationMatrix build_weights(const Digraph& g, const CentralityVector& cent,
                                const LambdaMix& lambda, double eta, WeightBuildReport* report) {
    if (!(eta > 0.0 && eta <= 1.0)) throw RangeError("eta must lie in (0,1]");
    const std::size_t n = g.node_count();
    if (cent.node_count() != n) throw ConfigError("centralities do not cover the graph");

    PropagationMatrix w(n, eta);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& nbrs = g.out_neighbors(static_cast<NodeIdx>(i));
        w.at(i, i) = 1.0 - eta;
        if (nbrs.empty()) {
            w.at(i, i) = 1.0;  // nothing to listen to; hold the preference
            if (report) report->isolated_rows.push_back(static_cast<NodeIdx>(i));
            continue;
        }
        double total = 0.0;
        for (NodeIdx j : nbrs) {
            auto ji = static_cast<std::size_t>(j);
            total += lambda.degree * cent.degree_norm[ji] + lambda.closeness * cent.closeness_norm[ji] +
                     lambda.betweenness * cent.betweenness_norm[ji];
        }
        if (total <= 0.0) {
            if (report) report->uniform_fallback_rows.push_back(static_cast<NodeIdx>(i));
            double u = eta / static_cast<double>(nbrs.size());
            for (NodeIdx j : nbrs) w.at(i, static_cast<std::size_t>(j)) = u;
            continue;
        }
        for (NodeIdx j : nbrs) {
            auto ji = static_cast<std::size_t>(j);
            double raw = lambda.degree * cent.degree_norm[ji] +
                         lambda.closeness * cent.closeness_norm[ji] +
                         lambda.betweenness * cent.betweenness_norm[ji];
            w.at(i, ji) = eta * raw / total;
        }
    }
    return w;
}

std::vector<double> mat_vec(const PropagationMatrix& w, const std::vector<double>& p) {
    if (p.size() != w.size()) throw ConfigError("state size does not match matrix");
    std::vector<double> out(p.size(), 0.0);
    parallel_for(static_cast<std::ptrdiff_t>(w.size()), [&](std::ptrdiff_t i) {
        double s = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) s += w.at(static_cast<std::size_t>(i), j) * p[j];
        out[static_cast<std::size_t>(i)] = s;
    });
    return out;
}

std::vector<double> mat_vec_serial(const PropagationMatrix& w, const std::vector<double>& p) {
    if (p.size() != w.size()) throw ConfigError("state size does not match matrix");
    std::vector<double> out(p.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) s += w.at(i, j) * p[j];
        out[i] = s;
    }
    return out;
}

PreferenceState step(const PreferenceState& state, const PropagationMatrix& w) {
    return PreferenceState{state.t + 1, mat_vec(w, state.p)};
}

namespace {

// Boolean matrix square over the support, n small.
std::vector<bool> bool_multiply(const std::vector<bool>& a, const std::vector<bool>& b,
                                std::size_t n) {
    std::vector<bool> c(n * n, false);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (!a[i * n + k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (b[k * n + j]) c[i * n + j] = true;
            }
        }
    }
    return c;
}

}  // namespace

Primitivity check_primitive_exact(const PropagationMatrix& w, std::size_t cap) {
    const std::size_t n = w.size();
    if (n > cap) return Primitivity::Undetermined;
    if (n == 0) return Primitivity::Undetermined;
    if (n == 1) return w.at(0, 0) > 0.0 ? Primitivity::Primitive : Primitivity::NotPrimitive;

    std::vector<bool> base(n * n, false);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) base[i * n + j] = w.at(i, j) > 0.0;
    }

    // Wielandt: a primitive matrix has strictly positive power at
    // k = n^2 - 2n + 2, and no power of an imprimitive one is positive.
    std::size_t k = n * n - 2 * n + 2;
    std::vector<bool> acc(n * n, false);
    for (std::size_t i = 0; i < n; ++i) acc[i * n + i] = true;  // identity
    auto sq = base;
    std::size_t e = k;
    while (e > 0) {
        if (e & 1U) acc = bool_multiply(acc, sq, n);
        e >>= 1U;
        if (e > 0) sq = bool_multiply(sq, sq, n);
    }
    for (bool b : acc) {
        if (!b) return Primitivity::NotPrimitive;
    }
    return Primitivity::Primitive;
}

Primitivity check_primitive_structural(const PropagationMatrix& w) {
    const std::size_t n = w.size();
    if (n == 0) return Primitivity::Undetermined;
    Digraph g(n);
    bool positive_diagonal = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (w.at(i, i) > 0.0) positive_diagonal = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && w.at(i, j) > 0.0) {
                g.add_edge(static_cast<NodeIdx>(i), static_cast<NodeIdx>(j));
            }
        }
    }
    g.finalize();
    if (!g.strongly_connected()) return Primitivity::NotPrimitive;
    if (positive_diagonal) return Primitivity::Primitive;
    return Primitivity::Undetermined;  // irreducible, period unknown
}

Primitivity check_primitive(const PropagationMatrix& w, std::size_t exact_cap) {
    if (w.size() <= exact_cap) return check_primitive_exact(w, exact_cap);
    return check_primitive_structural(w);
}

namespace {

std::vector<int> weak_components(const PropagationMatrix& w, int& count) {
    const std::size_t n = w.size();
    SimpleGraph und(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && w.at(i, j) > 0.0) {
                und.add_edge(static_cast<NodeIdx>(i), static_cast<NodeIdx>(j));
            }
        }
    }
    und.finalize();
    auto comp = und.components();
    count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    return comp;
}

}  // namespace

double Equilibrium::consensus(const std::vector<double>& p0, int c) const {
    double v = 0.0;
    for (std::size_t i = 0; i < p0.size(); ++i) {
        if (component[i] == c) v += pi[i] * p0[i];
    }
    return v;
}

std::vector<double> Equilibrium::consensus_values(const std::vector<double>& p0) const {
    std::vector<double> out(static_cast<std::size_t>(component_count), 0.0);
    for (int c = 0; c < component_count; ++c) out[static_cast<std::size_t>(c)] = consensus(p0, c);
    return out;
}

Equilibrium equilibrium(const PropagationMatrix& w, double tol, std::size_t max_iterations) {
    const std::size_t n = w.size();
    Equilibrium eq;
    eq.component = weak_components(w, eq.component_count);
    eq.pi.assign(n, 0.0);

    for (int c = 0; c < eq.component_count; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i) {
            if (eq.component[i] == c) members.push_back(i);
        }
        const std::size_t m = members.size();
        std::vector<double> x(m, 1.0 / static_cast<double>(m));
        std::vector<double> next(m, 0.0);
        double residual = std::numeric_limits<double>::infinity();
        for (std::size_t it = 0; it < max_iterations; ++it) {
            // x <- W^T x restricted to the component
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t a = 0; a < m; ++a) {
                for (std::size_t b = 0; b < m; ++b) {
                    next[b] += w.at(members[a], members[b]) * x[a];
                }
            }
            double mass = 0.0;
            for (double v : next) mass += v;
            if (mass <= 0.0) throw NumericError("power iteration lost all mass");
            for (auto& v : next) v /= mass;
            residual = 0.0;
            for (std::size_t k = 0; k < m; ++k) residual = std::max(residual, std::abs(next[k] - x[k]));
            x = next;
            if (residual < tol) break;
        }
        if (!(residual < tol)) {
            throw NumericError("power iteration did not converge; residual " +
                               std::to_string(residual));
        }
        for (std::size_t k = 0; k < m; ++k) eq.pi[members[k]] = x[k];
    }
    return eq;
}

namespace {

double component_spread(const std::vector<double>& p, const std::vector<int>& comp, int count) {
    std::vector<double> lo(static_cast<std::size_t>(count), std::numeric_limits<double>::infinity());
    std::vector<double> hi(static_cast<std::size_t>(count), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto c = static_cast<std::size_t>(comp[i]);
        lo[c] = std::min(lo[c], p[i]);
        hi[c] = std::max(hi[c], p[i]);
    }
    double spread = 0.0;
    for (std::size_t c = 0; c < static_cast<std::size_t>(count); ++c) {
        spread = std::max(spread, hi[c] - lo[c]);
    }
    return spread;
}

double matrix_inf_distance(const PropagationMatrix& a, const PropagationMatrix& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    }
    return d;
}

}  // namespace

SimulationResult simulate_dcse(const PropagationMatrix& w, const std::vector<double>& p0,
                               const SimulationOptions& options) {
    if (p0.size() != w.size()) throw ConfigError("initial preferences do not match matrix size");
    for (double v : p0) {
        if (!std::isfinite(v)) throw NumericError("non-finite initial preference");
    }
    const PropagationMatrix* current = options.schedule ? options.schedule(0) : &w;
    current->validate();

    SimulationResult result;
    auto eq = equilibrium(*current);
    result.component = eq.component;
    result.predicted = eq.consensus_values(p0);

    PreferenceState state{0, p0};
    const PropagationMatrix* previous = current;
    double spread = component_spread(state.p, eq.component, eq.component_count);
    auto record = [&](std::int64_t t) {
        if (options.record_every == 0 ||
            static_cast<std::size_t>(t) % options.record_every != 0) {
            return;
        }
        double mean = 0.0;
        for (double v : state.p) mean += v;
        mean /= state.p.empty() ? 1.0 : static_cast<double>(state.p.size());
        TrajectoryPoint pt{t, spread, mean, {}, 0.0};
        if (options.layer_count > 0) {
            auto k = static_cast<std::size_t>(options.layer_count);
            std::vector<double> lo(k, std::numeric_limits<double>::infinity());
            std::vector<double> hi(k, -std::numeric_limits<double>::infinity());
            std::vector<double> means(k, 0.0);
            std::vector<std::size_t> sizes(k, 0);
            for (std::size_t i = 0; i < state.p.size(); ++i) {
                auto l = static_cast<std::size_t>(options.layers[i]);
                lo[l] = std::min(lo[l], state.p[i]);
                hi[l] = std::max(hi[l], state.p[i]);
                means[l] += state.p[i];
                sizes[l]++;
            }
            pt.layer_spreads.resize(k);
            double mlo = std::numeric_limits<double>::infinity();
            double mhi = -std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < k; ++l) {
                pt.layer_spreads[l] = hi[l] - lo[l];
                means[l] /= static_cast<double>(sizes[l]);
                mlo = std::min(mlo, means[l]);
                mhi = std::max(mhi, means[l]);
            }
            pt.inter_layer_spread = mhi - mlo;
        }
        result.trajectory.push_back(std::move(pt));
    };
    record(0);

    while (state.t < options.t_max && spread >= options.tol) {
        if (options.schedule) {
            current = options.schedule(state.t);
            if (matrix_inf_distance(*current, *previous) > options.smoothness_bound) {
                result.smoothness_violations++;
            }
            previous = current;
        }
        state = step(state, *current);
        spread = component_spread(state.p, eq.component, eq.component_count);
        record(state.t);
    }

    result.converged = spread < options.tol;
    result.steps = state.t;
    result.final_state = state.p;

    // Per-component achieved value (mean inside the component).
    result.achieved.assign(static_cast<std::size_t>(eq.component_count), 0.0);
    std::vector<std::size_t> sizes(static_cast<std::size_t>(eq.component_count), 0);
    for (std::size_t i = 0; i < state.p.size(); ++i) {
        result.achieved[static_cast<std::size_t>(eq.component[i])] += state.p[i];
        sizes[static_cast<std::size_t>(eq.component[i])]++;
    }
    for (std::size_t c = 0; c < result.achieved.size(); ++c) {
        result.achieved[c] /= static_cast<double>(sizes[c]);
    }

    result.max_consensus_error = 0.0;
    for (std::size_t c = 0; c < result.achieved.size(); ++c) {
        result.max_consensus_error =
            std::max(result.max_consensus_error, std::abs(result.achieved[c] - result.predicted[c]));
    }
    result.verdict_ok = result.converged && !options.schedule &&
                        result.max_consensus_error <= std::max(options.tol, 1e-12) * 100.0;
    return result;
}

SimulationResult simulate_dcse(const Digraph& g, const CentralityVector& cent,
                               const LambdaMix& lambda, double eta, const std::vector<double>& p0,
                               const SimulationOptions& options) {
    auto w = build_weights(g, cent, lambda, eta);
    return simulate_dcse(w, p0, options);
}

void LayeredGraph::validate() const {
    if (layer.size() != node_count) throw ConfigError("layer assignment does not cover all nodes");
    std::vector<std::size_t> sizes(static_cast<std::size_t>(layer_count), 0);
    for (int l : layer) {
        if (l < 0 || l >= layer_count) throw ConfigError("layer id out of range");
        sizes[static_cast<std::size_t>(l)]++;
    }
    for (std::size_t l = 0; l < sizes.size(); ++l) {
        if (sizes[l] == 0) throw ConfigError("layer " + std::to_string(l) + " is empty");
    }
    for (auto [u, v] : horizontal_edges) {
        if (layer[static_cast<std::size_t>(u)] != layer[static_cast<std::size_t>(v)]) {
            throw ConfigError("horizontal edge crosses layers");
        }
    }
    for (auto [u, v] : vertical_edges) {
        if (layer[static_cast<std::size_t>(u)] == layer[static_cast<std::size_t>(v)]) {
            throw ConfigError("vertical edge stays inside a layer");
        }
    }
    if (!(rho_v >= 0.0 && rho_v < 1.0)) throw RangeError("rho_v must lie in [0,1)");
    if (beta && beta->size() != node_count) throw ConfigError("beta size mismatch");
}

HierarchicalMatrices build_hierarchical(const LayeredGraph& lg, const CentralityVector& cent,
                                        const LambdaMix& lambda, double eta,
                                        WeightBuildReport* report) {
    lg.validate();
    if (!(eta > 0.0 && eta <= 1.0)) throw RangeError("eta must lie in (0,1]");
    const std::size_t n = lg.node_count;
    if (cent.node_count() != n) throw ConfigError("centralities do not cover the graph");

    std::vector<std::vector<NodeIdx>> horiz(n), vert(n);
    for (auto [u, v] : lg.horizontal_edges) {
        horiz[static_cast<std::size_t>(u)].push_back(v);
        horiz[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto [u, v] : lg.vertical_edges) {
        vert[static_cast<std::size_t>(u)].push_back(v);
        vert[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& xs : horiz) {
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    }
    for (auto& xs : vert) {
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    }

    auto raw_weight = [&](NodeIdx j) {
        auto ji = static_cast<std::size_t>(j);
        return lambda.degree * cent.degree_norm[ji] + lambda.closeness * cent.closeness_norm[ji] +
               lambda.betweenness * cent.betweenness_norm[ji];
    };

    HierarchicalMatrices out{PropagationMatrix(n, eta), PropagationMatrix(n, eta),
                             PropagationMatrix(n, eta)};

    for (std::size_t i = 0; i < n; ++i) {
        const auto& h = horiz[i];
        const auto& v = vert[i];
        // Shares: rho_v of eta goes vertical when vertical neighbors exist;
        // a missing side hands its share to the other.
        double vertical_share = v.empty() ? 0.0 : lg.rho_v;
        double horizontal_share = 1.0 - vertical_share;
        if (h.empty()) {
            horizontal_share = 0.0;
            vertical_share = v.empty() ? 0.0 : 1.0;
        }

        out.horizontal.at(i, i) = 1.0 - eta * (horizontal_share + vertical_share);

        if (!h.empty()) {
            double total = 0.0;
            for (NodeIdx j : h) total += raw_weight(j);
            if (total <= 0.0) {
                if (report) report->uniform_fallback_rows.push_back(static_cast<NodeIdx>(i));
                double u = eta * horizontal_share / static_cast<double>(h.size());
                for (NodeIdx j : h) out.horizontal.at(i, static_cast<std::size_t>(j)) = u;
            } else {
                for (NodeIdx j : h) {
                    out.horizontal.at(i, static_cast<std::size_t>(j)) =
                        eta * horizontal_share * raw_weight(j) / total;
                }
            }
        }
        if (!v.empty()) {
            double total = 0.0;
            for (NodeIdx j : v) {
                total += lg.beta ? (*lg.beta)[static_cast<std::size_t>(j)] : 1.0;
            }
            if (total <= 0.0) throw ConfigError("vertical beta weights sum to zero");
            for (NodeIdx j : v) {
                double b = lg.beta ? (*lg.beta)[static_cast<std::size_t>(j)] : 1.0;
                out.vertical.at(i, static_cast<std::size_t>(j)) = eta * vertical_share * b / total;
            }
        }
        if (h.empty() && v.empty() && report) {
            report->isolated_rows.push_back(static_cast<NodeIdx>(i));
        }
    }

    for (std::size_t i = 0; i < n * n; ++i) {
        out.combined.data()[i] = out.horizontal.data()[i] + out.vertical.data()[i];
    }
    out.combined.validate();
    return out;
}

CehsResult simulate_cehs(const LayeredGraph& lg, const CentralityVector& cent,
                         const LambdaMix& lambda, double eta, const std::vector<double>& p0,
                         const SimulationOptions& options) {
    auto mats = build_hierarchical(lg, cent, lambda, eta);
    const std::size_t n = lg.node_count;

    CehsResult result;
    // Lemma-3 hypothesis check: strong connectivity of each layer's induced
    // horizontal subgraph (undirected edges here, so connectivity).
    result.layer_strongly_connected.assign(static_cast<std::size_t>(lg.layer_count), true);
    for (int l = 0; l < lg.layer_count; ++l) {
        SimpleGraph sub(n);
        for (auto [u, v] : lg.horizontal_edges) {
            if (lg.layer[static_cast<std::size_t>(u)] == l) sub.add_edge(u, v);
        }
        sub.finalize();
        auto comp = sub.components();
        // components() labels isolated nodes separately; restrict to layer
        int first = -1;
        bool connected = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (lg.layer[i] != l) continue;
            if (first < 0) {
                first = comp[i];
            } else if (comp[i] != first) {
                connected = false;
            }
        }
        result.layer_strongly_connected[static_cast<std::size_t>(l)] = connected;
    }

    // Per-step layer spreads ride along in the trajectory.
    SimulationOptions opts = options;
    opts.layers = lg.layer;
    opts.layer_count = lg.layer_count;
    result.base = simulate_dcse(mats.combined, p0, opts);

    const auto& final_p = result.base.final_state;
    std::vector<double> lo(static_cast<std::size_t>(lg.layer_count),
                           std::numeric_limits<double>::infinity());
    std::vector<double> hi(static_cast<std::size_t>(lg.layer_count),
                           -std::numeric_limits<double>::infinity());
    result.layer_consensus.assign(static_cast<std::size_t>(lg.layer_count), 0.0);
    std::vector<std::size_t> sizes(static_cast<std::size_t>(lg.layer_count), 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto l = static_cast<std::size_t>(lg.layer[i]);
        lo[l] = std::min(lo[l], final_p[i]);
        hi[l] = std::max(hi[l], final_p[i]);
        result.layer_consensus[l] += final_p[i];
        sizes[l]++;
    }
    double intra = 0.0;
    double mean_lo = std::numeric_limits<double>::infinity();
    double mean_hi = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < sizes.size(); ++l) {
        result.layer_consensus[l] /= static_cast<double>(sizes[l]);
        intra = std::max(intra, hi[l] - lo[l]);
        mean_lo = std::min(mean_lo, result.layer_consensus[l]);
        mean_hi = std::max(mean_hi, result.layer_consensus[l]);
    }
    result.final_intra_layer_spread = intra;
    result.final_inter_layer_spread = mean_hi - mean_lo;

    // rho_v = 0 prediction: each layer runs its own DCSE on the horizontal
    // block, so per-layer equilibria are the binding forecast.
    if (lg.rho_v == 0.0) {
        auto eq = equilibrium(mats.horizontal);
        result.predicted_layer.assign(static_cast<std::size_t>(lg.layer_count), 0.0);
        // A layer may itself split into several weak components; report the
        // consensus of the component containing the layer's first node.
        for (int l = 0; l < lg.layer_count; ++l) {
            for (std::size_t i = 0; i < n; ++i) {
                if (lg.layer[i] == l) {
                    result.predicted_layer[static_cast<std::size_t>(l)] =
                        eq.consensus(p0, eq.component[i]);
                    break;
                }
            }
        }
    }
    return result;
}

std::vector<double> attitude_step(const std::vector<double>& attitudes,
                                  const std::vector<std::vector<std::pair<NodeIdx, double>>>& weights,
                                  double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw RangeError("alpha must lie in (0,1]");
    if (weights.size() != attitudes.size()) throw ConfigError("weight rows do not match attitudes");
    std::vector<double> next(attitudes.size());
    for (std::size_t i = 0; i < attitudes.size(); ++i) {
        double total = 0.0;
        double pull = 0.0;
        for (auto [j, wij] : weights[i]) {
            if (wij < 0.0) throw RangeError("attitude weight must be nonnegative");
            total += wij;
            pull += wij * (attitudes[static_cast<std::size_t>(j)] - attitudes[i]);
        }
        if (total > 1.0 + 1e-12) throw RangeError("attitude weights of a node exceed 1");
        next[i] = attitudes[i] + alpha * pull;
    }
    return next;
}

}  // namespace cys
