#include "cys/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cys/error.hpp"
#include "cys/parallel.hpp"
#include "cys/rng.hpp"

namespace cys {

PropagationVariant parse_variant(const std::string& name) {
    if (name == "gat" || name == "attention") return PropagationVariant::Attention;
    if (name == "gcn" || name == "convolution") return PropagationVariant::Convolution;
    if (name == "gin" || name == "isomorphism") return PropagationVariant::Isomorphism;
    if (name == "gin-sl" || name == "isomorphism-self-loops") {
        return PropagationVariant::IsomorphismSelfLoops;
    }
    throw ConfigError("unknown propagation variant: " + name);
}

std::string variant_name(PropagationVariant v) {
    switch (v) {
        case PropagationVariant::Attention: return "gat";
        case PropagationVariant::Convolution: return "gcn";
        case PropagationVariant::Isomorphism: return "gin";
        case PropagationVariant::IsomorphismSelfLoops: return "gin-sl";
    }
    return "?";
}

PropagationParams make_propagation_params(std::size_t dim, std::uint64_t seed) {
    PropagationParams p;
    p.dim = dim;
    p.transform.resize(dim * dim);
    p.attention.resize(4 * dim);

    Rng rng(derive_seed(seed, "propagation-params"));
    for (std::size_t r = 0; r < dim; ++r) {
        double norm = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            double v = rng.next_double() * 2.0 - 1.0;
            p.transform[r * dim + c] = v;
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (std::size_t c = 0; c < dim; ++c) p.transform[r * dim + c] /= norm;
        }
    }
    double norm = 0.0;
    for (auto& v : p.attention) {
        v = rng.next_double() * 2.0 - 1.0;
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (auto& v : p.attention) v /= norm;
    }
    return p;
}

namespace {

double activate(double x, Activation act) {
    switch (act) {
        case Activation::Identity: return x;
        case Activation::Relu: return x > 0.0 ? x : 0.0;
        case Activation::LeakyRelu: return x > 0.0 ? x : 0.2 * x;
    }
    return x;
}

constexpr double kLogitClamp = 50.0;

}  // namespace

std::vector<std::vector<double>> attention_coefficients(const FeatureMatrix& h,
                                                        const SimpleGraph& g,
                                                        const PropagationConfig& cfg,
                                                        const PropagationParams& params) {
    h.require_finite("attention input");
    const std::size_t n = h.row_count();
    const std::size_t d = h.dimension();
    if (params.dim != d) throw ConfigError("propagation params built for a different dimension");

    // logit(i,j) = a . [h_i || h_j || Wh_i || Wh_j] splits into per-node
    // source and target terms, so it costs O(n d^2 + m) not O(m d).
    const double* a1 = params.attention.data();
    const double* a2 = a1 + d;
    const double* a3 = a2 + d;
    const double* a4 = a3 + d;

    std::vector<double> src_term(n, 0.0), dst_term(n, 0.0);
    parallel_for(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t iv) {
        auto i = static_cast<std::size_t>(iv);
        auto hi = h.row(i);
        double s = 0.0, t = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            s += a1[k] * hi[k];
            t += a2[k] * hi[k];
        }
        if (cfg.logit == AttentionLogit::Full) {
            for (std::size_t r = 0; r < d; ++r) {
                const double* w = params.transform.data() + r * d;
                double wh = 0.0;
                for (std::size_t k = 0; k < d; ++k) wh += w[k] * hi[k];
                s += a3[r] * wh;
                t += a4[r] * wh;
            }
        }
        src_term[i] = s;
        dst_term[i] = t;
    });

    std::vector<std::vector<double>> coeffs(n);
    parallel_for(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t iv) {
        auto i = static_cast<std::size_t>(iv);
        const auto& nbrs = g.neighbors(static_cast<NodeIdx>(i));
        if (nbrs.empty()) return;
        auto& out = coeffs[i];
        out.resize(nbrs.size());
        double max_logit = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            double logit = src_term[i] + dst_term[static_cast<std::size_t>(nbrs[k])];
            out[k] = std::clamp(logit, -kLogitClamp, kLogitClamp);
            max_logit = std::max(max_logit, out[k]);
        }
        if (cfg.unnormalized_attention) {
            for (auto& v : out) v = std::exp(v);
            return;
        }
        double sum = 0.0;
        for (auto& v : out) {
            v = std::exp(v - max_logit);
            sum += v;
        }
        for (auto& v : out) v /= sum;
    });
    return coeffs;
}

FeatureMatrix aggregate(const FeatureMatrix& h, const SimpleGraph& g,
                        const std::vector<std::vector<double>>& coeffs,
                        const PropagationConfig& cfg) {
    const std::size_t n = h.row_count();
    const std::size_t d = h.dimension();
    FeatureMatrix m(n, d, 0.0);

    parallel_for(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t iv) {
        auto i = static_cast<std::size_t>(iv);
        const auto& nbrs = g.neighbors(static_cast<NodeIdx>(i));
        if (nbrs.empty()) return;  // message stays zero; update passes through
        auto out = m.row(i);
        switch (cfg.variant) {
            case PropagationVariant::Attention: {
                const auto& w = coeffs[i];
                for (std::size_t k = 0; k < nbrs.size(); ++k) {
                    auto hj = h.row(static_cast<std::size_t>(nbrs[k]));
                    for (std::size_t c = 0; c < d; ++c) out[c] += w[k] * hj[c];
                }
                break;
            }
            case PropagationVariant::Convolution: {
                double di = std::sqrt(static_cast<double>(nbrs.size()));
                for (NodeIdx j : nbrs) {
                    double dj = std::sqrt(static_cast<double>(g.degree(j)));
                    double w = 1.0 / (di * dj);
                    auto hj = h.row(static_cast<std::size_t>(j));
                    for (std::size_t c = 0; c < d; ++c) out[c] += w * hj[c];
                }
                break;
            }
            case PropagationVariant::IsomorphismSelfLoops: {
                auto hi = h.row(i);
                for (std::size_t c = 0; c < d; ++c) out[c] = (1.0 + cfg.gin_epsilon) * hi[c];
                [[fallthrough]];
            }
            case PropagationVariant::Isomorphism: {
                for (NodeIdx j : nbrs) {
                    auto hj = h.row(static_cast<std::size_t>(j));
                    for (std::size_t c = 0; c < d; ++c) out[c] += hj[c];
                }
                break;
            }
        }
    });
    return m;
}

FeatureMatrix update(const FeatureMatrix& h, const FeatureMatrix& messages, const SimpleGraph& g,
                     const PropagationConfig& cfg) {
    const std::size_t n = h.row_count();
    const std::size_t d = h.dimension();
    if (!cfg.node_bias.empty() && cfg.node_bias.size() != n) {
        throw ConfigError("per-node bias does not cover every node");
    }
    FeatureMatrix next(n, d);
    parallel_for(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t iv) {
        auto i = static_cast<std::size_t>(iv);
        auto hi = h.row(i);
        auto mi = messages.row(i);
        auto out = next.row(i);
        const bool leaf = g.degree(static_cast<NodeIdx>(i)) == 0;
        const double bias = cfg.node_bias.empty() ? cfg.bias : cfg.node_bias[i];
        for (std::size_t c = 0; c < d; ++c) {
            double pre = hi[c] + bias + (leaf ? 0.0 : cfg.alpha_scale * mi[c]);
            out[c] = activate(pre, cfg.activation);
        }
    });

    for (std::size_t i = 0; i < n; ++i) {
        for (double v : next.row(i)) {
            if (!std::isfinite(v)) {
                throw NumericError("non-finite feature after update at node " + std::to_string(i));
            }
        }
    }
    return next;
}

namespace {

struct WorkerGuard {
    int saved = workers();
    explicit WorkerGuard(int n) { set_workers(n); }
    ~WorkerGuard() { set_workers(saved); }
};

std::vector<LayerState> propagate_impl(const FeatureMatrix& h0, const SimpleGraph& g,
                                       const PropagationConfig& cfg, bool parallel) {
    if (cfg.layers < 1) throw ConfigError("propagation needs at least one layer");
    if (h0.row_count() != g.node_count()) {
        throw ConfigError("feature rows and graph nodes disagree");
    }
    h0.require_finite("propagation input");

    std::optional<WorkerGuard> guard;
    if (!parallel) guard.emplace(1);
    auto params = make_propagation_params(h0.dimension(), cfg.seed);

    std::vector<LayerState> states;
    states.push_back({0, h0});
    for (int l = 0; l < cfg.layers; ++l) {
        const auto& cur = states.back().features;
        std::vector<std::vector<double>> coeffs;
        if (cfg.variant == PropagationVariant::Attention) {
            coeffs = attention_coefficients(cur, g, cfg, params);
        }
        auto messages = aggregate(cur, g, coeffs, cfg);
        states.push_back({l + 1, update(cur, messages, g, cfg)});
    }
    return states;
}

}  // namespace

std::vector<LayerState> propagate(const FeatureMatrix& h0, const SimpleGraph& g,
                                  const PropagationConfig& cfg) {
    return propagate_impl(h0, g, cfg, true);
}

std::vector<LayerState> propagate_serial(const FeatureMatrix& h0, const SimpleGraph& g,
                                         const PropagationConfig& cfg) {
    return propagate_impl(h0, g, cfg, false);
}

}  // namespace cys
