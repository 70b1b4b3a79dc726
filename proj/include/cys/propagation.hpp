#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cys/feature_matrix.hpp"
#include "cys/simple_graph.hpp"

namespace cys {

enum class PropagationVariant {
    Attention,             // softmax attention coefficients (gat)
    Convolution,           // 1/sqrt(deg_i deg_j) kernel (gcn)
    Isomorphism,           // plain neighbor sum (gin)
    IsomorphismSelfLoops,  // (1+eps) h_i + neighbor sum (gin-sl)
};

enum class Activation { Identity, Relu, LeakyRelu };  // leaky slope 0.2

enum class AttentionLogit {
    Full,  // a . [h_i || h_j || W h_i || W h_j]
    Pair,  // a . [h_i || h_j]
};

struct PropagationConfig {
    PropagationVariant variant = PropagationVariant::Attention;
    int layers = 2;
    Activation activation = Activation::LeakyRelu;
    AttentionLogit logit = AttentionLogit::Full;
    double alpha_scale = 1.0;  // residual scaling
    double bias = 0.0;         // uniform bias, used when node_bias is empty
    std::vector<double> node_bias;  // optional per-node bias b_i
    double gin_epsilon = 0.0;
    // Unnormalized exponential weights instead of softmax (comparison mode
    // for the attention variant).
    bool unnormalized_attention = false;
    std::uint64_t seed = 0;  // seeds the transform matrix and attention vector
};

PropagationVariant parse_variant(const std::string& name);  // gat|gcn|gin|gin-sl
std::string variant_name(PropagationVariant v);

// Fixed (seeded, not learned) layer parameters: a row-normalized transform
// matrix W (dim x dim) and an attention vector of length 4*dim.
struct PropagationParams {
    std::size_t dim = 0;
    std::vector<double> transform;  // row-major dim x dim
    std::vector<double> attention;  // length 4*dim; Pair form uses the first 2*dim
};

PropagationParams make_propagation_params(std::size_t dim, std::uint64_t seed);

// Per-node coefficients over the adjacency list order of g. For the
// attention variant these are softmax weights summing to 1 per node with
// neighbors; nodes without neighbors get an empty list.
std::vector<std::vector<double>> attention_coefficients(const FeatureMatrix& h,
                                                        const SimpleGraph& g,
                                                        const PropagationConfig& cfg,
                                                        const PropagationParams& params);

// Variant-specific neighbor aggregation into one message row per node.
FeatureMatrix aggregate(const FeatureMatrix& h, const SimpleGraph& g,
                        const std::vector<std::vector<double>>& coeffs,
                        const PropagationConfig& cfg);

// h_i <- sigma(h_i + alpha_scale * m_i + bias); nodes without neighbors pass
// through sigma(h_i + bias).
FeatureMatrix update(const FeatureMatrix& h, const FeatureMatrix& messages,
                     const SimpleGraph& g, const PropagationConfig& cfg);

struct LayerState {
    int layer = 0;
    FeatureMatrix features;
};

// h^(0) .. h^(L); layer l+1 computed from layer l via coefficients ->
// aggregate -> update, double buffered.
std::vector<LayerState> propagate(const FeatureMatrix& h0, const SimpleGraph& g,
                                  const PropagationConfig& cfg);
std::vector<LayerState> propagate_serial(const FeatureMatrix& h0, const SimpleGraph& g,
                                         const PropagationConfig& cfg);

}  // namespace cys
