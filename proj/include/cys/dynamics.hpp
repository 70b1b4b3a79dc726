#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cys/centrality.hpp"
#include "cys/simple_graph.hpp"

namespace cys {

// Centrality mix for the influence weights: a~_ij = l_deg * D_j + l_close *
// C_j + l_betw * B_j over normalized centralities of the influencing node j.
struct LambdaMix {
    double degree = 1.0 / 3.0;
    double closeness = 1.0 / 3.0;
    double betweenness = 1.0 / 3.0;
};

// Dense row-stochastic propagation matrix: W = (1 - eta) I + eta A with A
// row-normalized influence weights supported on graph edges.
class PropagationMatrix {
public:
    PropagationMatrix() = default;
    PropagationMatrix(std::size_t n, double eta) : n_(n), eta_(eta), w_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double eta() const { return eta_; }
    double& at(std::size_t i, std::size_t j) { return w_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }
    const std::vector<double>& data() const { return w_; }
    std::vector<double>& data() { return w_; }

    // Row-stochasticity within tol; throws NumericError on violation.
    void validate(double tol = 1e-12) const;

    double row_sum(std::size_t i) const;

    // Support graph: j is an out-neighbor of i iff W_ij > 0 (diagonal
    // excluded).
    Digraph support() const;

private:
    std::size_t n_ = 0;
    double eta_ = 0.0;
    std::vector<double> w_;
};

struct WeightBuildReport {
    std::vector<NodeIdx> uniform_fallback_rows;  // all-zero raw weights
    std::vector<NodeIdx> isolated_rows;          // no out-neighbors; W_ii = 1
};

PropagationMatrix build_weights(const Digraph& g, const CentralityVector& cent,
                                const LambdaMix& lambda, double eta,
                                WeightBuildReport* report = nullptr);

struct PreferenceState {
    std::int64_t t = 0;
    std::vector<double> p;
};

// One synchronous update P(t+1) = W P(t).
PreferenceState step(const PreferenceState& state, const PropagationMatrix& w);

// Row-parallel and serial mat-vec twins (identical results).
std::vector<double> mat_vec(const PropagationMatrix& w, const std::vector<double>& p);
std::vector<double> mat_vec_serial(const PropagationMatrix& w, const std::vector<double>& p);

enum class Primitivity { Primitive, NotPrimitive, Undetermined };

// Boolean reachability at the Wielandt bound n^2 - 2n + 2; exact but capped.
Primitivity check_primitive_exact(const PropagationMatrix& w, std::size_t cap = 12);
// Strong connectivity of the support plus a positive diagonal entry.
Primitivity check_primitive_structural(const PropagationMatrix& w);
Primitivity check_primitive(const PropagationMatrix& w, std::size_t exact_cap = 12);

// Stationary distribution per weakly connected component of the support
// (power iteration on W^T). Component masses each sum to 1.
struct Equilibrium {
    std::vector<int> component;  // weak-component id per node
    int component_count = 0;
    std::vector<double> pi;  // stationary mass of the node inside its component

    // Predicted consensus value of component c for initial preferences p0.
    double consensus(const std::vector<double>& p0, int c) const;
    std::vector<double> consensus_values(const std::vector<double>& p0) const;
};

Equilibrium equilibrium(const PropagationMatrix& w, double tol = 1e-12,
                        std::size_t max_iterations = 1000000);

struct TrajectoryPoint {
    std::int64_t t = 0;
    double spread = 0.0;              // max component-internal spread
    double consensus_estimate = 0.0;  // mean of P
    std::vector<double> layer_spreads;
    double inter_layer_spread = 0.0;  // spread of the layer means
};

struct SimulationOptions {
    double tol = 1e-8;
    std::int64_t t_max = 100000;
    // Optional piecewise weight schedule; called with t to obtain W(t).
    std::function<const PropagationMatrix*(std::int64_t)> schedule;
    double smoothness_bound = 0.1;  // max allowed ||W(t)-W(t-1)||_inf
    std::size_t record_every = 1;
    // When set, trajectory points also carry per-layer spreads.
    std::vector<int> layers;
    int layer_count = 0;
};

struct SimulationResult {
    bool converged = false;
    std::int64_t steps = 0;
    std::vector<double> final_state;
    std::vector<int> component;
    std::vector<double> predicted;  // per-component pi^T P(0)
    std::vector<double> achieved;   // per-component final values
    double max_consensus_error = 0.0;
    bool verdict_ok = false;
    int smoothness_violations = 0;
    std::vector<TrajectoryPoint> trajectory;
};

SimulationResult simulate_dcse(const PropagationMatrix& w, const std::vector<double>& p0,
                               const SimulationOptions& options = {});
SimulationResult simulate_dcse(const Digraph& g, const CentralityVector& cent,
                               const LambdaMix& lambda, double eta, const std::vector<double>& p0,
                               const SimulationOptions& options = {});

// Multi-layer hierarchical graph: layers partition the node set; horizontal
// edges stay within a layer, vertical edges cross layers.
struct LayeredGraph {
    std::size_t node_count = 0;
    std::vector<int> layer;  // layer id per node, 0..layer_count-1
    int layer_count = 0;
    std::vector<std::pair<NodeIdx, NodeIdx>> horizontal_edges;
    std::vector<std::pair<NodeIdx, NodeIdx>> vertical_edges;
    std::optional<std::vector<double>> beta;  // vertical source weights; uniform when absent
    double rho_v = 0.2;                       // vertical share of eta, in [0,1)

    void validate() const;
};

struct HierarchicalMatrices {
    PropagationMatrix horizontal;  // W_H (includes the diagonal)
    PropagationMatrix vertical;    // W_V
    PropagationMatrix combined;    // W_C = W_H + W_V, row-stochastic
};

HierarchicalMatrices build_hierarchical(const LayeredGraph& lg, const CentralityVector& cent,
                                        const LambdaMix& lambda, double eta,
                                        WeightBuildReport* report = nullptr);

struct CehsResult {
    SimulationResult base;                     // on W_C
    std::vector<double> layer_consensus;       // final mean per layer
    std::vector<double> predicted_layer;       // rho_v = 0: per-layer pi^T P0
    double final_intra_layer_spread = 0.0;     // max spread inside a layer
    double final_inter_layer_spread = 0.0;     // spread of layer means
    std::vector<bool> layer_strongly_connected;
};

CehsResult simulate_cehs(const LayeredGraph& lg, const CentralityVector& cent,
                         const LambdaMix& lambda, double eta, const std::vector<double>& p0,
                         const SimulationOptions& options = {});

// One Eq.-8 style attitude update: a_i <- a_i + alpha * sum_j w_ij (a_j -
// a_i). Weighted out-neighborhoods must satisfy sum_j w_ij <= 1.
std::vector<double> attitude_step(const std::vector<double>& attitudes,
                                  const std::vector<std::vector<std::pair<NodeIdx, double>>>& weights,
                                  double alpha);

}  // namespace cys
