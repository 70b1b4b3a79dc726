#pragma once

#include <cstddef>
#include <vector>

#include "cys/benchfns.hpp"
#include "cys/centrality.hpp"
#include "cys/dynamics.hpp"
#include "cys/evaluation.hpp"
#include "cys/simple_graph.hpp"

// Deliberately slow, deliberately simple reference implementations. They
// share no code with the modules they check and refuse inputs beyond their
// size caps. Test-only (plus the hidden `oracle` CLI subcommand).
namespace cys::oracle {

inline constexpr std::size_t kClosenessCap = 40;
inline constexpr std::size_t kBetweennessCap = 25;
inline constexpr std::size_t kEquilibriumCap = 50;

// Degree by counting, closeness by all-pairs BFS distance sums, betweenness
// by explicit enumeration of every shortest path (unordered pairs).
CentralityVector oracle_centrality(const SimpleGraph& g);

// Stationary distribution by plain dense power iteration on W^T at 1e-13,
// with a residual check; refuses non-primitive matrices (Wielandt test).
std::vector<double> oracle_equilibrium(const PropagationMatrix& w);
double oracle_consensus(const PropagationMatrix& w, const std::vector<double>& p0);

// Literal transcription of the ranking-metric definitions.
MetricsReport oracle_metrics(const std::vector<std::vector<NodeIdx>>& rankings,
                             const std::vector<std::vector<NodeIdx>>& relevant,
                             const std::vector<int>& k_list);

// Grid search at `step` over the domain box followed by local shrink
// refinement; returns all distinct minima found at the global level.
struct LocatedMinimum {
    std::vector<double> point;
    double value = 0.0;
};
std::vector<LocatedMinimum> oracle_grid_minima(const Objective& obj, double step,
                                               double tolerance = 1e-6);

}  // namespace cys::oracle
