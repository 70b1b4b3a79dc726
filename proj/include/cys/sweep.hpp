#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cys/pipeline.hpp"

namespace cys {

// Full-factorial grid over the present axes. Lambda cells are (degree,
// closeness, betweenness) weights applied to the centrality tail.
struct SweepAxes {
    std::optional<std::vector<bool>> use_centrality;
    std::optional<std::vector<std::string>> variants;
    std::optional<std::vector<double>> thresholds;
    std::optional<std::vector<std::string>> metrics;
    std::optional<std::vector<int>> batch_sizes;
    std::optional<std::vector<std::size_t>> dims;
    std::optional<std::vector<std::array<double, 3>>> lambda_grid;

    std::size_t cell_count() const;
};

// The ablation grid of the hyperparameter tables plus the lambda grid
// {0.1, 0.3, 0.6, 0.9}^3.
SweepAxes table_axes();
SweepAxes lambda_axes();

struct SweepCell {
    Json axes;     // axis values of this cell
    Json metrics;  // evaluation metrics (cys) when ok
    bool ok = false;
    std::string error;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::size_t failed = 0;
};

// Runs every cell on top of the base config, caching shared upstream stages.
// Per-cell failures are recorded and the sweep continues.
SweepResult run_sweep(const RunConfig& base, const SweepAxes& axes,
                      std::ostream* progress = nullptr);

// One row per cell: axis columns, then hr/mrr/ndcg/precision/recall per K.
std::string sweep_csv(const SweepResult& result, const std::vector<int>& k_list);

}  // namespace cys
