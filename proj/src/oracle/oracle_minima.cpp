#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "cys/error.hpp"
#include "cys/oracles.hpp"

namespace cys::oracle {

namespace {

// Shrinking-step local refinement around a grid candidate (axis moves only,
// no dependence on the optimizer in benchfns).
std::pair<std::vector<double>, double> refine(const Objective& obj, std::vector<double> x,
                                              double step) {
    double fx = obj.evaluate(x);
    while (step > 1e-13) {
        bool improved = false;
        for (std::size_t k = 0; k < x.size(); ++k) {
            for (double dir : {1.0, -1.0}) {
                double saved = x[k];
                double cand = std::clamp(saved + dir * step, obj.lower[k], obj.upper[k]);
                if (cand == saved) continue;
                x[k] = cand;
                double fy = obj.evaluate(x);
                if (fy < fx) {
                    fx = fy;
                    improved = true;
                } else {
                    x[k] = saved;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return {x, fx};
}

}  // namespace

std::vector<LocatedMinimum> oracle_grid_minima(const Objective& obj, double step,
                                               double tolerance) {
    if (obj.arity != 2) throw ConfigError("oracle_grid_minima handles 2-D objectives");
    if (step <= 0.0) throw ConfigError("grid step must be positive");

    // Pass 1: global minimum value over the grid.
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> x(2);
    for (x[0] = obj.lower[0]; x[0] <= obj.upper[0] + 1e-12; x[0] += step) {
        for (x[1] = obj.lower[1]; x[1] <= obj.upper[1] + 1e-12; x[1] += step) {
            best = std::min(best, obj.evaluate(x));
        }
    }

    // Pass 2: refine every grid cell within `tolerance` of the global level
    // and deduplicate the refined points.
    std::vector<LocatedMinimum> minima;
    for (x[0] = obj.lower[0]; x[0] <= obj.upper[0] + 1e-12; x[0] += step) {
        for (x[1] = obj.lower[1]; x[1] <= obj.upper[1] + 1e-12; x[1] += step) {
            if (obj.evaluate(x) > best + tolerance) continue;
            auto [pt, val] = refine(obj, x, step);
            bool duplicate = false;
            for (const auto& m : minima) {
                double d = std::hypot(m.point[0] - pt[0], m.point[1] - pt[1]);
                if (d < 10.0 * step) duplicate = true;
            }
            if (!duplicate) minima.push_back({pt, val});
        }
    }
    std::sort(minima.begin(), minima.end(), [](const LocatedMinimum& a, const LocatedMinimum& b) {
        return a.point < b.point;
    });
    return minima;
}

}  // namespace cys::oracle
