#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cys {

// Two-dimensional benchmark objectives with catalogued minima (yang-n3
// generalizes to n dimensions; the catalogue entry is 2-D).
struct KnownMinimum {
    std::vector<double> point;
    double value = 0.0;
    bool quoted_low_precision = false;  // coordinates given to ~4 decimals
};

struct Objective {
    std::string name;
    std::size_t arity = 2;
    std::vector<double> lower;  // per-coordinate domain box
    std::vector<double> upper;
    std::function<double(const std::vector<double>&)> evaluate;
    std::vector<KnownMinimum> minima;
};

// himmelblau, rastrigin, salomon, bukin, yang-n3, cross-in-tray
const std::vector<Objective>& benchmark_objectives();
const Objective& objective_by_name(const std::string& name);

// Evaluates with domain checking.
double evaluate(const Objective& obj, const std::vector<double>& x);

struct MinimumCheck {
    KnownMinimum minimum;
    double value_at_point = 0.0;
    bool pass = false;
};

// f(point) compared against the catalogued value: quoted 4-decimal points at
// tol_quoted, analytic points at tol.
std::vector<MinimumCheck> verify_minima(const Objective& obj, double tol = 1e-9,
                                        double tol_quoted = 1e-3);

struct OptimizeResult {
    std::vector<double> best_point;
    double best_value = 0.0;
    std::size_t evaluations = 0;
};

// Coordinate descent with a shrinking step from a given start, clamped to
// the domain box. `budget` caps objective evaluations.
OptimizeResult descend_from(const Objective& obj, std::vector<double> start, std::size_t budget);

// Best-of-restarts coordinate descent with shrinking step from seeded
// uniform starts. Restarts run in parallel; the reduction is deterministic
// (value, then lexicographic point).
OptimizeResult multistart_optimize(const Objective& obj, int restarts, std::size_t budget,
                                   std::uint64_t seed);

}  // namespace cys
