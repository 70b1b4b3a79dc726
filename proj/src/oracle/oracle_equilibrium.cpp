#include <cmath>

#include "cys/error.hpp"
#include "cys/oracles.hpp"

namespace cys::oracle {

namespace {

// Wielandt primitivity test over the support (independent of the dynamics
// module's checker: plain k-step boolean walk, no squaring).
bool primitive_support(const PropagationMatrix& w) {
    const std::size_t n = w.size();
    std::vector<bool> reach(n * n, false);
    for (std::size_t i = 0; i < n * n; ++i) reach[i] = w.data()[i] > 0.0;
    const std::size_t bound = n * n - 2 * n + 2;
    std::vector<bool> cur = reach;
    for (std::size_t k = 1; k < bound; ++k) {
        std::vector<bool> next(n * n, false);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t m = 0; m < n; ++m) {
                if (!cur[i * n + m]) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    if (reach[m * n + j]) next[i * n + j] = true;
                }
            }
        }
        cur = std::move(next);
    }
    for (bool b : cur) {
        if (!b) return false;
    }
    return true;
}

}  // namespace

std::vector<double> oracle_equilibrium(const PropagationMatrix& w) {
    const std::size_t n = w.size();
    if (n == 0 || n > kEquilibriumCap) {
        throw ConfigError("oracle_equilibrium: matrix beyond the size cap");
    }
    if (!primitive_support(w)) {
        throw NumericError("oracle_equilibrium: matrix is not primitive");
    }

    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);
    const double tol = 1e-13;
    double residual = 1.0;
    for (std::size_t it = 0; it < 2000000 && residual >= tol; ++it) {
        for (std::size_t j = 0; j < n; ++j) next[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) next[j] += w.at(i, j) * x[i];
        }
        double mass = 0.0;
        for (double v : next) mass += v;
        for (auto& v : next) v /= mass;
        residual = 0.0;
        for (std::size_t j = 0; j < n; ++j) residual = std::max(residual, std::abs(next[j] - x[j]));
        x = next;
    }
    if (residual >= tol) throw NumericError("oracle_equilibrium: power iteration stalled");

    // Residual certificate: pi W = pi.
    double check = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i] * w.at(i, j);
        check = std::max(check, std::abs(s - x[j]));
    }
    if (check > 1e-10) throw NumericError("oracle_equilibrium: poor stationary residual");
    return x;
}

double oracle_consensus(const PropagationMatrix& w, const std::vector<double>& p0) {
    auto pi = oracle_equilibrium(w);
    double v = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) v += pi[i] * p0[i];
    return v;
}

}  // namespace cys::oracle
