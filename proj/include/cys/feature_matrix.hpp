#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "cys/error.hpp"

namespace cys {

// Dense per-node feature rows, all of one dimension. Stored row-major.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t dim, double fill = 0.0)
        : rows_(rows), dim_(dim), data_(rows * dim, fill) {}

    std::size_t row_count() const { return rows_; }
    std::size_t dimension() const { return dim_; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

    double& at(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool all_finite() const {
        for (double v : data_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    void require_finite(const char* what) const {
        if (!all_finite()) throw NumericError(std::string(what) + ": non-finite feature value");
    }

private:
    std::size_t rows_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

}  // namespace cys
