#include "abw/grid.hpp"

#include "abw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace abw {

std::vector<double> midpoint_nodes(std::size_t n)
{
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = midpoint(i, n);
    }
    return u;
}

void require_same_grid(std::size_t a, std::size_t b, const char* where)
{
    if (a != b) {
        throw GridMismatch(std::string(where) + ": grid sizes differ (" + std::to_string(a) +
                           " vs " + std::to_string(b) + ")");
    }
}

bool is_nondecreasing(const std::vector<double>& values, double rel_tol)
{
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double slack = rel_tol * std::max(std::abs(values[i]), std::abs(values[i - 1]));
        if (values[i] < values[i - 1] - slack) {
            return false;
        }
    }
    return true;
}

QuantileGrid::QuantileGrid(std::vector<double> values, bool benchmark_derived)
    : values_(std::move(values)), benchmark_derived_(benchmark_derived)
{
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DomainError("quantile grid has a non-finite value at node " + std::to_string(i));
        }
    }
    if (!is_nondecreasing(values_, 1e-12)) {
        throw DomainError("quantile grid is not non-decreasing");
    }
}

}  // namespace abw
