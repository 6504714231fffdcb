/// @file grid.hpp
/// @brief Midpoint u-grid and the quantile grid type shared by all modules.
#pragma once

#include <cstddef>
#include <vector>

namespace abw {

/// Unconstrained values on the shared u-grid.
using GridFunction = std::vector<double>;

/// Node u_i = (i + 1/2)/n for i = 0..n-1.
inline double midpoint(std::size_t i, std::size_t n)
{
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
}

/// All midpoint nodes of an n-cell grid.
std::vector<double> midpoint_nodes(std::size_t n);

/// Throws GridMismatch unless the two sizes agree.
void require_same_grid(std::size_t a, std::size_t b, const char* where);

/// True when values never decrease by more than rel_tol relative to their scale.
bool is_nondecreasing(const std::vector<double>& values, double rel_tol = 0.0);

/// A discretized quantile function on the midpoint grid.
///
/// Values are finite and non-decreasing up to a relative slack of 1e-12,
/// which absorbs the rounding of per-node root solves.
class QuantileGrid {
public:
    QuantileGrid() = default;

    /// Validates finiteness and monotonicity; throws DomainError otherwise.
    explicit QuantileGrid(std::vector<double> values, bool benchmark_derived = false);

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    const double* data() const { return values_.data(); }

    /// Grids built from the closed-form benchmark law get analytic tail corrections.
    bool benchmark_derived() const { return benchmark_derived_; }

private:
    std::vector<double> values_;
    bool benchmark_derived_ = false;
};

}  // namespace abw
