/// @file projection.hpp
/// @brief Isotonic and antitonic L² projections by pool-adjacent-violators.
#pragma once

#include "abw/grid.hpp"

#include <functional>
#include <vector>

namespace abw {

/// Non-decreasing L² projection with uniform weights (linear-time stack PAVA).
std::vector<double> isotonic(const std::vector<double>& values);

/// Non-increasing projection, defined as −isotonic(−values).
std::vector<double> antitonic(const std::vector<double>& values);

/// Applies a non-decreasing scalar map to isotonic(values).
QuantileGrid project_through(const std::function<double(double)>& g_inv,
                             const std::vector<double>& values);

}  // namespace abw
