/// @file analysis.hpp
/// @brief Objective, cost, density and risk statistics of quantile grids.
#pragma once

#include "abw/grid.hpp"
#include "abw/preferences.hpp"
#include "abw/problem.hpp"

#include <cstddef>
#include <vector>

namespace abw {

/// Levels of the tail statistics.
struct StatsLevels {
    double var = 0.05;
    double es = 0.05;
    double ute = 0.9;
};

struct StatsReport {
    double expected_utility = 0.0;
    double cost = 0.0;
    double abw = 0.0;
    double glr = 0.0;
    bool glr_infinite = false;  ///< the loss integral vanished
    double mean = 0.0;
    double std_dev = 0.0;
    double var_level = 0.05;
    double var = 0.0;           ///< −g(β)
    double es_level = 0.05;
    double es = 0.0;            ///< −(1/β)∫₀^β g
    double ute_level = 0.9;
    double ute = 0.0;           ///< (1/(1−β))∫_β^1 g
    bool tail_corrected = false;  ///< exact lognormal integrals were used
    double tail_residual = 0.0;   ///< estimated mean mass missed by the last cell
};

/// ∫U(g − c·benchmark) by the midpoint rule; −∞ if g dips below the floor.
double expected_utility(const Utility& util, const QuantileGrid& g, double c,
                        const QuantileGrid& benchmark);

/// ∫g·ξ by the midpoint rule with the given ξ weights.
double cost(const QuantileGrid& g, const std::vector<double>& xi);

/// Linear interpolation of g at level u between midpoint nodes.
double quantile_at(const QuantileGrid& g, double u);

/// ∫₀^β g by midpoint cells, with a partial last cell.
double lower_integral(const QuantileGrid& g, double beta);

/// ∫_β^1 g by midpoint cells, with a partial first cell.
double upper_integral(const QuantileGrid& g, double beta);

struct DensityCurve {
    std::vector<double> x;
    std::vector<double> pdf;
    double cap = 0.0;          ///< ceiling applied where g is flat
    std::size_t capped = 0;    ///< nodes that hit the ceiling
};

/// Density of the law with quantile g by centered differences Δu/Δg, linearly
/// interpolated onto the support points and zero outside [g(u₁), g(u_n)].
DensityCurve density_curve(const QuantileGrid& g, const std::vector<double>& support,
                           double cap = 1e8);

/// Summary statistics of g under the problem's market and preferences.
StatsReport stats(const QuantileGrid& g, const ProblemGrid& pg, const StatsLevels& levels = {});

}  // namespace abw
