/// @file config.hpp
/// @brief Run configuration: sectioned key-value files with strict key checking.
#pragma once

#include "abw/analysis.hpp"
#include "abw/market.hpp"
#include "abw/problem.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace abw {

struct OutputOptions {
    std::string directory = "out";
    bool csv = true;
    bool svg = true;
    bool boundary_rows = false;   ///< add budget-only and divergence-only rows per case
    bool benchmark_row = true;
    std::size_t density_points = 400;
    double density_max = 0.0;     ///< 0 selects the range from the quantiles
    std::size_t quantile_stride = 1;  ///< write every k-th grid node to quantile.csv
};

struct Figure1Options {
    std::vector<double> p_values{1.6, 1.8, 2.0, 2.2, 2.4};
    double p_sweep_alpha = 0.5;
    std::vector<double> alpha_values{0.01, 0.25, 0.5};
    std::vector<double> alpha_sweep_p{1.6, 2.0, 2.4};
    double shift = 0.1;
    std::size_t grid = 2000;
};

struct RunConfig {
    MarketParams market;
    std::optional<PiecewiseMarket> piecewise;  ///< set when the market came from intervals
    double x0 = 1.0;
    double c = 0.0;
    double risk_aversion = 0.5;
    double alpha = 0.5;
    double epsilon = 0.5;
    double p = 2.0;
    std::vector<double> sweep_p;
    std::vector<double> sweep_alpha;
    std::vector<double> sweep_c;
    std::vector<double> sweep_x0;
    std::vector<double> sweep_epsilon;
    std::size_t grid = 100000;
    Tolerances tol;
    StatsLevels levels;
    OutputOptions output;
    Figure1Options figure1;
};

/// One point of the sweep.
struct RunCase {
    std::string id;
    double p = 2.0;
    ProblemSpec spec;
};

/// Parses a config file; throws ConfigError listing every problem found.
RunConfig load_config(const std::string& path);

/// Parses config text; source names the input in error messages.
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");

/// Checks all module preconditions; returns one message per violation.
std::vector<std::string> validate_config(const RunConfig& cfg);

/// Cartesian product of the sweep lists, in p, α, c, x₀, ε order.
std::vector<RunCase> expand_cases(const RunConfig& cfg);

}  // namespace abw
