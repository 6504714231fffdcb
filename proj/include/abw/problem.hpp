/// @file problem.hpp
/// @brief Investor problem inputs and their discretization on the u-grid.
#pragma once

#include "abw/divergence.hpp"
#include "abw/grid.hpp"
#include "abw/kernels.hpp"
#include "abw/market.hpp"
#include "abw/preferences.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace abw {

/// Benchmark quantile and ξ supplied directly on the midpoint grid.
struct TabulatedMarket {
    std::vector<double> benchmark;
    std::vector<double> xi;
};

using MarketModel = std::variant<MarketParams, TabulatedMarket>;

/// Root-finding and constraint tolerances.
struct Tolerances {
    double root_tol = 1e-10;        ///< relative, on multipliers
    double constraint_tol = 1e-6;   ///< relative, on constraint values
    int max_iter = 200;
};

/// Inputs of the active portfolio problem.
struct ProblemSpec {
    MarketModel market = MarketParams{2.0, 0.8, 1.0, 1.0};
    Utility utility = Utility::crra(0.5);
    DivergenceSpec divergence{0.5, 0.5, BregmanGenerator::power(2.0)};
    double x0 = 1.0;           ///< budget
    double c = 0.0;            ///< benchmark floor proportion, in [0,1]
    std::size_t grid_size = 100000;
    Tolerances tol;

    /// Checks every field-level precondition; throws DomainError or InvalidMarket.
    /// The joint condition c ≤ x₀/y₀ needs y₀ and is checked by the solver.
    void validate() const;
};

/// Precomputed grid data of a problem, shared by all solver stages.
class ProblemGrid {
public:
    explicit ProblemGrid(const ProblemSpec& spec);

    const ProblemSpec& spec() const { return spec_; }
    std::size_t size() const { return n_; }

    /// Benchmark quantile at the nodes.
    const std::vector<double>& benchmark() const { return benchmark_; }
    /// ξ at the nodes, as a pointwise value (reporting only).
    const std::vector<double>& xi_point() const { return xi_point_; }
    /// ξ as cell averages; used in the budget and in every candidate formula.
    const std::vector<double>& xi() const { return xi_; }
    /// φ'(F̆_Y) at the nodes.
    const std::vector<double>& grad_benchmark() const { return grad_benchmark_; }

    /// True when ξ is non-increasing on the grid, so projections can be skipped.
    bool xi_nonincreasing() const { return xi_nonincreasing_; }
    /// Benchmark cost y₀.
    double y0() const { return y0_; }
    /// E[Y]: exp(Γ)·X₀ for GBM markets, the grid mean otherwise.
    double benchmark_mean() const { return benchmark_mean_; }
    /// GBM parameters, or nullptr for a tabulated market.
    const MarketParams* market_params() const;

    kernels::CandidateInputs inputs() const;

    /// Budget functional ∫g·ξ.
    double cost(const std::vector<double>& g) const;
    /// α-BW divergence from g to the benchmark.
    double abw(const std::vector<double>& g) const;
    /// ∫U(g − c·F̆_Y).
    double expected_utility(const std::vector<double>& g) const;

    /// The benchmark as a QuantileGrid (flagged for analytic tails under GBM).
    QuantileGrid benchmark_grid() const;

private:
    ProblemSpec spec_;
    std::size_t n_ = 0;
    std::vector<double> benchmark_;
    std::vector<double> xi_point_;
    std::vector<double> xi_;
    std::vector<double> grad_benchmark_;
    bool xi_nonincreasing_ = true;
    double y0_ = 0.0;
    double benchmark_mean_ = 0.0;
};

}  // namespace abw
