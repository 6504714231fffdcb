/// @file market.hpp
/// @brief Lognormal benchmark law and state-price weighting under a GBM market.
#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace abw {

/// Cumulative GBM aggregates over the horizon.
struct MarketParams {
    double gamma = 0.0;           ///< expected log-growth of the benchmark, Γ
    double psi = 1.0;             ///< cumulative volatility, Ψ > 0
    double total_rate = 0.0;      ///< integrated short rate, R
    double initial_wealth = 1.0;  ///< benchmark initial wealth, > 0

    /// Throws InvalidMarket unless psi > 0, initial_wealth > 0 and gamma > total_rate.
    void validate() const;

    /// (Γ − R)/Ψ, the shift between the real-world and pricing normals.
    double shift() const { return (gamma - total_rate) / psi; }
};

/// One interval of a piecewise-constant multi-asset market.
struct MarketInterval {
    Eigen::VectorXd drift;        ///< μ
    Eigen::VectorXd vol;          ///< σ, entries > 0
    Eigen::MatrixXd correlation;  ///< ρ, symmetric PSD with unit diagonal
    Eigen::VectorXd weights;      ///< benchmark weights π
    double rate = 0.0;            ///< short rate r
};

/// Piecewise-constant market on breakpoints t_0 < ... < t_K.
struct PiecewiseMarket {
    std::vector<double> breakpoints;
    std::vector<MarketInterval> intervals;
    double initial_wealth = 1.0;

    /// Throws InvalidMarket on any violated invariant.
    void validate() const;
};

/// Collapses a piecewise market into (Γ, Ψ, R).
MarketParams aggregate(const PiecewiseMarket& m);

/// X₀·exp(Γ − Ψ²/2 + Ψ·Φ̆(u)); throws DomainError outside (0,1).
double benchmark_quantile(const MarketParams& m, double u);

/// Lognormal cdf; 0 for x ≤ 0.
double benchmark_cdf(const MarketParams& m, double x);

/// Lognormal density; 0 for x ≤ 0.
double benchmark_density(const MarketParams& m, double x);

/// State-price weight ξ(u) = e^{−R}·φ(z + a)/φ(z), z = Φ̆(u), evaluated in log space.
double xi(const MarketParams& m, double u);

/// Average of ξ over [u_lo, u_hi] from the exact Gaussian integral.
double xi_cell_mean(const MarketParams& m, double u_lo, double u_hi);

/// ∫ F̆_Y^k over [u_lo, u_hi] for k = 1, 2, exact.
double benchmark_partial_moment(const MarketParams& m, double u_lo, double u_hi, int k);

/// Benchmark quantile at the midpoint nodes of an n-cell grid.
std::vector<double> benchmark_grid(const MarketParams& m, std::size_t n);

/// ξ at the midpoint nodes of an n-cell grid.
std::vector<double> xi_grid(const MarketParams& m, std::size_t n);

/// Cell averages of ξ on an n-cell grid; the quadrature weights of the budget.
std::vector<double> xi_cell_grid(const MarketParams& m, std::size_t n);

}  // namespace abw
