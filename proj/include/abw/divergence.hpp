/// @file divergence.hpp
/// @brief Bregman generators, Bregman divergence and the α-Bregman-Wasserstein divergence.
#pragma once

#include "abw/grid.hpp"
#include "abw/market.hpp"

#include <variant>
#include <vector>

namespace abw {

/// φ_p(x) = 2xᵖ/(p(p−1)) on x ≥ 0.
struct PowerGenerator {
    double p = 2.0;
};

/// Generator given by tabulated φ' on positive nodes.
///
/// φ' is linear between nodes and extended linearly with the end slopes;
/// φ is its exact integral, anchored at φ(x_0) = 0.
class TabulatedGenerator {
public:
    TabulatedGenerator(std::vector<double> x, std::vector<double> dphi);

    double phi(double x) const;
    double grad(double x) const;
    double hess(double x) const;
    double grad_inverse(double y) const;

    const std::vector<double>& nodes() const { return x_; }

private:
    std::size_t segment(double x) const;
    std::vector<double> x_;
    std::vector<double> dphi_;
    std::vector<double> slope_;
    std::vector<double> phi_;
};

/// Strictly convex generator φ of a Bregman divergence.
class BregmanGenerator {
public:
    BregmanGenerator() = default;
    static BregmanGenerator power(double p);
    static BregmanGenerator tabulated(std::vector<double> x, std::vector<double> dphi);

    /// Throws DomainError for x outside [0, ∞).
    double phi(double x) const;
    double grad(double x) const;
    double hess(double x) const;
    /// Generalized inverse of φ', clamped to 0 below the range of φ'.
    double grad_inverse(double y) const;

    /// φ'(x) and φ''(x) in one evaluation, for x > 0 (unchecked).
    void grad_hess(double x, double& g, double& h) const;

    bool is_power() const { return std::holds_alternative<PowerGenerator>(kind_); }
    /// Exponent of a power generator; throws DomainError otherwise.
    double exponent() const;

private:
    std::variant<PowerGenerator, TabulatedGenerator> kind_ = PowerGenerator{};
};

/// Bregman divergence φ(z1) − φ(z2) − φ'(z2)(z1 − z2).
///
/// For power generators the value is formed from the ratio z1/z2 with a series
/// near 1, so small gaps do not cancel. Requires z1, z2 ≥ 0.
double bregman(const BregmanGenerator& g, double z1, double z2);

/// Parameters of the α-BW constraint.
struct DivergenceSpec {
    double alpha = 0.5;
    double epsilon = 0.0;
    BregmanGenerator generator;

    /// Throws DomainError unless 0 < alpha < 1 and epsilon ≥ 0.
    void validate() const;
};

/// |1{z1 ≤ z2} − α|·B(z1, z2); equality takes weight 1 − α.
double alpha_bw_integrand(const DivergenceSpec& spec, double z1, double z2);

/// Midpoint quadrature of the α-BW integrand between two grids.
double alpha_bw(const DivergenceSpec& spec, const std::vector<double>& g1,
                const std::vector<double>& g2);
double alpha_bw(const DivergenceSpec& spec, const QuantileGrid& g1, const QuantileGrid& g2);

/// min{F + shift, F(½)} + max{F − F(½) − shift, 0} on the n-cell grid.
QuantileGrid modified_benchmark(const MarketParams& m, std::size_t n, double shift = 0.1);

}  // namespace abw
