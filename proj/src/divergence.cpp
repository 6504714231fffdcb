#include "abw/divergence.hpp"

#include "abw/errors.hpp"
#include "abw/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace abw {

TabulatedGenerator::TabulatedGenerator(std::vector<double> x, std::vector<double> dphi)
    : x_(std::move(x)), dphi_(std::move(dphi))
{
    if (x_.size() < 2 || x_.size() != dphi_.size()) {
        throw DomainError("tabulated generator needs at least two (x, dphi) pairs");
    }
    for (std::size_t k = 0; k < x_.size(); ++k) {
        if (!(x_[k] > 0.0) || !std::isfinite(x_[k]) || !std::isfinite(dphi_[k])) {
            throw DomainError("tabulated generator nodes must be positive and finite");
        }
        if (k > 0 && (!(x_[k] > x_[k - 1]) || !(dphi_[k] > dphi_[k - 1]))) {
            throw DomainError("tabulated generator needs strictly increasing x and dphi");
        }
    }
    slope_.resize(x_.size() - 1);
    phi_.assign(x_.size(), 0.0);
    for (std::size_t k = 0; k + 1 < x_.size(); ++k) {
        const double h = x_[k + 1] - x_[k];
        slope_[k] = (dphi_[k + 1] - dphi_[k]) / h;
        phi_[k + 1] = phi_[k] + 0.5 * h * (dphi_[k] + dphi_[k + 1]);
    }
}

std::size_t TabulatedGenerator::segment(double x) const
{
    if (x <= x_.front()) {
        return 0;
    }
    if (x >= x_.back()) {
        return slope_.size() - 1;
    }
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double TabulatedGenerator::grad(double x) const
{
    const std::size_t k = segment(x);
    return dphi_[k] + slope_[k] * (x - x_[k]);
}

double TabulatedGenerator::hess(double x) const { return slope_[segment(x)]; }

double TabulatedGenerator::phi(double x) const
{
    const std::size_t k = segment(x);
    const double h = x - x_[k];
    return phi_[k] + h * dphi_[k] + 0.5 * slope_[k] * h * h;
}

double TabulatedGenerator::grad_inverse(double y) const
{
    const double at_zero = grad(0.0);
    if (y <= at_zero) {
        return 0.0;
    }
    std::size_t k = 0;
    if (y >= dphi_.back()) {
        k = slope_.size() - 1;
    } else if (y > dphi_.front()) {
        const auto it = std::upper_bound(dphi_.begin(), dphi_.end(), y);
        k = static_cast<std::size_t>(it - dphi_.begin()) - 1;
    }
    return x_[k] + (y - dphi_[k]) / slope_[k];
}

BregmanGenerator BregmanGenerator::power(double p)
{
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw DomainError("power generator requires a finite exponent p > 1");
    }
    BregmanGenerator g;
    g.kind_ = PowerGenerator{p};
    return g;
}

BregmanGenerator BregmanGenerator::tabulated(std::vector<double> x, std::vector<double> dphi)
{
    BregmanGenerator g;
    g.kind_ = TabulatedGenerator(std::move(x), std::move(dphi));
    return g;
}

double BregmanGenerator::exponent() const
{
    if (const auto* pw = std::get_if<PowerGenerator>(&kind_)) {
        return pw->p;
    }
    throw DomainError("generator is not a power generator");
}

namespace {

void check_domain(double x)
{
    if (!(x >= 0.0) || std::isinf(x)) {
        throw DomainError("Bregman generator evaluated outside [0, inf)");
    }
}

}  // namespace

double BregmanGenerator::phi(double x) const
{
    check_domain(x);
    if (const auto* pw = std::get_if<PowerGenerator>(&kind_)) {
        return 2.0 * std::pow(x, pw->p) / (pw->p * (pw->p - 1.0));
    }
    return std::get<TabulatedGenerator>(kind_).phi(x);
}

double BregmanGenerator::grad(double x) const
{
    check_domain(x);
    if (const auto* pw = std::get_if<PowerGenerator>(&kind_)) {
        return 2.0 * std::pow(x, pw->p - 1.0) / (pw->p - 1.0);
    }
    return std::get<TabulatedGenerator>(kind_).grad(x);
}

double BregmanGenerator::hess(double x) const
{
    check_domain(x);
    if (const auto* pw = std::get_if<PowerGenerator>(&kind_)) {
        return 2.0 * std::pow(x, pw->p - 2.0);
    }
    return std::get<TabulatedGenerator>(kind_).hess(x);
}

void BregmanGenerator::grad_hess(double x, double& g, double& h) const
{
    if (const auto* pw = std::get_if<PowerGenerator>(&kind_)) {
        const double xp2 = std::pow(x, pw->p - 2.0);
        h = 2.0 * xp2;
        g = h * x / (pw->p - 1.0);
        return;
    }
    const auto& tab = std::get<TabulatedGenerator>(kind_);
    g = tab.grad(x);
    h = tab.hess(x);
}

double BregmanGenerator::grad_inverse(double y) const
{
    if (const auto* pw = std::get_if<PowerGenerator>(&kind_)) {
        if (!(y > 0.0)) {
            return 0.0;
        }
        return std::pow(0.5 * (pw->p - 1.0) * y, 1.0 / (pw->p - 1.0));
    }
    return std::get<TabulatedGenerator>(kind_).grad_inverse(y);
}

namespace {

// r^p − 1 − p(r − 1) with r = 1 + d.
double power_remainder(double p, double d)
{
    if (std::abs(d) < 0.01) {
        double coef = p * (p - 1.0) / 2.0;
        double dk = d * d;
        double sum = 0.0;
        for (int k = 2; k <= 10; ++k) {
            sum += coef * dk;
            coef *= (p - k) / (k + 1.0);
            dk *= d;
        }
        return sum;
    }
    return std::expm1(p * std::log1p(d)) - p * d;
}

}  // namespace

double bregman(const BregmanGenerator& g, double z1, double z2)
{
    check_domain(z1);
    check_domain(z2);
    if (z1 == z2) {
        return 0.0;
    }
    if (g.is_power()) {
        const double p = g.exponent();
        if (z2 == 0.0) {
            return g.phi(z1);
        }
        if (p == 2.0) {
            const double d = z1 - z2;
            return d * d;
        }
        const double d = (z1 - z2) / z2;
        const double val = 2.0 * std::pow(z2, p) / (p * (p - 1.0)) * power_remainder(p, d);
        return std::max(val, 0.0);
    }
    const double val = g.phi(z1) - g.phi(z2) - g.grad(z2) * (z1 - z2);
    return std::max(val, 0.0);
}

void DivergenceSpec::validate() const
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0,1)");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw DomainError("epsilon must be finite and non-negative");
    }
}

double alpha_bw_integrand(const DivergenceSpec& spec, double z1, double z2)
{
    const double w = (z1 <= z2) ? 1.0 - spec.alpha : spec.alpha;
    return w * bregman(spec.generator, z1, z2);
}

double alpha_bw(const DivergenceSpec& spec, const std::vector<double>& g1,
                const std::vector<double>& g2)
{
    require_same_grid(g1.size(), g2.size(), "alpha_bw");
    if (g1.empty()) {
        return 0.0;
    }
    return kernels::abw_mean(spec, g1.data(), g2.data(), g1.size());
}

double alpha_bw(const DivergenceSpec& spec, const QuantileGrid& g1, const QuantileGrid& g2)
{
    return alpha_bw(spec, g1.values(), g2.values());
}

QuantileGrid modified_benchmark(const MarketParams& m, std::size_t n, double shift)
{
    const std::vector<double> f = benchmark_grid(m, n);
    const double median = benchmark_quantile(m, 0.5);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::min(f[i] + shift, median) + std::max(f[i] - median - shift, 0.0);
    }
    return QuantileGrid(std::move(out));
}

}  // namespace abw
