#include "abw/problem.hpp"

#include "abw/errors.hpp"

#include <cmath>
#include <string>

namespace abw {

void ProblemSpec::validate() const
{
    if (const auto* m = std::get_if<MarketParams>(&market)) {
        m->validate();
    } else {
        const auto& tab = std::get<TabulatedMarket>(market);
        require_same_grid(tab.benchmark.size(), grid_size, "tabulated benchmark");
        require_same_grid(tab.xi.size(), grid_size, "tabulated xi");
        if (!is_nondecreasing(tab.benchmark)) {
            throw InvalidMarket("tabulated benchmark quantile must be non-decreasing");
        }
        for (std::size_t i = 0; i < grid_size; ++i) {
            if (!(tab.benchmark[i] > 0.0) || !std::isfinite(tab.benchmark[i])) {
                throw InvalidMarket("tabulated benchmark values must be positive and finite");
            }
            if (!(tab.xi[i] >= 0.0) || !std::isfinite(tab.xi[i])) {
                throw InvalidMarket("tabulated xi must be non-negative and finite");
            }
        }
    }
    divergence.validate();
    if (!(x0 > 0.0) || !std::isfinite(x0)) {
        throw DomainError("x0 must be positive and finite");
    }
    if (!(c >= 0.0 && c <= 1.0)) {
        throw DomainError("c must lie in [0,1]");
    }
    if (grid_size < 2) {
        throw DomainError("grid_size must be at least 2");
    }
    if (!(tol.root_tol > 0.0) || !(tol.constraint_tol > 0.0) || tol.max_iter < 1) {
        throw DomainError("tolerances must be positive and max_iter >= 1");
    }
}

ProblemGrid::ProblemGrid(const ProblemSpec& spec) : spec_(spec), n_(spec.grid_size)
{
    spec_.validate();
    if (const auto* m = std::get_if<MarketParams>(&spec_.market)) {
        benchmark_ = abw::benchmark_grid(*m, n_);
        xi_point_ = xi_grid(*m, n_);
        xi_ = xi_cell_grid(*m, n_);
        benchmark_mean_ = m->initial_wealth * std::exp(m->gamma);
    } else {
        const auto& tab = std::get<TabulatedMarket>(spec_.market);
        benchmark_ = tab.benchmark;
        xi_point_ = tab.xi;
        xi_ = tab.xi;
        double s = 0.0;
        for (double v : benchmark_) {
            s += v;
        }
        benchmark_mean_ = s / static_cast<double>(n_);
    }
    xi_nonincreasing_ = true;
    for (std::size_t i = 1; i < n_; ++i) {
        if (xi_[i] > xi_[i - 1]) {
            xi_nonincreasing_ = false;
            break;
        }
    }
    grad_benchmark_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        grad_benchmark_[i] = spec_.divergence.generator.grad(benchmark_[i]);
    }
    y0_ = cost(benchmark_);
}

const MarketParams* ProblemGrid::market_params() const
{
    return std::get_if<MarketParams>(&spec_.market);
}

kernels::CandidateInputs ProblemGrid::inputs() const
{
    kernels::CandidateInputs in;
    in.benchmark = benchmark_.data();
    in.grad_benchmark = grad_benchmark_.data();
    in.xi = xi_.data();
    in.c = spec_.c;
    in.n = n_;
    return in;
}

double ProblemGrid::cost(const std::vector<double>& g) const
{
    require_same_grid(g.size(), n_, "cost");
    return kernels::weighted_mean(g.data(), xi_.data(), n_);
}

double ProblemGrid::abw(const std::vector<double>& g) const
{
    require_same_grid(g.size(), n_, "abw");
    return kernels::abw_mean(spec_.divergence, g.data(), benchmark_.data(), n_);
}

double ProblemGrid::expected_utility(const std::vector<double>& g) const
{
    require_same_grid(g.size(), n_, "expected_utility");
    return kernels::utility_mean(spec_.utility, g.data(), benchmark_.data(), spec_.c, n_);
}

QuantileGrid ProblemGrid::benchmark_grid() const
{
    return QuantileGrid(benchmark_, market_params() != nullptr);
}

}  // namespace abw
