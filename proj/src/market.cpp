#include "abw/market.hpp"

#include "abw/errors.hpp"
#include "abw/grid.hpp"
#include "abw/normal.hpp"

#include <cmath>
#include <string>

namespace abw {

namespace {

// Φ(b) − Φ(a) for a ≤ b, taking the tail that keeps precision.
double normal_mass(double a, double b)
{
    if (a > 0.0) {
        return normal::cdf(-a) - normal::cdf(-b);
    }
    return normal::cdf(b) - normal::cdf(a);
}

double z_of(double u)
{
    if (u <= 0.0) {
        return -INFINITY;
    }
    if (u >= 1.0) {
        return INFINITY;
    }
    return normal::quantile(u);
}

}  // namespace

void MarketParams::validate() const
{
    if (!(psi > 0.0) || !std::isfinite(psi)) {
        throw InvalidMarket("psi must be positive and finite");
    }
    if (!(initial_wealth > 0.0) || !std::isfinite(initial_wealth)) {
        throw InvalidMarket("initial_wealth must be positive and finite");
    }
    if (!std::isfinite(gamma) || !std::isfinite(total_rate)) {
        throw InvalidMarket("gamma and total_rate must be finite");
    }
    if (!(gamma > total_rate)) {
        throw InvalidMarket("gamma must exceed total_rate so that xi is strictly decreasing");
    }
}

void PiecewiseMarket::validate() const
{
    if (breakpoints.size() < 2 || intervals.size() + 1 != breakpoints.size()) {
        throw InvalidMarket("piecewise market needs K+1 breakpoints for K intervals");
    }
    if (breakpoints.front() < 0.0) {
        throw InvalidMarket("breakpoints must start at t >= 0");
    }
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
        if (!(breakpoints[k] > breakpoints[k - 1])) {
            throw InvalidMarket("breakpoints must be strictly increasing");
        }
    }
    if (!(initial_wealth > 0.0)) {
        throw InvalidMarket("initial_wealth must be positive");
    }
    for (std::size_t k = 0; k < intervals.size(); ++k) {
        const MarketInterval& iv = intervals[k];
        const std::string tag = "interval " + std::to_string(k) + ": ";
        const Eigen::Index d = iv.vol.size();
        if (d == 0 || iv.drift.size() != d || iv.weights.size() != d ||
            iv.correlation.rows() != d || iv.correlation.cols() != d) {
            throw InvalidMarket(tag + "inconsistent dimensions");
        }
        if ((iv.vol.array() <= 0.0).any()) {
            throw InvalidMarket(tag + "volatilities must be positive");
        }
        const Eigen::MatrixXd& rho = iv.correlation;
        if (!rho.isApprox(rho.transpose(), 1e-12)) {
            throw InvalidMarket(tag + "correlation matrix is not symmetric");
        }
        for (Eigen::Index i = 0; i < d; ++i) {
            if (std::abs(rho(i, i) - 1.0) > 1e-12) {
                throw InvalidMarket(tag + "correlation matrix needs a unit diagonal");
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rho, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -1e-10) {
            throw InvalidMarket(tag + "correlation matrix is not positive semi-definite");
        }
    }
}

MarketParams aggregate(const PiecewiseMarket& m)
{
    m.validate();
    MarketParams out;
    out.gamma = 0.0;
    out.total_rate = 0.0;
    double var = 0.0;
    for (std::size_t k = 0; k < m.intervals.size(); ++k) {
        const MarketInterval& iv = m.intervals[k];
        const double dt = m.breakpoints[k + 1] - m.breakpoints[k];
        const Eigen::VectorXd excess = iv.drift.array() - iv.rate;
        out.gamma += (excess.dot(iv.weights) + iv.rate) * dt;
        const Eigen::MatrixXd cov = iv.vol.asDiagonal() * iv.correlation * iv.vol.asDiagonal();
        var += iv.weights.dot(cov * iv.weights) * dt;
        out.total_rate += iv.rate * dt;
    }
    out.psi = std::sqrt(var);
    out.initial_wealth = m.initial_wealth;
    return out;
}

double benchmark_quantile(const MarketParams& m, double u)
{
    if (!(u > 0.0 && u < 1.0)) {
        throw DomainError("benchmark_quantile requires u in (0,1)");
    }
    return m.initial_wealth *
           std::exp(m.gamma - 0.5 * m.psi * m.psi + m.psi * normal::quantile(u));
}

double benchmark_cdf(const MarketParams& m, double x)
{
    if (!(x > 0.0)) {
        return 0.0;
    }
    const double z = (std::log(x / m.initial_wealth) - m.gamma + 0.5 * m.psi * m.psi) / m.psi;
    return normal::cdf(z);
}

double benchmark_density(const MarketParams& m, double x)
{
    if (!(x > 0.0)) {
        return 0.0;
    }
    const double z = (std::log(x / m.initial_wealth) - m.gamma + 0.5 * m.psi * m.psi) / m.psi;
    return normal::pdf(z) / (m.psi * x);
}

double xi(const MarketParams& m, double u)
{
    if (!(u > 0.0 && u < 1.0)) {
        throw DomainError("xi requires u in (0,1)");
    }
    const double z = normal::quantile(u);
    const double a = m.shift();
    return std::exp(-m.total_rate + normal::log_pdf(z + a) - normal::log_pdf(z));
}

double xi_cell_mean(const MarketParams& m, double u_lo, double u_hi)
{
    if (!(u_lo >= 0.0 && u_hi <= 1.0 && u_lo < u_hi)) {
        throw DomainError("xi_cell_mean requires 0 <= u_lo < u_hi <= 1");
    }
    const double a = m.shift();
    const double mass = normal_mass(z_of(u_lo) + a, z_of(u_hi) + a);
    return std::exp(-m.total_rate) * mass / (u_hi - u_lo);
}

double benchmark_partial_moment(const MarketParams& m, double u_lo, double u_hi, int k)
{
    if (!(u_lo >= 0.0 && u_hi <= 1.0 && u_lo <= u_hi)) {
        throw DomainError("benchmark_partial_moment requires 0 <= u_lo <= u_hi <= 1");
    }
    if (k != 1 && k != 2) {
        throw DomainError("benchmark_partial_moment supports k = 1, 2");
    }
    if (u_lo == u_hi) {
        return 0.0;
    }
    const double kp = static_cast<double>(k);
    // E[Y^k; z in [z_lo, z_hi]] with Y = X0·exp(Γ − Ψ²/2 + Ψz).
    const double scale = std::pow(m.initial_wealth, kp) *
                         std::exp(kp * m.gamma + 0.5 * kp * (kp - 1.0) * m.psi * m.psi);
    const double s = kp * m.psi;
    return scale * normal_mass(z_of(u_lo) - s, z_of(u_hi) - s);
}

std::vector<double> benchmark_grid(const MarketParams& m, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = benchmark_quantile(m, midpoint(i, n));
    }
    return out;
}

std::vector<double> xi_grid(const MarketParams& m, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = xi(m, midpoint(i, n));
    }
    return out;
}

std::vector<double> xi_cell_grid(const MarketParams& m, std::size_t n)
{
    std::vector<double> out(n);
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = xi_cell_mean(m, static_cast<double>(i) / dn, static_cast<double>(i + 1) / dn);
    }
    return out;
}

}  // namespace abw
