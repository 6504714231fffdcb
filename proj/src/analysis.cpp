#include "abw/analysis.hpp"

#include "abw/errors.hpp"
#include "abw/kernels.hpp"
#include "abw/market.hpp"
#include "abw/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_level(double beta, const char* what)
{
    if (!(beta > 0.0 && beta < 1.0)) {
        throw DomainError(std::string(what) + ": level must lie in (0,1)");
    }
}

// Mass of the final cell missed by the midpoint value, for g ≈ A·exp(b·z) in the tail.
double tail_residual_estimate(const QuantileGrid& g)
{
    const std::size_t n = g.size();
    if (n < 3 || !(g[n - 2] > 0.0)) {
        return 0.0;
    }
    const double z1 = normal::quantile(midpoint(n - 2, n));
    const double z2 = normal::quantile(midpoint(n - 1, n));
    const double b = std::log(g[n - 1] / g[n - 2]) / (z2 - z1);
    if (!std::isfinite(b)) {
        return 0.0;
    }
    const double z_lo = normal::quantile(1.0 - 1.0 / static_cast<double>(n));
    const double a = g[n - 1] * std::exp(-b * z2);
    // ∫_{z_lo}^∞ A·e^{bz}φ(z)dz = A·e^{b²/2}·Φ(b − z_lo)
    const double exact = a * std::exp(0.5 * b * b) * normal::cdf(b - z_lo);
    return exact - g[n - 1] / static_cast<double>(n);
}

}  // namespace

double expected_utility(const Utility& util, const QuantileGrid& g, double c,
                        const QuantileGrid& benchmark)
{
    require_same_grid(g.size(), benchmark.size(), "expected_utility");
    if (g.empty()) {
        return 0.0;
    }
    return kernels::utility_mean(util, g.data(), benchmark.data(), c, g.size());
}

double cost(const QuantileGrid& g, const std::vector<double>& xi)
{
    require_same_grid(g.size(), xi.size(), "cost");
    if (g.empty()) {
        return 0.0;
    }
    return kernels::weighted_mean(g.data(), xi.data(), g.size());
}

double quantile_at(const QuantileGrid& g, double u)
{
    check_level(u, "quantile_at");
    const std::size_t n = g.size();
    if (n == 0) {
        throw DomainError("quantile_at: empty grid");
    }
    const double pos = u * static_cast<double>(n) - 0.5;
    if (pos <= 0.0) {
        return g[0];
    }
    if (pos >= static_cast<double>(n - 1)) {
        return g[n - 1];
    }
    const auto k = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(k);
    return (1.0 - w) * g[k] + w * g[k + 1];
}

double lower_integral(const QuantileGrid& g, double beta)
{
    check_level(beta, "lower_integral");
    const std::size_t n = g.size();
    const double cells = beta * static_cast<double>(n);
    const auto full = std::min(static_cast<std::size_t>(cells), n);
    double s = 0.0;
    for (std::size_t i = 0; i < full; ++i) {
        s += g[i];
    }
    if (full < n) {
        s += (cells - static_cast<double>(full)) * g[full];
    }
    return s / static_cast<double>(n);
}

double upper_integral(const QuantileGrid& g, double beta)
{
    check_level(beta, "upper_integral");
    double total = 0.0;
    for (double v : g.values()) {
        total += v;
    }
    return total / static_cast<double>(g.size()) - lower_integral(g, beta);
}

DensityCurve density_curve(const QuantileGrid& g, const std::vector<double>& support, double cap)
{
    const std::size_t n = g.size();
    if (n < 2) {
        throw DomainError("density_curve needs at least two nodes");
    }
    DensityCurve out;
    out.cap = cap;
    const double du = 1.0 / static_cast<double>(n);
    std::vector<double> node_pdf(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = (i == 0) ? 0 : i - 1;
        const std::size_t hi = (i + 1 == n) ? n - 1 : i + 1;
        const double dg = g[hi] - g[lo];
        const double span = static_cast<double>(hi - lo) * du;
        if (dg > span / cap) {
            node_pdf[i] = span / dg;
        } else {
            node_pdf[i] = cap;
            ++out.capped;
        }
    }
    out.x = support;
    out.pdf.assign(support.size(), 0.0);
    const std::vector<double>& v = g.values();
    for (std::size_t j = 0; j < support.size(); ++j) {
        const double x = support[j];
        if (x < v.front() || x > v.back()) {
            continue;
        }
        auto it = std::upper_bound(v.begin(), v.end(), x);
        if (it == v.end()) {
            out.pdf[j] = node_pdf[n - 1];
            continue;
        }
        const auto k = static_cast<std::size_t>(it - v.begin());
        if (k == 0) {
            out.pdf[j] = node_pdf[0];
            continue;
        }
        const double x0 = v[k - 1];
        const double x1 = v[k];
        const double w = (x1 > x0) ? (x - x0) / (x1 - x0) : 0.0;
        out.pdf[j] = (1.0 - w) * node_pdf[k - 1] + w * node_pdf[k];
    }
    return out;
}

StatsReport stats(const QuantileGrid& g, const ProblemGrid& pg, const StatsLevels& levels)
{
    require_same_grid(g.size(), pg.size(), "stats");
    check_level(levels.var, "stats");
    check_level(levels.es, "stats");
    check_level(levels.ute, "stats");
    const std::size_t n = g.size();
    const double dn = static_cast<double>(n);
    StatsReport r;
    r.var_level = levels.var;
    r.es_level = levels.es;
    r.ute_level = levels.ute;
    r.expected_utility = pg.expected_utility(g.values());
    r.cost = pg.cost(g.values());
    r.abw = pg.abw(g.values());

    const MarketParams* m = pg.market_params();
    const double ref = pg.benchmark_mean() / pg.y0();

    if (g.benchmark_derived() && m != nullptr) {
        // Exact lognormal integrals in place of the truncated midpoint sums.
        r.tail_corrected = true;
        const double mean = m->initial_wealth * std::exp(m->gamma);
        const double second = benchmark_partial_moment(*m, 0.0, 1.0, 2);
        r.mean = mean;
        r.std_dev = std::sqrt(std::max(second - mean * mean, 0.0));
        r.var = -benchmark_quantile(*m, levels.var);
        r.es = -benchmark_partial_moment(*m, 0.0, levels.es, 1) / levels.es;
        r.ute = benchmark_partial_moment(*m, levels.ute, 1.0, 1) / (1.0 - levels.ute);
        // Gain and loss integrals of Y/X₀ against m, with X₀ the exact benchmark cost.
        const double x0 = m->initial_wealth;
        const double strike = ref * x0;
        const double u_k = benchmark_cdf(*m, strike);
        const double gain = (benchmark_partial_moment(*m, u_k, 1.0, 1) - strike * (1.0 - u_k)) / x0;
        const double loss = gain - (mean - strike) / x0;
        r.glr_infinite = !(loss > 0.0);
        r.glr = r.glr_infinite ? kInf : gain / loss;
        return r;
    }

    double s1 = 0.0;
    double s2 = 0.0;
    for (double v : g.values()) {
        s1 += v;
        s2 += v * v;
    }
    r.mean = s1 / dn;
    r.std_dev = std::sqrt(std::max(s2 / dn - r.mean * r.mean, 0.0));
    r.var = -quantile_at(g, levels.var);
    r.es = -lower_integral(g, levels.es) / levels.es;
    r.ute = upper_integral(g, levels.ute) / (1.0 - levels.ute);
    r.tail_residual = tail_residual_estimate(g);

    const double x0 = r.cost;
    double gain = 0.0;
    double loss = 0.0;
    for (double v : g.values()) {
        const double d = v / x0 - ref;
        if (d > 0.0) {
            gain += d;
        } else {
            loss -= d;
        }
    }
    r.glr_infinite = !(loss > 0.0);
    r.glr = r.glr_infinite ? kInf : gain / loss;
    return r;
}

}  // namespace abw
