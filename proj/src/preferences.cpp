#include "abw/preferences.hpp"

#include "abw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace abw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ∫ from x_k to x of U'_k·(t/x_k)^s dt.
double power_segment_integral(double xk, double mk, double s, double x)
{
    const double r = x / xk;
    if (std::abs(s + 1.0) < 1e-12) {
        return mk * xk * std::log(r);
    }
    return mk * xk * (std::pow(r, s + 1.0) - 1.0) / (s + 1.0);
}

}  // namespace

TabulatedUtility::TabulatedUtility(std::vector<double> x, std::vector<double> marginal)
{
    if (x.size() < 2 || x.size() != marginal.size()) {
        throw DomainError("tabulated utility needs at least two (x, U') pairs");
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0) || !(marginal[k] > 0.0) || !std::isfinite(x[k]) ||
            !std::isfinite(marginal[k])) {
            throw DomainError("tabulated utility needs positive finite x and U'");
        }
        if (k > 0 && (!(x[k] > x[k - 1]) || !(marginal[k] < marginal[k - 1]))) {
            throw DomainError("tabulated utility needs increasing x and decreasing U'");
        }
        logx_.push_back(std::log(x[k]));
        logm_.push_back(std::log(marginal[k]));
    }
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        slope_.push_back((logm_[k + 1] - logm_[k]) / (logx_[k + 1] - logx_[k]));
    }
    if (!(slope_.front() > -1.0)) {
        throw DomainError("tabulated utility: U' must be integrable at 0 (end slope > -1)");
    }
    // U at the first node from the extrapolated power law, then exact segment integrals.
    const double s0 = slope_.front();
    cum_.assign(x.size(), 0.0);
    cum_[0] = marginal[0] * x[0] / (s0 + 1.0);
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        cum_[k + 1] = cum_[k] + power_segment_integral(x[k], marginal[k], slope_[k], x[k + 1]);
    }
}

std::size_t TabulatedUtility::segment(double x) const
{
    const double lx = std::log(x);
    if (lx <= logx_.front()) {
        return 0;
    }
    if (lx >= logx_.back()) {
        return slope_.size() - 1;
    }
    const auto it = std::upper_bound(logx_.begin(), logx_.end(), lx);
    return static_cast<std::size_t>(it - logx_.begin()) - 1;
}

double TabulatedUtility::marginal(double x) const
{
    const std::size_t k = segment(x);
    return std::exp(logm_[k] + slope_[k] * (std::log(x) - logx_[k]));
}

double TabulatedUtility::marginal_slope(double x) const
{
    const std::size_t k = segment(x);
    return slope_[k] * marginal(x) / x;
}

double TabulatedUtility::value(double x) const
{
    const double lx = std::log(x);
    if (lx <= logx_.front()) {
        const double s0 = slope_.front();
        const double m = marginal(x);
        return m * x / (s0 + 1.0);
    }
    const std::size_t k = segment(x);
    const double xk = std::exp(logx_[k]);
    return cum_[k] + power_segment_integral(xk, std::exp(logm_[k]), slope_[k], x);
}

double TabulatedUtility::marginal_inverse(double y) const
{
    const double ly = std::log(y);
    std::size_t k = 0;
    if (ly <= logm_.back()) {
        k = slope_.size() - 1;
    } else if (ly < logm_.front()) {
        // logm_ is decreasing; find the segment with logm_[k] >= ly > logm_[k+1].
        k = 0;
        while (k + 1 < slope_.size() && logm_[k + 1] >= ly) {
            ++k;
        }
    }
    return std::exp(logx_[k] + (ly - logm_[k]) / slope_[k]);
}

Utility Utility::crra(double gamma)
{
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw DomainError("CRRA risk aversion must lie in (0,1)");
    }
    Utility out;
    out.kind_ = CrraUtility{gamma};
    return out;
}

Utility Utility::tabulated(std::vector<double> x, std::vector<double> marginal)
{
    Utility out;
    out.kind_ = TabulatedUtility(std::move(x), std::move(marginal));
    return out;
}

double Utility::risk_aversion() const
{
    if (const auto* c = std::get_if<CrraUtility>(&kind_)) {
        return c->gamma;
    }
    throw DomainError("utility is not CRRA");
}

double Utility::value(double x) const
{
    if (std::isnan(x)) {
        return x;
    }
    if (x < 0.0) {
        return -kInf;
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (const auto* c = std::get_if<CrraUtility>(&kind_)) {
        return std::pow(x, 1.0 - c->gamma) / (1.0 - c->gamma);
    }
    return std::get<TabulatedUtility>(kind_).value(x);
}

double Utility::marginal(double x) const
{
    if (std::isnan(x)) {
        return x;
    }
    if (x <= 0.0) {
        return kInf;
    }
    if (const auto* c = std::get_if<CrraUtility>(&kind_)) {
        return std::pow(x, -c->gamma);
    }
    return std::get<TabulatedUtility>(kind_).marginal(x);
}

double Utility::marginal_inverse(double y) const
{
    if (!(y > 0.0)) {
        throw DomainError("marginal_inverse requires y > 0");
    }
    if (std::isinf(y)) {
        return 0.0;
    }
    if (const auto* c = std::get_if<CrraUtility>(&kind_)) {
        return std::pow(y, -1.0 / c->gamma);
    }
    return std::get<TabulatedUtility>(kind_).marginal_inverse(y);
}

void Utility::marginal_and_curvature(double y, double& up, double& neg_upp) const
{
    if (const auto* c = std::get_if<CrraUtility>(&kind_)) {
        up = std::pow(y, -c->gamma);
        neg_upp = c->gamma * up / y;
        return;
    }
    const auto& tab = std::get<TabulatedUtility>(kind_);
    up = tab.marginal(y);
    neg_upp = -tab.marginal_slope(y);
}

double u(const Utility& util, double x) { return util.value(x); }
double marginal(const Utility& util, double x) { return util.marginal(x); }
double marginal_inverse(const Utility& util, double y) { return util.marginal_inverse(y); }

}  // namespace abw
