/// @file preferences.hpp
/// @brief Utility functions satisfying the Inada conditions.
#pragma once

#include <variant>
#include <vector>

namespace abw {

/// U(x) = x^{1−γ}/(1−γ) with γ in (0,1).
struct CrraUtility {
    double gamma = 0.5;
};

/// Utility given by tabulated U' on positive nodes.
///
/// U' is interpolated piecewise-linearly in log-log coordinates and extended
/// with the end slopes; U is the exact integral of that interpolant from 0.
class TabulatedUtility {
public:
    TabulatedUtility(std::vector<double> x, std::vector<double> marginal);

    double value(double x) const;
    double marginal(double x) const;
    double marginal_slope(double x) const;  ///< U''(x)
    double marginal_inverse(double y) const;

private:
    std::size_t segment(double x) const;
    std::vector<double> logx_;
    std::vector<double> logm_;
    std::vector<double> slope_;  ///< d log U' / d log x per segment
    std::vector<double> cum_;    ///< U at the nodes
};

/// Utility with IEEE infinities as the extended-real sentinels.
class Utility {
public:
    Utility() = default;
    static Utility crra(double gamma);
    static Utility tabulated(std::vector<double> x, std::vector<double> marginal);

    /// −∞ for x < 0, 0 at 0.
    double value(double x) const;
    /// +∞ for x ≤ 0.
    double marginal(double x) const;
    /// Throws DomainError for y ≤ 0.
    double marginal_inverse(double y) const;

    /// U'(y) and −U''(y) for y > 0 (unchecked).
    void marginal_and_curvature(double y, double& up, double& neg_upp) const;

    bool is_crra() const { return std::holds_alternative<CrraUtility>(kind_); }
    /// Relative risk aversion of a CRRA utility; throws DomainError otherwise.
    double risk_aversion() const;

private:
    std::variant<CrraUtility, TabulatedUtility> kind_ = CrraUtility{};
};

/// Free-function forms of the utility interface.
double u(const Utility& util, double x);
double marginal(const Utility& util, double x);
double marginal_inverse(const Utility& util, double y);

}  // namespace abw
