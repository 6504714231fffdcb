#include "abw/errors.hpp"
#include "abw/preferences.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Crra, Values)
{
    const auto util = abw::Utility::crra(0.5);
    EXPECT_DOUBLE_EQ(abw::u(util, 4.0), 4.0);
    EXPECT_EQ(abw::u(util, 0.0), 0.0);
    EXPECT_EQ(abw::u(util, -1.0), -kInf);
    EXPECT_DOUBLE_EQ(util.risk_aversion(), 0.5);
}

TEST(Crra, MarginalAndInverse)
{
    const auto util = abw::Utility::crra(0.5);
    EXPECT_DOUBLE_EQ(abw::marginal_inverse(util, 4.0), 0.0625);
    EXPECT_EQ(abw::marginal(util, 0.0), kInf);
    EXPECT_EQ(abw::marginal(util, -2.0), kInf);
    EXPECT_EQ(abw::marginal_inverse(util, kInf), 0.0);
    for (double x : {0.1, 1.0, 10.0}) {
        EXPECT_NEAR(abw::marginal_inverse(util, abw::marginal(util, x)), x, 1e-12 * x);
    }
    EXPECT_THROW(abw::marginal_inverse(util, 0.0), abw::DomainError);
    EXPECT_THROW(abw::marginal_inverse(util, -1.0), abw::DomainError);
}

TEST(Crra, MarginalStrictlyDecreasing)
{
    const auto util = abw::Utility::crra(0.3);
    double prev = kInf;
    for (double x = 1e-3; x < 1e3; x *= 1.1) {
        const double m = abw::marginal(util, x);
        ASSERT_LT(m, prev);
        prev = m;
    }
}

TEST(Crra, CurvatureMatchesFiniteDifference)
{
    const auto util = abw::Utility::crra(0.5);
    double up = 0.0;
    double negupp = 0.0;
    util.marginal_and_curvature(2.0, up, negupp);
    EXPECT_DOUBLE_EQ(up, abw::marginal(util, 2.0));
    const double h = 1e-5;
    const double fd = -(abw::marginal(util, 2.0 + h) - abw::marginal(util, 2.0 - h)) / (2 * h);
    EXPECT_NEAR(negupp, fd, 1e-8);
}

TEST(Crra, RejectsGammaOutsideUnitInterval)
{
    EXPECT_THROW(abw::Utility::crra(0.0), abw::DomainError);
    EXPECT_THROW(abw::Utility::crra(1.0), abw::DomainError);
    EXPECT_THROW(abw::Utility::crra(2.0), abw::DomainError);
}

TEST(Tabulated, ReproducesCrraOnPowerLaw)
{
    // U' = x^{-1/2} is linear in log-log space, so the table is exact.
    std::vector<double> x;
    std::vector<double> m;
    for (double v : {0.1, 1.0, 10.0, 100.0}) {
        x.push_back(v);
        m.push_back(1.0 / std::sqrt(v));
    }
    const auto tab = abw::Utility::tabulated(x, m);
    const auto crra = abw::Utility::crra(0.5);
    EXPECT_FALSE(tab.is_crra());
    EXPECT_THROW(tab.risk_aversion(), abw::DomainError);
    for (double v : {0.01, 0.5, 3.0, 50.0, 1000.0}) {
        EXPECT_NEAR(tab.marginal(v), crra.marginal(v), 1e-12 * crra.marginal(v));
        EXPECT_NEAR(tab.value(v), crra.value(v), 1e-10 * crra.value(v));
        EXPECT_NEAR(tab.marginal_inverse(crra.marginal(v)), v, 1e-10 * v);
    }
    EXPECT_EQ(tab.value(0.0), 0.0);
    EXPECT_EQ(tab.value(-1.0), -kInf);
    EXPECT_EQ(tab.marginal(0.0), kInf);
}

TEST(Tabulated, RejectsBadTables)
{
    EXPECT_THROW(abw::Utility::tabulated({1.0, 2.0}, {1.0, 1.5}), abw::DomainError);
    EXPECT_THROW(abw::Utility::tabulated({1.0}, {1.0}), abw::DomainError);
    // Slope ≤ −1 near zero makes U(0) infinite.
    EXPECT_THROW(abw::Utility::tabulated({1.0, 2.0}, {1.0, 0.25}), abw::DomainError);
}

}  // namespace
