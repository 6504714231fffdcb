#include "abw/errors.hpp"
#include "abw/normal.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

TEST(Normal, PdfAndLogPdfAgree)
{
    for (double z : {-8.0, -1.5, 0.0, 0.3, 4.0}) {
        EXPECT_NEAR(std::log(abw::normal::pdf(z)), abw::normal::log_pdf(z), 1e-12);
    }
    EXPECT_NEAR(abw::normal::pdf(0.0), 0.3989422804014327, 1e-15);
}

TEST(Normal, CdfKnownValues)
{
    EXPECT_DOUBLE_EQ(abw::normal::cdf(0.0), 0.5);
    EXPECT_NEAR(abw::normal::cdf(1.959963984540054), 0.975, 1e-15);
    EXPECT_NEAR(abw::normal::cdf(-10.0), 7.619853024160527e-24, 1e-36);
}

TEST(Normal, QuantileInvertsCdf)
{
    for (double p : {1e-300, 1e-12, 1e-6, 0.02425, 0.05, 0.3, 0.5, 0.7, 0.97575, 1 - 1e-6, 1 - 1e-12}) {
        const double z = abw::normal::quantile(p);
        if (p < 0.5) {
            EXPECT_NEAR(abw::normal::cdf(z) / p, 1.0, 1e-12) << p;
        } else {
            EXPECT_NEAR(abw::normal::cdf(-z), 1.0 - p, 1e-12 * (1.0 - p) + 1e-16) << p;
        }
    }
    EXPECT_DOUBLE_EQ(abw::normal::quantile(0.5), 0.0);
    EXPECT_NEAR(abw::normal::quantile(0.975), 1.959963984540054, 1e-14);
}

TEST(Normal, QuantileIsOddAroundHalf)
{
    for (double p : {0.001, 0.1, 0.25, 0.4}) {
        EXPECT_NEAR(abw::normal::quantile(p), -abw::normal::quantile(1.0 - p), 1e-12);
    }
}

TEST(Normal, QuantileRejectsOutsideUnitInterval)
{
    EXPECT_THROW(abw::normal::quantile(0.0), abw::DomainError);
    EXPECT_THROW(abw::normal::quantile(1.0), abw::DomainError);
    EXPECT_THROW(abw::normal::quantile(-0.1), abw::DomainError);
    EXPECT_THROW(abw::normal::quantile(std::nan("")), abw::DomainError);
}

}  // namespace
