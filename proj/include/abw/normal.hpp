/// @file normal.hpp
/// @brief Standard normal density, distribution and quantile.
#pragma once

namespace abw::normal {

/// Standard normal density.
double pdf(double z);

/// Log of the standard normal density.
double log_pdf(double z);

/// Standard normal distribution function, erfc based.
double cdf(double z);

/// Standard normal quantile for p in (0,1).
///
/// Rational approximation (Acklam) followed by one Halley step,
/// giving close to full double precision. Throws DomainError outside (0,1).
double quantile(double p);

}  // namespace abw::normal
