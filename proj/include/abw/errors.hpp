/// @file errors.hpp
/// @brief Exception types shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace abw {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Market parameters that violate the model invariants.
class InvalidMarket : public std::invalid_argument {
public:
    explicit InvalidMarket(const std::string& what) : std::invalid_argument(what) {}
};

/// Two grids that are not defined on the same u-grid.
class GridMismatch : public std::invalid_argument {
public:
    explicit GridMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// Root finder that could not bracket or converge.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace abw
