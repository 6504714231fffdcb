/// @file runner.hpp
/// @brief Experiment orchestration behind the command-line subcommands.
#pragma once

#include "abw/config.hpp"
#include "abw/market.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace abw {

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitInfeasible = 2 };

struct RunOptions {
    std::optional<std::string> out_dir;  ///< overrides output.directory
    std::optional<std::size_t> grid;     ///< overrides numerics.grid
    bool dry_run = false;
    bool verbose = false;
};

/// Solves every case and writes summary.csv, per-case CSV files and SVG plots.
int run(const RunConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& log);

/// Writes the α-BW integrand of the shifted benchmark for the configured lattices.
int figure1(const RunConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& log);

/// Parses and validates; prints the resolved case matrix.
int validate(const RunConfig& cfg, const RunOptions& opts, std::ostream& out, std::ostream& log);

/// Integrand columns for one figure panel.
struct Figure1Data {
    std::vector<double> u;
    std::vector<double> benchmark;
    std::vector<double> modified;
    std::vector<std::string> labels;
    std::vector<double> p;
    std::vector<double> alpha;
    std::vector<std::vector<double>> integrand;
};

/// Integrands for every (p, α) pair of the two lattices, duplicates removed.
Figure1Data figure1_data(const MarketParams& m, const Figure1Options& opts);

}  // namespace abw
