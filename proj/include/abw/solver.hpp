/// @file solver.hpp
/// @brief Boundary solutions, the both-binding search and regime dispatch.
#pragma once

#include "abw/grid.hpp"
#include "abw/problem.hpp"

#include <limits>
#include <string>
#include <vector>

namespace abw {

enum class Regime { BudgetOnly, DivergenceOnly, BothBinding, Infeasible };

const char* to_string(Regime r);

/// Lagrange multipliers: η₁ on the budget, η₂ on the divergence.
/// Budget-only results carry (λ^c, 0); divergence-only carry (0, λ^BW).
struct Multipliers {
    double eta1 = 0.0;
    double eta2 = 0.0;
};

/// Constraint and objective values achieved by a quantile grid.
struct Achieved {
    double cost = std::numeric_limits<double>::quiet_NaN();
    double abw = std::numeric_limits<double>::quiet_NaN();
    double expected_utility = std::numeric_limits<double>::quiet_NaN();
};

struct Diagnostics {
    int iterations = 0;   ///< outer root-finding iterations
    int evaluations = 0;  ///< grid evaluations of a candidate quantile
    double cost_residual = std::numeric_limits<double>::quiet_NaN();  ///< (cost − x₀)/x₀
    double abw_residual = std::numeric_limits<double>::quiet_NaN();   ///< (abw − ε)/max(ε, tiny)
    double eps_min = std::numeric_limits<double>::quiet_NaN();
    double eps_min_floor = std::numeric_limits<double>::quiet_NaN();  ///< ε_min with g ≥ c·F̆_Y
    double eps_infty = std::numeric_limits<double>::quiet_NaN();
    double x0_infty = std::numeric_limits<double>::quiet_NaN();
    double lambda_min = std::numeric_limits<double>::quiet_NaN();
    double lambda_c = std::numeric_limits<double>::quiet_NaN();
    double lambda_bw = std::numeric_limits<double>::quiet_NaN();
    double eta1_min = std::numeric_limits<double>::quiet_NaN();  ///< lower end of the η₁ search
    std::vector<double> sign_changes;  ///< η₁ locations of k − ℓ sign changes seen
    bool projected = false;   ///< an isotonic projection was applied
    bool admissible = true;   ///< floor, finiteness and integrability checks on the result
    std::vector<std::string> notes;
};

struct SolveResult {
    QuantileGrid quantile;
    Regime regime = Regime::Infeasible;
    Multipliers eta;
    Achieved achieved;
    Diagnostics diagnostics;
};

struct EpsMinResult {
    double eps_min = 0.0;
    QuantileGrid g_min;
    double lambda_min = 0.0;
};

/// Smallest feasible tolerance and its minimizer.
EpsMinResult eps_min(const ProblemGrid& pg);
EpsMinResult eps_min(const ProblemSpec& spec);

/// Smallest tolerance admitting a quantile that meets the budget and stays above
/// c·F̆_Y, where the utility is finite. Equals eps_min when c = 0 or y₀ ≤ x₀.
EpsMinResult eps_min_with_floor(const ProblemGrid& pg);

/// Optimum with the divergence constraint dropped; reports ε^∞.
SolveResult solve_budget_only(const ProblemGrid& pg);
SolveResult solve_budget_only(const ProblemSpec& spec);

/// Optimum with the budget constraint dropped; reports x₀^∞.
SolveResult solve_divergence_only(const ProblemGrid& pg);
SolveResult solve_divergence_only(const ProblemSpec& spec);

/// Divergence-only quantile for a given multiplier λ (not root-solved).
QuantileGrid divergence_only_quantile(const ProblemGrid& pg, double lambda);

/// Candidate quantile for multipliers η and branch parameter β.
QuantileGrid candidate_quantile(const ProblemGrid& pg, Multipliers eta, double beta);

/// Piecewise assembly of the α and 1−α candidates. beta_used, if non-null,
/// receives the branch parameter used at each node.
QuantileGrid assemble_piecewise(const ProblemGrid& pg, Multipliers eta,
                                std::vector<double>* beta_used = nullptr);

/// Both-binding solution; computes the boundary anchors itself.
SolveResult solve_both_binding(const ProblemGrid& pg);
SolveResult solve_both_binding(const ProblemSpec& spec);
/// Both-binding solution from precomputed boundary solutions.
SolveResult solve_both_binding(const ProblemGrid& pg, const SolveResult& budget_only,
                               const SolveResult& divergence_only);

/// Dispatch on the regime thresholds ε_min, ε^∞ and x₀^∞.
SolveResult solve(const ProblemGrid& pg);
SolveResult solve(const ProblemSpec& spec);

}  // namespace abw
