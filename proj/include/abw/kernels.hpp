/// @file kernels.hpp
/// @brief Grid kernels: per-node inversions and quadrature sums.
///
/// The top-level functions split the grid into fixed blocks of kBlock nodes and
/// run blocks in parallel under OpenMP. Warm starts never cross a block boundary
/// and block partial sums are added in block order, so results do not depend on
/// the thread count. The serial namespace holds single-threaded reference
/// versions with a plain left-to-right loop.
#pragma once

#include "abw/divergence.hpp"
#include "abw/preferences.hpp"

#include <cstddef>

namespace abw::kernels {

inline constexpr std::size_t kBlock = 1024;

/// Caps the number of OpenMP threads; values < 1 restore the default.
void set_thread_limit(int threads);

/// Threads the parallel kernels will use.
int thread_count();

/// Root x in (floor, ∞) of −U'(x − floor) + s·φ'(x) = t.
///
/// Newton on log(x − floor) with bisection safeguard once a bracket is known.
/// warm is a previous root used as the starting point (ignored if ≤ floor).
/// For s = 0 the root is floor + (U')⁻¹(−t), or +∞ when t ≥ 0. Returns NaN on
/// failure and never throws.
double solve_node(const Utility& util, const BregmanGenerator& gen, double floor, double s,
                  double t, double warm);

/// Grid data entering the candidate quantile formula.
struct CandidateInputs {
    const double* benchmark = nullptr;       ///< F̆_Y at the nodes
    const double* grad_benchmark = nullptr;  ///< φ'(F̆_Y)
    const double* xi = nullptr;              ///< ξ weights
    double c = 0.0;                          ///< floor proportion
    std::size_t n = 0;
};

/// Per-node roots for targets t_i with slope s, floors c·F_i.
void solve_nodes(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
                 double s, const double* target, double* out);

/// Candidate quantile for multipliers (η₁, η₂) and branch β, with targets
/// η₂βφ'(F_i) − η₁ξ_i taken as already non-decreasing.
void candidate(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
               double eta1, double eta2, double beta, double* out);

/// Piecewise assembly of the α and 1−α branches. If beta_used is non-null it
/// receives the branch parameter used at each node.
void assembled(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
               double eta1, double eta2, double alpha, double* out, double* beta_used);

/// (1/n)·Σ g_i·w_i.
double weighted_mean(const double* g, const double* w, std::size_t n);

/// (1/n)·Σ |1{g1 ≤ g2} − α|·B(g1_i, g2_i).
double abw_mean(const DivergenceSpec& spec, const double* g1, const double* g2, std::size_t n);

/// (1/n)·Σ U(g_i − c·F_i); −∞ if any node is below its floor.
double utility_mean(const Utility& util, const double* g, const double* benchmark, double c,
                    std::size_t n);

namespace serial {

void solve_nodes(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
                 double s, const double* target, double* out);
void candidate(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
               double eta1, double eta2, double beta, double* out);
void assembled(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
               double eta1, double eta2, double alpha, double* out, double* beta_used);
double weighted_mean(const double* g, const double* w, std::size_t n);
double abw_mean(const DivergenceSpec& spec, const double* g1, const double* g2, std::size_t n);
double utility_mean(const Utility& util, const double* g, const double* benchmark, double c,
                    std::size_t n);

}  // namespace serial

}  // namespace abw::kernels
