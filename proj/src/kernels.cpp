#include "abw/kernels.hpp"

#include "abw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#ifdef ABW_HAVE_OPENMP
#include <omp.h>
#endif

namespace abw::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMaxStep = 8.0;
constexpr int kMaxNodeIter = 300;

template <class Body>
void for_blocks(std::size_t n, Body&& body)
{
    const long nb = static_cast<long>((n + kBlock - 1) / kBlock);
#ifdef ABW_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long b = 0; b < nb; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        body(lo, std::min(n, lo + kBlock));
    }
}

template <class Term>
double blocked_mean(std::size_t n, Term&& term)
{
    const std::size_t nb = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nb, 0.0);
    for_blocks(n, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            s += term(i);
        }
        partial[lo / kBlock] = s;
    });
    double total = 0.0;
    for (double p : partial) {
        total += p;
    }
    return total / static_cast<double>(n);
}

void check_nonnegative(const double* g, std::size_t n, const char* what)
{
    for (std::size_t i = 0; i < n; ++i) {
        if (!(g[i] >= 0.0) || std::isinf(g[i])) {
            throw DomainError(std::string(what) + ": grid value outside the generator domain");
        }
    }
}

// One node of the piecewise assembly. warm_a/warm_b carry the previous roots
// of the α† branch and the other branch.
double assembled_node(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
                      std::size_t i, double eta1, double eta2, double alpha, double& warm_a,
                      double& warm_b, double& beta)
{
    const double f = in.benchmark[i];
    const double fl = in.c * f;
    const double gf = in.grad_benchmark[i];
    const double xi = in.xi[i];
    const double a_dag = alpha > 0.5 ? alpha : 1.0 - alpha;
    const double s_dag = eta2 * a_dag;
    const double x_dag = solve_node(util, gen, fl, s_dag, s_dag * gf - eta1 * xi, warm_a);
    warm_a = x_dag;
    if (alpha == 0.5) {
        beta = 0.5;
        return x_dag;
    }
    const bool upper = f <= x_dag;
    if (upper == (alpha > 0.5)) {
        beta = a_dag;
        return x_dag;
    }
    const double b_other = alpha > 0.5 ? 1.0 - alpha : alpha;
    const double s_o = eta2 * b_other;
    const double x_o = solve_node(util, gen, fl, s_o, s_o * gf - eta1 * xi, warm_b);
    warm_b = x_o;
    beta = b_other;
    return x_o;
}

}  // namespace

void set_thread_limit(int threads)
{
#ifdef ABW_HAVE_OPENMP
    omp_set_num_threads(threads >= 1 ? threads : omp_get_num_procs());
#else
    (void)threads;
#endif
}

int thread_count()
{
#ifdef ABW_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

double solve_node(const Utility& util, const BregmanGenerator& gen, double floor, double s,
                  double t, double warm)
{
    if (!(s > 0.0)) {
        if (!(t < 0.0)) {
            return kInf;
        }
        return floor + util.marginal_inverse(-t);
    }
    // f(w) = −U'(y) + s·φ'(floor + y) − t with y = e^w, increasing in w.
    auto eval = [&](double w, double& df) {
        const double y = std::exp(w);
        double up = 0.0;
        double nupp = 0.0;
        util.marginal_and_curvature(y, up, nupp);
        double g = 0.0;
        double h = 0.0;
        gen.grad_hess(floor + y, g, h);
        df = y * (nupp + s * h);
        return -up + s * g - t;
    };

    double w = 0.0;
    if (warm > floor && std::isfinite(warm)) {
        w = std::log(warm - floor);
    } else if (floor > 0.0) {
        w = std::log(floor);
    }
    double lo = -kInf;
    double hi = kInf;
    for (int it = 0; it < kMaxNodeIter; ++it) {
        double df = 0.0;
        const double fw = eval(w, df);
        if (fw == 0.0) {
            return floor + std::exp(w);
        }
        if (std::isnan(fw)) {
            return kNaN;
        }
        if (fw < 0.0) {
            lo = w;
        } else {
            hi = w;
        }
        double next = w - fw / df;
        const bool newton_ok = std::isfinite(next) && df > 0.0;
        if (std::isfinite(lo) && std::isfinite(hi)) {
            if (!newton_ok || !(next > lo && next < hi)) {
                next = 0.5 * (lo + hi);
            }
        } else if (!newton_ok) {
            next = (fw < 0.0) ? w + kMaxStep : w - kMaxStep;
        } else {
            next = std::clamp(next, w - kMaxStep, w + kMaxStep);
            if (next <= lo || next >= hi) {
                next = (fw < 0.0) ? w + kMaxStep : w - kMaxStep;
            }
        }
        const double scale = std::max(1.0, std::abs(w));
        if (std::abs(next - w) <= 1e-15 * scale ||
            (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= 1e-15 * scale)) {
            return floor + std::exp(next);
        }
        w = next;
        if (w > 709.0 || w < -745.0) {
            return kNaN;
        }
    }
    return kNaN;
}

void solve_nodes(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
                 double s, const double* target, double* out)
{
    for_blocks(in.n, [&](std::size_t lo, std::size_t hi) {
        double warm = kNaN;
        for (std::size_t i = lo; i < hi; ++i) {
            out[i] = solve_node(util, gen, in.c * in.benchmark[i], s, target[i], warm);
            warm = out[i];
        }
    });
}

void candidate(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
               double eta1, double eta2, double beta, double* out)
{
    const double s = eta2 * beta;
    for_blocks(in.n, [&](std::size_t lo, std::size_t hi) {
        double warm = kNaN;
        for (std::size_t i = lo; i < hi; ++i) {
            const double t = s * in.grad_benchmark[i] - eta1 * in.xi[i];
            out[i] = solve_node(util, gen, in.c * in.benchmark[i], s, t, warm);
            warm = out[i];
        }
    });
}

void assembled(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
               double eta1, double eta2, double alpha, double* out, double* beta_used)
{
    for_blocks(in.n, [&](std::size_t lo, std::size_t hi) {
        double warm_a = kNaN;
        double warm_b = kNaN;
        for (std::size_t i = lo; i < hi; ++i) {
            double beta = 0.0;
            out[i] = assembled_node(util, gen, in, i, eta1, eta2, alpha, warm_a, warm_b, beta);
            if (beta_used != nullptr) {
                beta_used[i] = beta;
            }
        }
    });
}

double weighted_mean(const double* g, const double* w, std::size_t n)
{
    return blocked_mean(n, [&](std::size_t i) { return g[i] * w[i]; });
}

double abw_mean(const DivergenceSpec& spec, const double* g1, const double* g2, std::size_t n)
{
    check_nonnegative(g1, n, "abw_mean");
    check_nonnegative(g2, n, "abw_mean");
    return blocked_mean(n, [&](std::size_t i) { return alpha_bw_integrand(spec, g1[i], g2[i]); });
}

double utility_mean(const Utility& util, const double* g, const double* benchmark, double c,
                    std::size_t n)
{
    return blocked_mean(n, [&](std::size_t i) { return util.value(g[i] - c * benchmark[i]); });
}

namespace serial {

void solve_nodes(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
                 double s, const double* target, double* out)
{
    double warm = kNaN;
    for (std::size_t i = 0; i < in.n; ++i) {
        out[i] = solve_node(util, gen, in.c * in.benchmark[i], s, target[i], warm);
        warm = out[i];
    }
}

void candidate(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
               double eta1, double eta2, double beta, double* out)
{
    const double s = eta2 * beta;
    double warm = kNaN;
    for (std::size_t i = 0; i < in.n; ++i) {
        const double t = s * in.grad_benchmark[i] - eta1 * in.xi[i];
        out[i] = solve_node(util, gen, in.c * in.benchmark[i], s, t, warm);
        warm = out[i];
    }
}

void assembled(const Utility& util, const BregmanGenerator& gen, const CandidateInputs& in,
               double eta1, double eta2, double alpha, double* out, double* beta_used)
{
    double warm_a = kNaN;
    double warm_b = kNaN;
    for (std::size_t i = 0; i < in.n; ++i) {
        double beta = 0.0;
        out[i] = assembled_node(util, gen, in, i, eta1, eta2, alpha, warm_a, warm_b, beta);
        if (beta_used != nullptr) {
            beta_used[i] = beta;
        }
    }
}

double weighted_mean(const double* g, const double* w, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += g[i] * w[i];
    }
    return s / static_cast<double>(n);
}

double abw_mean(const DivergenceSpec& spec, const double* g1, const double* g2, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += alpha_bw_integrand(spec, g1[i], g2[i]);
    }
    return s / static_cast<double>(n);
}

double utility_mean(const Utility& util, const double* g, const double* benchmark, double c,
                    std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += util.value(g[i] - c * benchmark[i]);
    }
    return s / static_cast<double>(n);
}

}  // namespace serial

}  // namespace abw::kernels
