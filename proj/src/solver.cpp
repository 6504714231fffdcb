#include "abw/solver.hpp"

#include "abw/errors.hpp"
#include "abw/kernels.hpp"
#include "abw/projection.hpp"
#include "abw/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace abw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExpand = 4.0;
constexpr int kLattice = 64;
constexpr std::size_t kCoarseGrid = 2048;
constexpr int kMaxExpand = 40;  // 4^40 ≈ 1e24

void check_finite(const std::vector<double>& g, const char* what)
{
    for (double v : g) {
        if (!std::isfinite(v)) {
            throw ConvergenceError(std::string(what) + ": per-node inversion failed");
        }
    }
}

std::vector<double> candidate_vec(const ProblemGrid& pg, double eta1, double eta2, double beta,
                                  bool* projected)
{
    const ProblemSpec& spec = pg.spec();
    const std::size_t n = pg.size();
    std::vector<double> out(n);
    const kernels::CandidateInputs in = pg.inputs();
    if (pg.xi_nonincreasing()) {
        kernels::candidate(spec.utility, spec.divergence.generator, in, eta1, eta2, beta,
                           out.data());
    } else {
        const double s = eta2 * beta;
        std::vector<double> inner(n);
        for (std::size_t i = 0; i < n; ++i) {
            inner[i] = s * pg.grad_benchmark()[i] - eta1 * pg.xi()[i];
        }
        if (!is_nondecreasing(inner)) {
            inner = isotonic(inner);
            if (projected != nullptr) {
                *projected = true;
            }
        }
        kernels::solve_nodes(spec.utility, spec.divergence.generator, in, s, inner.data(),
                             out.data());
    }
    check_finite(out, "candidate_quantile");
    return out;
}

std::vector<double> assemble_vec(const ProblemGrid& pg, double eta1, double eta2,
                                 std::vector<double>* beta_used, bool* projected)
{
    const ProblemSpec& spec = pg.spec();
    const double alpha = spec.divergence.alpha;
    const std::size_t n = pg.size();
    if (beta_used != nullptr) {
        beta_used->assign(n, 0.0);
    }
    if (pg.xi_nonincreasing()) {
        std::vector<double> out(n);
        kernels::assembled(spec.utility, spec.divergence.generator, pg.inputs(), eta1, eta2, alpha,
                           out.data(), beta_used != nullptr ? beta_used->data() : nullptr);
        check_finite(out, "assemble_piecewise");
        return out;
    }
    const double a_dag = alpha > 0.5 ? alpha : 1.0 - alpha;
    std::vector<double> dag = candidate_vec(pg, eta1, eta2, a_dag, projected);
    if (alpha == 0.5) {
        if (beta_used != nullptr) {
            beta_used->assign(n, 0.5);
        }
        return dag;
    }
    const double b_other = alpha > 0.5 ? 1.0 - alpha : alpha;
    const std::vector<double> other = candidate_vec(pg, eta1, eta2, b_other, projected);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool upper = pg.benchmark()[i] <= dag[i];
        const bool take_dag = upper == (alpha > 0.5);
        out[i] = take_dag ? dag[i] : other[i];
        if (beta_used != nullptr) {
            (*beta_used)[i] = take_dag ? a_dag : b_other;
        }
    }
    return out;
}

std::vector<double> xi_descending(const ProblemGrid& pg)
{
    return pg.xi_nonincreasing() ? pg.xi() : antitonic(pg.xi());
}

std::vector<double> budget_vec(const ProblemGrid& pg, double lambda, const std::vector<double>& xid)
{
    const ProblemSpec& spec = pg.spec();
    std::vector<double> out(pg.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = spec.c * pg.benchmark()[i] + spec.utility.marginal_inverse(lambda * xid[i]);
    }
    return out;
}

// Evaluates cost and divergence of the assembled quantile.
class Evaluator {
public:
    explicit Evaluator(const ProblemGrid& pg) : pg_(pg) {}

    struct Value {
        double cost;
        double abw;
    };

    Value operator()(double eta1, double eta2)
    {
        g_ = assemble_vec(pg_, eta1, eta2, nullptr, &projected_);
        ++count_;
        return {pg_.cost(g_), pg_.abw(g_)};
    }

    int count() const { return count_; }
    bool projected() const { return projected_; }

private:
    const ProblemGrid& pg_;
    std::vector<double> g_;
    int count_ = 0;
    bool projected_ = false;
};

void finalize(const ProblemGrid& pg, std::vector<double> g, SolveResult& r)
{
    const ProblemSpec& spec = pg.spec();
    r.achieved.cost = pg.cost(g);
    r.achieved.abw = pg.abw(g);
    r.achieved.expected_utility = pg.expected_utility(g);
    r.diagnostics.cost_residual = (r.achieved.cost - spec.x0) / spec.x0;
    r.diagnostics.abw_residual =
        (r.achieved.abw - spec.divergence.epsilon) / std::max(spec.divergence.epsilon, 1e-300);
    bool ok = std::isfinite(r.achieved.cost) && std::isfinite(r.achieved.expected_utility);
    for (std::size_t i = 0; i < g.size() && ok; ++i) {
        const double floor = spec.c * pg.benchmark()[i];
        ok = std::isfinite(g[i]) && g[i] >= floor - 1e-12 * std::abs(floor);
    }
    r.diagnostics.admissible = ok;
    if (!ok) {
        r.diagnostics.notes.emplace_back("admissibility check failed on the solved grid");
    }
    r.quantile = QuantileGrid(std::move(g));
}

// ℓ(η₁): η₂ with abw = ε, decreasing in η₂.
double ell(const ProblemGrid& pg, Evaluator& ev, double e1, double lambda_bw)
{
    const ProblemSpec& spec = pg.spec();
    const double eps = spec.divergence.epsilon;
    const Tolerances& tol = spec.tol;
    if (e1 == 0.0) {
        return lambda_bw;
    }
    auto g = [&](double e2) { return ev(e1, e2).abw - eps; };
    const double g0 = g(0.0);
    if (g0 <= 0.0) {
        return 0.0;
    }
    double top = lambda_bw;
    double gtop = g(top);
    for (int it = 0; gtop > 0.0 && it < std::min(tol.max_iter, kMaxExpand); ++it) {
        top *= kExpand;
        gtop = g(top);
    }
    if (gtop > 0.0) {
        throw ConvergenceError("solve_both_binding: no bracket for l(eta1)");
    }
    return bracketed_root(g, 0.0, top, g0, gtop, tol.root_tol,
                          1e-2 * tol.constraint_tol * std::max(eps, 1e-300), tol.max_iter)
        .x;
}

struct Crossing {
    double eta1 = 0.0;
    double eta2 = 0.0;
    double eta1_min = 0.0;
    int iterations = 0;
    bool bracketed = true;
    std::vector<double> sign_changes;
};

// Bisection-type search for the crossing of the implicit curves k and ℓ.
Crossing crossing_search(const ProblemGrid& pg, double lambda_c, double lambda_bw,
                         Evaluator& ev, double outer_tol)
{
    const ProblemSpec& spec = pg.spec();
    const double x0 = spec.x0;
    const Tolerances& tol = spec.tol;
    Crossing out;

    // η₁^min: cost(η₁, λ^BW) = x₀, decreasing in η₁.
    auto cost_bw = [&](double e1) { return ev(e1, lambda_bw).cost - x0; };
    const double f0 = cost_bw(0.0);
    double hi = lambda_c;
    double fhi = cost_bw(hi);
    for (int it = 0; fhi >= 0.0 && it < std::min(tol.max_iter, kMaxExpand); ++it) {
        hi *= kExpand;
        fhi = cost_bw(hi);
    }
    if (fhi >= 0.0) {
        out.eta1_min = hi;
        out.bracketed = false;
        return out;
    }
    out.eta1_min = (f0 <= 0.0)
                       ? 0.0
                       : bracketed_root(cost_bw, 0.0, hi, f0, fhi, tol.root_tol,
                                        1e-2 * tol.constraint_tol * x0, tol.max_iter)
                             .x;

    // k(η₁): largest η₂ in [0, λ^BW] with cost = x₀, by a descending lattice scan.
    auto k_of = [&](double e1) {
        auto f = [&](double e2) { return ev(e1, e2).cost - x0; };
        double prev = lambda_bw;
        double fprev = f(prev);
        if (fprev >= 0.0) {
            return lambda_bw;
        }
        for (int j = 1; j <= kLattice; ++j) {
            const double e2 = (j == kLattice) ? 0.0 : lambda_bw * (1.0 - double(j) / kLattice);
            const double fe = f(e2);
            if (fe >= 0.0) {
                if (fe == 0.0) {
                    return e2;
                }
                return bracketed_root(f, e2, prev, fe, fprev, tol.root_tol,
                                      1e-2 * tol.constraint_tol * x0, tol.max_iter)
                    .x;
            }
            prev = e2;
            fprev = fe;
        }
        return 0.0;
    };

    auto l_of = [&](double e1) { return ell(pg, ev, e1, lambda_bw); };

    std::vector<std::pair<double, double>> seen;
    auto d_of = [&](double e1) {
        const double d = k_of(e1) - l_of(e1);
        seen.emplace_back(e1, d);
        return d;
    };

    const double d_lo = d_of(out.eta1_min);
    const double d_hi = -l_of(lambda_c);
    seen.emplace_back(lambda_c, d_hi);
    if (out.eta1_min >= lambda_c || d_lo < 0.0 || d_hi > 0.0) {
        out.bracketed = false;
        return out;
    }
    const RootResult rr = bracketed_root(d_of, out.eta1_min, lambda_c, d_lo, d_hi, outer_tol,
                                         outer_tol * lambda_bw, tol.max_iter);
    if (!rr.converged) {
        throw ConvergenceError("solve_both_binding: crossing search hit max_iter");
    }
    out.iterations = rr.iterations;
    out.eta1 = rr.x;
    out.eta2 = k_of(rr.x);

    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i) {
        if ((seen[i - 1].second >= 0.0) != (seen[i].second >= 0.0)) {
            out.sign_changes.push_back(0.5 * (seen[i - 1].first + seen[i].first));
        }
    }
    return out;
}

// Root of η₁ ↦ cost(η₁, ℓ(η₁)) − x₀ along the divergence-binding curve. Used
// when k − ℓ has no sign change on [η₁^min, λ^c].
Crossing ell_curve_search(const ProblemGrid& pg, double lambda_c, double lambda_bw,
                          Evaluator& ev, double outer_tol)
{
    const ProblemSpec& spec = pg.spec();
    const double x0 = spec.x0;
    const Tolerances& tol = spec.tol;
    Crossing out;
    double e2 = lambda_bw;
    auto h = [&](double e1) {
        e2 = ell(pg, ev, e1, lambda_bw);
        return ev(e1, e2).cost - x0;
    };
    const double h0 = h(0.0);
    if (!(h0 > 0.0)) {
        throw ConvergenceError("solve_both_binding: cost along l(eta1) starts below x0");
    }
    double lo = 0.0;
    double flo = h0;
    double hi = lambda_c;
    double fhi = h(hi);
    for (int it = 0; fhi > 0.0 && it < std::min(tol.max_iter, kMaxExpand); ++it) {
        lo = hi;
        flo = fhi;
        hi *= kExpand;
        fhi = h(hi);
    }
    if (fhi > 0.0) {
        throw ConvergenceError("solve_both_binding: no bracket along l(eta1)");
    }
    const RootResult rr = bracketed_root(h, lo, hi, flo, fhi, outer_tol,
                                         1e-2 * tol.constraint_tol * x0, tol.max_iter);
    if (!rr.converged) {
        throw ConvergenceError("solve_both_binding: search along l(eta1) hit max_iter");
    }
    out.iterations = rr.iterations;
    out.eta1 = rr.x;
    out.eta2 = ell(pg, ev, rr.x, lambda_bw);
    return out;
}

// k − ℓ crossing, falling back to the search along ℓ when it is not bracketed.
Crossing locate(const ProblemGrid& pg, double lambda_c, double lambda_bw, Evaluator& ev,
                double outer_tol, std::vector<std::string>& notes)
{
    Crossing cross = crossing_search(pg, lambda_c, lambda_bw, ev, outer_tol);
    if (cross.bracketed) {
        return cross;
    }
    notes.emplace_back("k - l not bracketed on [eta1_min, lambda_c]; searched along l(eta1)");
    Crossing alt = ell_curve_search(pg, lambda_c, lambda_bw, ev, outer_tol);
    alt.eta1_min = cross.eta1_min;
    alt.sign_changes = cross.sign_changes;
    alt.bracketed = false;
    return alt;
}

// Newton iteration on (log η₁, log η₂) for both constraints at once.
bool newton_polish(const ProblemGrid& pg, Evaluator& ev, double& eta1, double& eta2, int& iters)
{
    const ProblemSpec& spec = pg.spec();
    const double x0 = spec.x0;
    const double eps = spec.divergence.epsilon;
    const double ctol = spec.tol.constraint_tol;
    if (!(eta1 > 0.0) || !(eta2 > 0.0)) {
        return false;
    }
    auto resid = [&](double a, double b, double r[2]) {
        const auto v = ev(std::exp(a), std::exp(b));
        r[0] = (v.cost - x0) / x0;
        r[1] = (v.abw - eps) / eps;
    };
    auto norm = [](const double r[2]) { return std::max(std::abs(r[0]), std::abs(r[1])); };

    double a = std::log(eta1);
    double b = std::log(eta2);
    double r[2];
    resid(a, b, r);
    constexpr double h = 1e-6;
    for (int it = 0; it < 40; ++it) {
        if (norm(r) <= 1e-2 * ctol) {
            break;
        }
        ++iters;
        double ra[2];
        double rb[2];
        resid(a + h, b, ra);
        resid(a, b + h, rb);
        const double j11 = (ra[0] - r[0]) / h;
        const double j21 = (ra[1] - r[1]) / h;
        const double j12 = (rb[0] - r[0]) / h;
        const double j22 = (rb[1] - r[1]) / h;
        const double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || det == 0.0) {
            break;
        }
        double da = -(j22 * r[0] - j12 * r[1]) / det;
        double db = -(-j21 * r[0] + j11 * r[1]) / det;
        const double big = std::max(std::abs(da), std::abs(db));
        if (big > 0.5) {
            da *= 0.5 / big;
            db *= 0.5 / big;
        }
        double t = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 12; ++bt) {
            double rn[2];
            resid(a + t * da, b + t * db, rn);
            if (norm(rn) < (1.0 - 1e-4 * t) * norm(r)) {
                a += t * da;
                b += t * db;
                r[0] = rn[0];
                r[1] = rn[1];
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            break;
        }
    }
    eta1 = std::exp(a);
    eta2 = std::exp(b);
    return norm(r) <= ctol;
}

SolveResult infeasible(std::string why)
{
    SolveResult r;
    r.regime = Regime::Infeasible;
    r.diagnostics.notes.push_back(std::move(why));
    r.diagnostics.admissible = false;
    return r;
}

EpsMinResult eps_min_impl(const ProblemGrid& pg, bool with_floor)
{
    const ProblemSpec& spec = pg.spec();
    EpsMinResult out;
    if (pg.y0() <= spec.x0) {
        out.eps_min = 0.0;
        out.g_min = QuantileGrid(pg.benchmark());
        out.lambda_min = 0.0;
        return out;
    }
    const BregmanGenerator& gen = spec.divergence.generator;
    const double scale = 1.0 / (1.0 - spec.divergence.alpha);
    const std::size_t n = pg.size();
    auto g_of = [&](double lambda) {
        std::vector<double> inner(n);
        for (std::size_t i = 0; i < n; ++i) {
            inner[i] = pg.grad_benchmark()[i] - lambda * scale * pg.xi()[i];
        }
        if (!pg.xi_nonincreasing() && !is_nondecreasing(inner)) {
            inner = isotonic(inner);
        }
        for (std::size_t i = 0; i < n; ++i) {
            inner[i] = gen.grad_inverse(inner[i]);
            if (with_floor) {
                inner[i] = std::max(inner[i], spec.c * pg.benchmark()[i]);
            }
        }
        return inner;
    };
    auto f = [&](double lambda) { return pg.cost(g_of(lambda)) - spec.x0; };
    const Tolerances& tol = spec.tol;
    if (with_floor && spec.c * pg.y0() >= spec.x0) {
        std::vector<double> g(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = spec.c * pg.benchmark()[i];
        }
        out.lambda_min = kInf;
        out.eps_min = pg.abw(g);
        out.g_min = QuantileGrid(std::move(g));
        return out;
    }
    const Bracket br = expand_bracket(f, 1.0, kExpand, false, tol.max_iter, "eps_min");
    const RootResult rr = bracketed_root(f, br.lo, br.hi, br.flo, br.fhi, tol.root_tol,
                                         1e-2 * tol.constraint_tol * spec.x0, tol.max_iter);
    out.lambda_min = rr.x;
    std::vector<double> g = g_of(rr.x);
    out.eps_min = pg.abw(g);
    out.g_min = QuantileGrid(std::move(g));
    return out;
}

}  // namespace

const char* to_string(Regime r)
{
    switch (r) {
    case Regime::BudgetOnly:
        return "budget_only";
    case Regime::DivergenceOnly:
        return "divergence_only";
    case Regime::BothBinding:
        return "both_binding";
    case Regime::Infeasible:
        return "infeasible";
    }
    return "unknown";
}

EpsMinResult eps_min(const ProblemGrid& pg) { return eps_min_impl(pg, false); }

EpsMinResult eps_min_with_floor(const ProblemGrid& pg) { return eps_min_impl(pg, true); }

EpsMinResult eps_min(const ProblemSpec& spec) { return eps_min(ProblemGrid(spec)); }

SolveResult solve_budget_only(const ProblemGrid& pg)
{
    const ProblemSpec& spec = pg.spec();
    const Tolerances& tol = spec.tol;
    const double floor_cost = spec.c * pg.y0();
    if (floor_cost > spec.x0 * (1.0 + tol.constraint_tol)) {
        return infeasible("c*y0 exceeds the budget x0");
    }
    SolveResult r;
    r.regime = Regime::BudgetOnly;
    if (std::abs(spec.x0 - floor_cost) <= tol.constraint_tol * spec.x0) {
        std::vector<double> g(pg.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            g[i] = spec.c * pg.benchmark()[i];
        }
        r.eta = {kInf, 0.0};
        r.diagnostics.lambda_c = kInf;
        r.diagnostics.notes.emplace_back("x0 equals c*y0; solution is c times the benchmark");
        finalize(pg, std::move(g), r);
        r.diagnostics.eps_infty = r.achieved.abw;
        return r;
    }
    const std::vector<double> xid = xi_descending(pg);
    r.diagnostics.projected = !pg.xi_nonincreasing();
    auto f = [&](double lambda) { return pg.cost(budget_vec(pg, lambda, xid)) - spec.x0; };
    const Bracket br = expand_bracket(f, 1.0, kExpand, false, tol.max_iter, "solve_budget_only");
    const RootResult rr = bracketed_root(f, br.lo, br.hi, br.flo, br.fhi, tol.root_tol,
                                         1e-2 * tol.constraint_tol * spec.x0, tol.max_iter);
    if (!rr.converged) {
        throw ConvergenceError("solve_budget_only: root search hit max_iter");
    }
    r.eta = {rr.x, 0.0};
    r.diagnostics.iterations = rr.iterations;
    r.diagnostics.evaluations = rr.iterations + br.evaluations;
    r.diagnostics.lambda_c = rr.x;
    finalize(pg, budget_vec(pg, rr.x, xid), r);
    r.diagnostics.eps_infty = r.achieved.abw;
    return r;
}

SolveResult solve_budget_only(const ProblemSpec& spec)
{
    return solve_budget_only(ProblemGrid(spec));
}

QuantileGrid divergence_only_quantile(const ProblemGrid& pg, double lambda)
{
    return QuantileGrid(candidate_vec(pg, 0.0, lambda, pg.spec().divergence.alpha, nullptr));
}

SolveResult solve_divergence_only(const ProblemGrid& pg)
{
    const ProblemSpec& spec = pg.spec();
    const Tolerances& tol = spec.tol;
    const double alpha = spec.divergence.alpha;
    const double eps = spec.divergence.epsilon;
    SolveResult r;
    r.regime = Regime::DivergenceOnly;
    if (eps == 0.0) {
        r.eta = {0.0, kInf};
        r.diagnostics.lambda_bw = kInf;
        r.diagnostics.notes.emplace_back("epsilon is zero; solution is the benchmark");
        finalize(pg, pg.benchmark(), r);
        r.diagnostics.x0_infty = r.achieved.cost;
        return r;
    }
    int evals = 0;
    auto f = [&](double lambda) {
        ++evals;
        return pg.abw(candidate_vec(pg, 0.0, lambda, alpha, nullptr)) - eps;
    };
    const Bracket br =
        expand_bracket(f, 1.0, kExpand, false, tol.max_iter, "solve_divergence_only");
    const RootResult rr = bracketed_root(f, br.lo, br.hi, br.flo, br.fhi, tol.root_tol,
                                         1e-2 * tol.constraint_tol * eps, tol.max_iter);
    if (!rr.converged) {
        throw ConvergenceError("solve_divergence_only: root search hit max_iter");
    }
    r.eta = {0.0, rr.x};
    r.diagnostics.iterations = rr.iterations;
    r.diagnostics.evaluations = evals;
    r.diagnostics.lambda_bw = rr.x;
    finalize(pg, candidate_vec(pg, 0.0, rr.x, alpha, nullptr), r);
    r.diagnostics.x0_infty = r.achieved.cost;
    return r;
}

SolveResult solve_divergence_only(const ProblemSpec& spec)
{
    return solve_divergence_only(ProblemGrid(spec));
}

QuantileGrid candidate_quantile(const ProblemGrid& pg, Multipliers eta, double beta)
{
    if (!(eta.eta1 >= 0.0) || !(eta.eta2 >= 0.0)) {
        throw DomainError("candidate_quantile requires non-negative multipliers");
    }
    if (!(beta > 0.0 && beta < 1.0)) {
        throw DomainError("candidate_quantile requires beta in (0,1)");
    }
    return QuantileGrid(candidate_vec(pg, eta.eta1, eta.eta2, beta, nullptr));
}

QuantileGrid assemble_piecewise(const ProblemGrid& pg, Multipliers eta,
                                std::vector<double>* beta_used)
{
    if (!(eta.eta1 >= 0.0) || !(eta.eta2 >= 0.0)) {
        throw DomainError("assemble_piecewise requires non-negative multipliers");
    }
    return QuantileGrid(assemble_vec(pg, eta.eta1, eta.eta2, beta_used, nullptr));
}

SolveResult solve_both_binding(const ProblemGrid& pg, const SolveResult& budget_only,
                               const SolveResult& divergence_only)
{
    const ProblemSpec& spec = pg.spec();
    const double lambda_c = budget_only.eta.eta1;
    const double lambda_bw = divergence_only.eta.eta2;
    if (!(lambda_c > 0.0 && std::isfinite(lambda_c)) ||
        !(lambda_bw > 0.0 && std::isfinite(lambda_bw))) {
        throw DomainError("solve_both_binding needs finite positive boundary multipliers");
    }
    SolveResult r;
    r.regime = Regime::BothBinding;
    Diagnostics& d = r.diagnostics;
    d.lambda_c = lambda_c;
    d.lambda_bw = lambda_bw;
    d.eps_infty = budget_only.diagnostics.eps_infty;
    d.x0_infty = divergence_only.diagnostics.x0_infty;

    Evaluator ev(pg);
    Crossing cross;
    bool seeded = false;

    // Locate the crossing on a coarse grid first, then refine on the full grid.
    if (pg.market_params() != nullptr && pg.size() > 2 * kCoarseGrid) {
        ProblemSpec coarse = spec;
        coarse.grid_size = kCoarseGrid;
        ProblemGrid cpg(coarse);
        SolveResult cbo = solve_budget_only(cpg);
        SolveResult cdv = solve_divergence_only(cpg);
        const auto inside = [&] {
            return cbo.regime == Regime::BudgetOnly &&
                   cpg.spec().divergence.epsilon < cbo.diagnostics.eps_infty &&
                   cpg.spec().x0 < cdv.diagnostics.x0_infty;
        };
        // Near a boundary the coarse thresholds can fall on the other side of the
        // targets; keep the relative distance to each boundary instead.
        if (!inside() && cbo.regime == Regime::BudgetOnly && std::isfinite(d.eps_infty) &&
            std::isfinite(d.x0_infty)) {
            coarse.divergence.epsilon *= cbo.diagnostics.eps_infty / d.eps_infty;
            coarse.x0 *= cdv.diagnostics.x0_infty / d.x0_infty;
            cpg = ProblemGrid(coarse);
            cbo = solve_budget_only(cpg);
            cdv = solve_divergence_only(cpg);
            if (inside()) {
                d.notes.emplace_back("coarse targets rescaled to the coarse regime thresholds");
            }
        }
        if (inside()) {
            Evaluator cev(cpg);
            std::vector<std::string> coarse_notes;
            try {
                cross = locate(cpg, cbo.eta.eta1, cdv.eta.eta2, cev, 1e-8, coarse_notes);
                seeded = true;
                d.notes.emplace_back("crossing located on a " + std::to_string(kCoarseGrid) +
                                     "-cell grid and refined on the full grid");
                d.notes.insert(d.notes.end(), coarse_notes.begin(), coarse_notes.end());
            } catch (const ConvergenceError&) {
                d.notes.emplace_back("coarse crossing search failed; searching on the full grid");
            }
            d.evaluations += cev.count();
        }
    }
    if (!seeded) {
        cross = locate(pg, lambda_c, lambda_bw, ev, spec.tol.root_tol, d.notes);
    }
    d.eta1_min = cross.eta1_min;
    d.sign_changes = cross.sign_changes;
    d.iterations = cross.iterations;
    if (cross.sign_changes.size() > 1) {
        d.notes.emplace_back("k - l changed sign more than once; first crossing found is returned");
    }

    double e1 = cross.eta1;
    double e2 = cross.eta2;
    bool ok = newton_polish(pg, ev, e1, e2, d.iterations);
    if (!ok && seeded) {
        d.notes.emplace_back("refinement from the coarse seed failed; full search on the fine grid");
        cross = locate(pg, lambda_c, lambda_bw, ev, spec.tol.root_tol, d.notes);
        d.eta1_min = cross.eta1_min;
        d.sign_changes = cross.sign_changes;
        e1 = cross.eta1;
        e2 = cross.eta2;
        ok = newton_polish(pg, ev, e1, e2, d.iterations);
    }
    if (!ok) {
        d.notes.emplace_back("constraint residuals above constraint_tol after refinement");
    }
    d.evaluations += ev.count();
    d.projected = ev.projected();
    r.eta = {e1, e2};
    finalize(pg, assemble_vec(pg, e1, e2, nullptr, &d.projected), r);
    return r;
}

SolveResult solve_both_binding(const ProblemGrid& pg)
{
    const SolveResult bo = solve_budget_only(pg);
    if (bo.regime == Regime::Infeasible) {
        return bo;
    }
    const SolveResult dv = solve_divergence_only(pg);
    return solve_both_binding(pg, bo, dv);
}

SolveResult solve_both_binding(const ProblemSpec& spec)
{
    return solve_both_binding(ProblemGrid(spec));
}

SolveResult solve(const ProblemGrid& pg)
{
    const ProblemSpec& spec = pg.spec();
    const Tolerances& tol = spec.tol;
    const double eps = spec.divergence.epsilon;

    if (spec.c * pg.y0() > spec.x0 * (1.0 + tol.constraint_tol)) {
        SolveResult r = infeasible("c exceeds x0/y0");
        return r;
    }

    const EpsMinResult em = eps_min(pg);
    const EpsMinResult emf = (em.eps_min > 0.0 && spec.c > 0.0) ? eps_min_with_floor(pg) : em;
    auto annotate = [&](SolveResult& r) {
        r.diagnostics.eps_min = em.eps_min;
        r.diagnostics.eps_min_floor = emf.eps_min;
        r.diagnostics.lambda_min = em.lambda_min;
    };
    auto below = [&](const EpsMinResult& m, const char* why) {
        SolveResult r = infeasible(why);
        annotate(r);
        r.quantile = m.g_min;
        r.achieved.cost = pg.cost(m.g_min.values());
        r.achieved.abw = m.eps_min;
        r.achieved.expected_utility = pg.expected_utility(m.g_min.values());
        return r;
    };
    if (eps < em.eps_min * (1.0 - tol.constraint_tol)) {
        return below(em, "epsilon is below eps_min");
    }
    if (eps < emf.eps_min * (1.0 - tol.constraint_tol)) {
        return below(emf, "epsilon is below the minimal tolerance of quantiles above c*F_Y");
    }
    if (emf.eps_min > 0.0 && eps <= emf.eps_min * (1.0 + tol.constraint_tol)) {
        SolveResult r;
        r.regime = Regime::BothBinding;
        r.eta = {emf.lambda_min, 0.0};
        r.diagnostics.notes.emplace_back("epsilon equals the minimal tolerance; returning its minimizer");
        finalize(pg, emf.g_min.values(), r);
        annotate(r);
        return r;
    }

    SolveResult bo = solve_budget_only(pg);
    annotate(bo);
    if (bo.regime == Regime::Infeasible) {
        return bo;
    }
    const double eps_infty = bo.diagnostics.eps_infty;
    if (eps >= eps_infty) {
        return bo;
    }
    if (!std::isfinite(bo.eta.eta1)) {
        SolveResult r = infeasible("x0 equals c*y0 and c*benchmark violates the divergence bound");
        annotate(r);
        r.diagnostics.eps_infty = eps_infty;
        return r;
    }

    SolveResult dv = solve_divergence_only(pg);
    annotate(dv);
    dv.diagnostics.eps_infty = eps_infty;
    dv.diagnostics.lambda_c = bo.eta.eta1;
    const double x0_infty = dv.diagnostics.x0_infty;
    bo.diagnostics.x0_infty = x0_infty;
    if (spec.x0 >= x0_infty) {
        return dv;
    }

    SolveResult both = solve_both_binding(pg, bo, dv);
    annotate(both);
    return both;
}

SolveResult solve(const ProblemSpec& spec) { return solve(ProblemGrid(spec)); }

}  // namespace abw
