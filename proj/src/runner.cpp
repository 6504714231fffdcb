#include "abw/runner.hpp"

#include "abw/analysis.hpp"
#include "abw/divergence.hpp"
#include "abw/errors.hpp"
#include "abw/report.hpp"
#include "abw/solver.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <ostream>

namespace abw {

namespace {

namespace fs = std::filesystem;
using report::Cell;

const std::vector<std::string> kSummaryHeader = {
    "case",  "solution", "p",    "alpha", "c",   "x0",  "epsilon", "regime", "eta1", "eta2",
    "cost",  "abw",      "expected_utility", "glr", "mean", "std", "var", "es", "ute",
    "feasible"};

RunConfig with_overrides(RunConfig cfg, const RunOptions& opts)
{
    if (opts.out_dir) {
        cfg.output.directory = *opts.out_dir;
    }
    if (opts.grid) {
        cfg.grid = *opts.grid;
        const auto errors = validate_config(cfg);
        if (!errors.empty()) {
            throw ConfigError("--grid: " + errors.front());
        }
    }
    return cfg;
}

void print_cases(const std::vector<RunCase>& cases, std::size_t grid, std::ostream& out)
{
    fmt::print(out, "{:<34} {:>6} {:>6} {:>6} {:>8} {:>9} {:>8}\n", "case", "p", "alpha", "c",
               "x0", "epsilon", "grid");
    for (const auto& rc : cases) {
        fmt::print(out, "{:<34} {:>6g} {:>6g} {:>6g} {:>8g} {:>9g} {:>8}\n", rc.id, rc.p,
                   rc.spec.divergence.alpha, rc.spec.c, rc.spec.x0, rc.spec.divergence.epsilon,
                   grid);
    }
}

bool feasible_row(const SolveResult& r, const ProblemSpec& spec)
{
    if (r.regime == Regime::Infeasible) {
        return false;
    }
    const double ctol = spec.tol.constraint_tol;
    bool ok = r.diagnostics.admissible;
    ok = ok && r.achieved.cost <= spec.x0 * (1.0 + ctol);
    ok = ok && r.achieved.abw <= spec.divergence.epsilon * (1.0 + ctol) + 1e-300;
    if (r.regime == Regime::BothBinding) {
        ok = ok && std::abs(r.diagnostics.cost_residual) <= ctol &&
             std::abs(r.diagnostics.abw_residual) <= ctol;
    }
    return ok;
}

std::vector<Cell> summary_row(const RunCase& rc, const std::string& solution,
                              const std::string& regime, double eta1, double eta2,
                              const StatsReport& st, const std::string& feasible)
{
    return {rc.id,
            solution,
            rc.p,
            rc.spec.divergence.alpha,
            rc.spec.c,
            rc.spec.x0,
            rc.spec.divergence.epsilon,
            regime,
            eta1,
            eta2,
            st.cost,
            st.abw,
            st.expected_utility,
            st.glr,
            st.mean,
            st.std_dev,
            st.var,
            st.es,
            st.ute,
            feasible};
}

double density_range(const RunConfig& cfg, const std::vector<const QuantileGrid*>& grids)
{
    if (cfg.output.density_max > 0.0) {
        return cfg.output.density_max;
    }
    double hi = 0.0;
    for (const QuantileGrid* g : grids) {
        if (g != nullptr && !g->empty()) {
            hi = std::max(hi, quantile_at(*g, 0.99));
        }
    }
    return hi > 0.0 ? hi : 1.0;
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

// Wealth levels where the solution crosses the benchmark from below.
std::vector<double> crossings(const QuantileGrid& g, const std::vector<double>& f)
{
    std::vector<double> out;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double d0 = g[i - 1] - f[i - 1];
        const double d1 = g[i] - f[i];
        if ((d0 < 0.0) != (d1 < 0.0)) {
            const double w = d0 / (d0 - d1);
            out.push_back(f[i - 1] + w * (f[i] - f[i - 1]));
        }
    }
    return out;
}

}  // namespace

Figure1Data figure1_data(const MarketParams& m, const Figure1Options& opts)
{
    m.validate();
    Figure1Data d;
    const std::size_t n = opts.grid;
    d.u = midpoint_nodes(n);
    d.benchmark = benchmark_grid(m, n);
    d.modified = modified_benchmark(m, n, opts.shift).values();
    std::vector<std::pair<double, double>> pairs;
    for (double p : opts.p_values) {
        pairs.emplace_back(p, opts.p_sweep_alpha);
    }
    for (double p : opts.alpha_sweep_p) {
        for (double a : opts.alpha_values) {
            pairs.emplace_back(p, a);
        }
    }
    for (const auto& [p, a] : pairs) {
        const std::string label = fmt::format("p{:g}_alpha{:g}", p, a);
        if (std::find(d.labels.begin(), d.labels.end(), label) != d.labels.end()) {
            continue;
        }
        const DivergenceSpec spec{a, 0.0, BregmanGenerator::power(p)};
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = alpha_bw_integrand(spec, d.modified[i], d.benchmark[i]);
        }
        d.labels.push_back(label);
        d.p.push_back(p);
        d.alpha.push_back(a);
        d.integrand.push_back(std::move(col));
    }
    return d;
}

int validate(const RunConfig& cfg_in, const RunOptions& opts, std::ostream& out, std::ostream& log)
{
    const RunConfig cfg = with_overrides(cfg_in, opts);
    const auto cases = expand_cases(cfg);
    int code = kExitOk;
    for (const auto& rc : cases) {
        const ProblemGrid pg(rc.spec);
        if (rc.spec.c * pg.y0() > rc.spec.x0 * (1.0 + rc.spec.tol.constraint_tol)) {
            fmt::print(log, "warning: case {}: c = {:g} exceeds x0/y0 = {:.6g}; it will be "
                            "reported infeasible\n",
                       rc.id, rc.spec.c, rc.spec.x0 / pg.y0());
            code = kExitInfeasible;
        }
    }
    fmt::print(out, "configuration valid: {} case(s), market gamma={:g} psi={:g} rate={:g} "
                    "initial_wealth={:g}\n",
               cases.size(), cfg.market.gamma, cfg.market.psi, cfg.market.total_rate,
               cfg.market.initial_wealth);
    print_cases(cases, cfg.grid, out);
    return code;
}

int run(const RunConfig& cfg_in, const RunOptions& opts, std::ostream& out, std::ostream& log)
{
    const RunConfig cfg = with_overrides(cfg_in, opts);
    const auto cases = expand_cases(cfg);
    if (opts.dry_run) {
        fmt::print(out, "dry run: {} case(s), nothing solved\n", cases.size());
        print_cases(cases, cfg.grid, out);
        return kExitOk;
    }
    const fs::path root(cfg.output.directory);
    fs::create_directories(root);

    report::CsvWriter summary(kSummaryHeader);
    bool any_infeasible = false;
    bool any_violation = false;
    report::LinePlot all_density{"Optimal densities", "terminal wealth", "density", {}, {}};
    report::LinePlot all_quantile{"Optimal quantile functions", "u", "quantile", {}, {}};
    bool benchmark_added = false;

    for (const auto& rc : cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const ProblemGrid pg(rc.spec);
        const SolveResult res = solve(pg);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (opts.verbose) {
            fmt::print(log, "[{}] regime={} eta=({:.8g}, {:.8g}) cost={:.8g} abw={:.8g} "
                            "EU={:.8g} evals={} time={:.2f}s\n",
                       rc.id, to_string(res.regime), res.eta.eta1, res.eta.eta2,
                       res.achieved.cost, res.achieved.abw, res.achieved.expected_utility,
                       res.diagnostics.evaluations, secs);
            for (const auto& note : res.diagnostics.notes) {
                fmt::print(log, "[{}]   {}\n", rc.id, note);
            }
        }
        const QuantileGrid bench = pg.benchmark_grid();

        if (cfg.output.benchmark_row && !benchmark_added) {
            const StatsReport bst = stats(bench, pg, cfg.levels);
            summary.add_row(summary_row(rc, "benchmark", "", std::nan(""), std::nan(""), bst, ""));
            benchmark_added = true;
        }

        const bool has_grid = !res.quantile.empty();
        if (res.regime == Regime::Infeasible) {
            any_infeasible = true;
            fmt::print(log, "case {}: infeasible ({})\n", rc.id,
                       res.diagnostics.notes.empty() ? "" : res.diagnostics.notes.front());
        }
        StatsReport st;
        if (has_grid) {
            st = stats(res.quantile, pg, cfg.levels);
        } else {
            st.cost = st.abw = st.expected_utility = st.glr = st.mean = st.std_dev = st.var =
                st.es = st.ute = std::nan("");
        }
        const bool feasible = feasible_row(res, rc.spec);
        if (res.regime != Regime::Infeasible && !feasible) {
            any_violation = true;
            fmt::print(log, "case {}: solution violates the feasibility checks\n", rc.id);
        }
        summary.add_row(summary_row(rc, "optimal", to_string(res.regime), res.eta.eta1,
                                    res.eta.eta2, st, feasible ? "true" : "false"));

        if (cfg.output.boundary_rows && res.regime != Regime::Infeasible) {
            const SolveResult bo = solve_budget_only(pg);
            if (bo.regime != Regime::Infeasible) {
                summary.add_row(summary_row(rc, "budget_only", to_string(bo.regime), bo.eta.eta1,
                                            bo.eta.eta2, stats(bo.quantile, pg, cfg.levels),
                                            ""));
            }
            if (rc.spec.divergence.epsilon > 0.0) {
                const SolveResult dv = solve_divergence_only(pg);
                summary.add_row(summary_row(rc, "divergence_only", to_string(dv.regime),
                                            dv.eta.eta1, dv.eta.eta2,
                                            stats(dv.quantile, pg, cfg.levels), ""));
            }
        }

        const fs::path dir = root / rc.id;
        fs::create_directories(dir);
        const std::size_t n = pg.size();
        const auto u = midpoint_nodes(n);
        const double x_hi = density_range(cfg, {&bench, has_grid ? &res.quantile : nullptr});
        const auto support = linspace(0.0, x_hi, cfg.output.density_points);
        const DensityCurve bden = density_curve(bench, support);
        DensityCurve sden;
        if (has_grid) {
            sden = density_curve(res.quantile, support);
        } else {
            sden.x = support;
            sden.pdf.assign(support.size(), std::nan(""));
        }
        if (cfg.output.csv) {
            report::CsvWriter q({"u", "benchmark_quantile", "solution_quantile", "xi"});
            for (std::size_t i = 0; i < n; i += cfg.output.quantile_stride) {
                q.add_row({u[i], pg.benchmark()[i], has_grid ? res.quantile[i] : std::nan(""),
                           pg.xi_point()[i]});
            }
            q.write_file((dir / "quantile.csv").string());
            report::CsvWriter dn({"x", "benchmark_pdf", "solution_pdf"});
            for (std::size_t j = 0; j < support.size(); ++j) {
                dn.add_row({support[j], bden.pdf[j], sden.pdf[j]});
            }
            dn.write_file((dir / "density.csv").string());
        }
        if (cfg.output.svg) {
            std::vector<double> marks;
            if (has_grid) {
                marks = crossings(res.quantile, pg.benchmark());
            }
            report::LinePlot dplot{"Density " + rc.id, "terminal wealth", "density", {}, marks};
            dplot.series.push_back({"benchmark", support, bden.pdf, true});
            if (has_grid) {
                dplot.series.push_back({"optimal", support, sden.pdf, false});
            }
            dplot.write_file((dir / "figure_density.svg").string());

            std::vector<double> uq;
            std::vector<double> bq;
            std::vector<double> sq;
            for (std::size_t i = 0; i < n; ++i) {
                if (u[i] <= 0.99) {
                    uq.push_back(u[i]);
                    bq.push_back(pg.benchmark()[i]);
                    sq.push_back(has_grid ? res.quantile[i] : std::nan(""));
                }
            }
            report::LinePlot qplot{"Quantile " + rc.id, "u", "quantile", {}, {}};
            qplot.series.push_back({"benchmark", uq, bq, true});
            if (has_grid) {
                qplot.series.push_back({"optimal", uq, sq, false});
                all_quantile.series.push_back({rc.id, uq, sq, false});
                all_density.series.push_back({rc.id, support, sden.pdf, false});
            }
            qplot.write_file((dir / "figure_quantile.svg").string());
        }
    }

    if (cfg.output.csv) {
        summary.write_file((root / "summary.csv").string());
    }
    if (cfg.output.svg && !all_density.series.empty()) {
        all_density.write_file((root / "figure_density_all.svg").string());
        all_quantile.write_file((root / "figure_quantile_all.svg").string());
    }
    fmt::print(out, "solved {} case(s); results in {}\n", cases.size(), root.string());
    if (any_violation) {
        return kExitError;
    }
    return any_infeasible ? kExitInfeasible : kExitOk;
}

int figure1(const RunConfig& cfg_in, const RunOptions& opts, std::ostream& out, std::ostream& log)
{
    const RunConfig cfg = with_overrides(cfg_in, opts);
    const Figure1Options& fo = cfg.figure1;
    if (opts.dry_run) {
        fmt::print(out, "dry run: figure1 with {} p values at alpha={:g} and {} alpha values "
                        "for {} p values, grid {}\n",
                   fo.p_values.size(), fo.p_sweep_alpha, fo.alpha_values.size(),
                   fo.alpha_sweep_p.size(), fo.grid);
        return kExitOk;
    }
    const Figure1Data d = figure1_data(cfg.market, fo);
    const fs::path root(cfg.output.directory);
    fs::create_directories(root);
    if (cfg.output.csv) {
        std::vector<std::string> header{"u", "benchmark", "modified"};
        header.insert(header.end(), d.labels.begin(), d.labels.end());
        report::CsvWriter csv(header);
        for (std::size_t i = 0; i < d.u.size(); ++i) {
            std::vector<Cell> row{d.u[i], d.benchmark[i], d.modified[i]};
            for (const auto& col : d.integrand) {
                row.emplace_back(col[i]);
            }
            csv.add_row(std::move(row));
        }
        csv.write_file((root / "figure1.csv").string());
    }
    if (cfg.output.svg) {
        auto panel = [&](const std::string& title, auto&& keep) {
            report::LinePlot plot{title, "u", "integrand", {}, {}};
            for (std::size_t k = 0; k < d.labels.size(); ++k) {
                if (keep(d.p[k], d.alpha[k])) {
                    plot.series.push_back({d.labels[k], d.u, d.integrand[k], false});
                }
            }
            return plot;
        };
        panel(fmt::format("alpha = {:g}", fo.p_sweep_alpha), [&](double p, double a) {
            return a == fo.p_sweep_alpha &&
                   std::find(fo.p_values.begin(), fo.p_values.end(), p) != fo.p_values.end();
        }).write_file((root / "figure1_p_sweep.svg").string());
        for (double p : fo.alpha_sweep_p) {
            panel(fmt::format("p = {:g}", p), [&](double pp, double a) {
                return pp == p && std::find(fo.alpha_values.begin(), fo.alpha_values.end(), a) !=
                                      fo.alpha_values.end();
            }).write_file((root / fmt::format("figure1_alpha_p{:g}.svg", p)).string());
        }
    }
    (void)log;
    fmt::print(out, "figure1: {} integrand column(s) written to {}\n", d.labels.size(),
               root.string());
    return kExitOk;
}

}  // namespace abw
