// Command-line front end: run, figure1 and validate subcommands.

#include "abw/config.hpp"
#include "abw/errors.hpp"
#include "abw/kernels.hpp"
#include "abw/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

namespace {

void apply_thread_limit()
{
    const char* env = std::getenv("ABW_THREADS");
    if (env == nullptr || *env == '\0') {
        return;
    }
    try {
        const int n = std::stoi(env);
        if (n >= 1) {
            abw::kernels::set_thread_limit(n);
            return;
        }
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring ABW_THREADS='" << env << "'\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Active portfolio choice under budget and alpha-Bregman-Wasserstein constraints"};
    app.require_subcommand(1);

    std::string out_dir;
    std::size_t grid = 0;
    bool dry_run = false;
    bool verbose = false;
    app.add_option("--out", out_dir, "Output directory (overrides the config)");
    app.add_option("--grid", grid, "Number of quantile grid cells (overrides the config)")
        ->check(CLI::Range(static_cast<std::size_t>(2), static_cast<std::size_t>(100000000)));
    app.add_flag("--dry-run", dry_run, "Validate and print the case matrix without solving");
    app.add_flag("-v,--verbose", verbose, "Log per-case solver progress to stderr");

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Solve every configured case and write results");
    auto* fig_cmd = app.add_subcommand("figure1", "Write the divergence integrand figure data");
    auto* val_cmd = app.add_subcommand("validate", "Check a config and print its case matrix");
    for (auto* sub : {run_cmd, fig_cmd, val_cmd}) {
        sub->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? abw::kExitOk : abw::kExitError;
    }

    apply_thread_limit();
    abw::RunOptions opts;
    if (!out_dir.empty()) {
        opts.out_dir = out_dir;
    }
    if (grid != 0) {
        opts.grid = grid;
    }
    opts.dry_run = dry_run;
    opts.verbose = verbose;

    try {
        const abw::RunConfig cfg = abw::load_config(config_path);
        if (run_cmd->parsed()) {
            return abw::run(cfg, opts, std::cout, std::cerr);
        }
        if (fig_cmd->parsed()) {
            return abw::figure1(cfg, opts, std::cout, std::cerr);
        }
        return abw::validate(cfg, opts, std::cout, std::cerr);
    } catch (const abw::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return abw::kExitError;
}
