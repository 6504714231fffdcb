#include "abw/config.hpp"

#include "abw/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace abw {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys = {
        {"market", {"gamma", "psi", "rate", "initial_wealth"}},
        {"piecewise", {"breakpoints", "initial_wealth"}},
        {"problem", {"x0", "c", "risk_aversion", "alpha", "epsilon", "p"}},
        {"sweep", {"p", "alpha", "c", "x0", "epsilon"}},
        {"numerics", {"grid", "root_tol", "constraint_tol", "max_iter"}},
        {"statistics", {"var_level", "es_level", "ute_level"}},
        {"output",
         {"directory", "formats", "boundary_rows", "benchmark_row", "density_points",
          "density_max", "quantile_stride"}},
        {"figure1", {"p", "p_alpha", "alpha", "alpha_p", "shift", "grid"}},
    };
    return keys;
}

const std::set<std::string>& interval_keys()
{
    static const std::set<std::string> keys = {"drift", "vol", "correlation", "weights", "rate"};
    return keys;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out)
{
    const std::string t = trim(text);
    if (t.empty()) {
        return false;
    }
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (*first == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

// Collects parse errors instead of stopping at the first.
class Reader {
public:
    explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

    void number(const pt::ptree& sec, const std::string& name, const std::string& key,
                double& out)
    {
        if (auto v = sec.get_optional<std::string>(pt::ptree::path_type(key, '\0'))) {
            if (!parse_number(*v, out)) {
                errors_.push_back(fmt::format("{}.{}: '{}' is not a number", name, key, *v));
            }
        }
    }

    void count(const pt::ptree& sec, const std::string& name, const std::string& key,
               std::size_t& out)
    {
        double v = static_cast<double>(out);
        const auto raw = sec.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!raw) {
            return;
        }
        if (!parse_number(*raw, v) || v < 0.0 || v != std::floor(v) || v > 1e9) {
            errors_.push_back(
                fmt::format("{}.{}: '{}' is not a non-negative integer", name, key, *raw));
            return;
        }
        out = static_cast<std::size_t>(v);
    }

    void list(const pt::ptree& sec, const std::string& name, const std::string& key,
              std::vector<double>& out)
    {
        const auto raw = sec.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!raw) {
            return;
        }
        out.clear();
        std::stringstream ss(*raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
            double v = 0.0;
            if (!parse_number(item, v)) {
                errors_.push_back(
                    fmt::format("{}.{}: list entry '{}' is not a number", name, key, trim(item)));
                continue;
            }
            out.push_back(v);
        }
        if (out.empty()) {
            errors_.push_back(fmt::format("{}.{}: empty list", name, key));
        }
    }

    void flag(const pt::ptree& sec, const std::string& name, const std::string& key, bool& out)
    {
        const auto raw = sec.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!raw) {
            return;
        }
        const std::string v = trim(*raw);
        if (v == "true" || v == "yes" || v == "1") {
            out = true;
        } else if (v == "false" || v == "no" || v == "0") {
            out = false;
        } else {
            errors_.push_back(fmt::format("{}.{}: '{}' is not a boolean", name, key, v));
        }
    }

    void text(const pt::ptree& sec, const std::string& name, const std::string& key,
              std::string& out)
    {
        if (auto v = sec.get_optional<std::string>(pt::ptree::path_type(key, '\0'))) {
            out = trim(*v);
            if (out.empty()) {
                errors_.push_back(fmt::format("{}.{}: empty value", name, key));
            }
        }
    }

private:
    std::vector<std::string>& errors_;
};

Eigen::VectorXd to_vector(const std::vector<double>& v)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = v[i];
    }
    return out;
}

std::string join(const std::vector<std::string>& lines)
{
    std::string out;
    for (const auto& l : lines) {
        out += "  - " + l + "\n";
    }
    return out;
}

std::string format_value(double v) { return fmt::format("{:g}", v); }

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source)
{
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("{}: line {}: {}", source, e.line(), e.message()));
    }

    std::vector<std::string> errors;
    Reader rd(errors);
    RunConfig cfg;
    bool have_market = false;
    std::map<int, const pt::ptree*> interval_sections;

    for (const auto& [name, sec] : tree) {
        if (sec.empty() && !sec.data().empty()) {
            errors.push_back(fmt::format("'{}' appears outside any section", name));
            continue;
        }
        const std::set<std::string>* allowed = nullptr;
        if (auto it = known_keys().find(name); it != known_keys().end()) {
            allowed = &it->second;
        } else if (name.rfind("interval", 0) == 0) {
            int idx = -1;
            const std::string digits = name.substr(8);
            const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
            if (digits.empty() || res.ec != std::errc() ||
                res.ptr != digits.data() + digits.size() || idx < 1) {
                errors.push_back(fmt::format("unknown section [{}]", name));
                continue;
            }
            interval_sections[idx] = &sec;
            allowed = &interval_keys();
        } else {
            errors.push_back(fmt::format("unknown section [{}]", name));
            continue;
        }
        for (const auto& [key, val] : sec) {
            if (!val.empty()) {
                errors.push_back(fmt::format("{}.{}: nested values are not allowed", name, key));
            } else if (allowed->count(key) == 0) {
                errors.push_back(fmt::format("{}.{}: unknown key", name, key));
            }
        }
    }

    if (auto sec = tree.get_child_optional("market")) {
        have_market = true;
        rd.number(*sec, "market", "gamma", cfg.market.gamma);
        rd.number(*sec, "market", "psi", cfg.market.psi);
        rd.number(*sec, "market", "rate", cfg.market.total_rate);
        rd.number(*sec, "market", "initial_wealth", cfg.market.initial_wealth);
        for (const char* k : {"gamma", "psi", "rate"}) {
            if (!sec->get_optional<std::string>(k)) {
                errors.push_back(fmt::format("market.{}: required", k));
            }
        }
    }
    if (auto sec = tree.get_child_optional("piecewise")) {
        if (have_market) {
            errors.emplace_back("[market] and [piecewise] are mutually exclusive");
        }
        PiecewiseMarket pw;
        rd.list(*sec, "piecewise", "breakpoints", pw.breakpoints);
        rd.number(*sec, "piecewise", "initial_wealth", pw.initial_wealth);
        int expected = 1;
        for (const auto& [idx, ivsec] : interval_sections) {
            const std::string name = fmt::format("interval{}", idx);
            if (idx != expected++) {
                errors.push_back(fmt::format("[{}]: intervals must be numbered 1, 2, ...", name));
            }
            std::vector<double> drift;
            std::vector<double> vol;
            std::vector<double> corr;
            std::vector<double> weights;
            MarketInterval iv;
            rd.list(*ivsec, name, "drift", drift);
            rd.list(*ivsec, name, "vol", vol);
            rd.list(*ivsec, name, "weights", weights);
            rd.list(*ivsec, name, "correlation", corr);
            rd.number(*ivsec, name, "rate", iv.rate);
            const std::size_t d = vol.size();
            if (corr.empty() && d == 1) {
                corr = {1.0};
            }
            if (corr.size() != d * d) {
                errors.push_back(
                    fmt::format("[{}]: correlation needs {} row-major entries", name, d * d));
                continue;
            }
            iv.drift = to_vector(drift);
            iv.vol = to_vector(vol);
            iv.weights = to_vector(weights);
            iv.correlation.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
            for (std::size_t r = 0; r < d; ++r) {
                for (std::size_t c = 0; c < d; ++c) {
                    iv.correlation(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                        corr[r * d + c];
                }
            }
            pw.intervals.push_back(std::move(iv));
        }
        try {
            pw.validate();
            cfg.piecewise = pw;
            cfg.market = aggregate(pw);
            have_market = true;
        } catch (const InvalidMarket& e) {
            errors.push_back(fmt::format("piecewise market: {}", e.what()));
        }
    } else if (!interval_sections.empty()) {
        errors.emplace_back("[intervalN] sections need a [piecewise] section");
    }
    if (!have_market && errors.empty()) {
        errors.emplace_back("a [market] or [piecewise] section is required");
    }

    if (auto sec = tree.get_child_optional("problem")) {
        rd.number(*sec, "problem", "x0", cfg.x0);
        rd.number(*sec, "problem", "c", cfg.c);
        rd.number(*sec, "problem", "risk_aversion", cfg.risk_aversion);
        rd.number(*sec, "problem", "alpha", cfg.alpha);
        rd.number(*sec, "problem", "epsilon", cfg.epsilon);
        rd.number(*sec, "problem", "p", cfg.p);
    }
    if (auto sec = tree.get_child_optional("sweep")) {
        rd.list(*sec, "sweep", "p", cfg.sweep_p);
        rd.list(*sec, "sweep", "alpha", cfg.sweep_alpha);
        rd.list(*sec, "sweep", "c", cfg.sweep_c);
        rd.list(*sec, "sweep", "x0", cfg.sweep_x0);
        rd.list(*sec, "sweep", "epsilon", cfg.sweep_epsilon);
    }
    if (auto sec = tree.get_child_optional("numerics")) {
        rd.count(*sec, "numerics", "grid", cfg.grid);
        rd.number(*sec, "numerics", "root_tol", cfg.tol.root_tol);
        rd.number(*sec, "numerics", "constraint_tol", cfg.tol.constraint_tol);
        std::size_t max_iter = static_cast<std::size_t>(cfg.tol.max_iter);
        rd.count(*sec, "numerics", "max_iter", max_iter);
        cfg.tol.max_iter = static_cast<int>(std::min<std::size_t>(max_iter, 1000000));
    }
    if (auto sec = tree.get_child_optional("statistics")) {
        rd.number(*sec, "statistics", "var_level", cfg.levels.var);
        rd.number(*sec, "statistics", "es_level", cfg.levels.es);
        rd.number(*sec, "statistics", "ute_level", cfg.levels.ute);
    }
    if (auto sec = tree.get_child_optional("output")) {
        rd.text(*sec, "output", "directory", cfg.output.directory);
        std::string formats;
        rd.text(*sec, "output", "formats", formats);
        if (!formats.empty()) {
            cfg.output.csv = false;
            cfg.output.svg = false;
            std::stringstream ss(formats);
            std::string f;
            while (std::getline(ss, f, ',')) {
                f = trim(f);
                if (f == "csv") {
                    cfg.output.csv = true;
                } else if (f == "svg") {
                    cfg.output.svg = true;
                } else {
                    errors.push_back(fmt::format("output.formats: unknown format '{}'", f));
                }
            }
        }
        rd.flag(*sec, "output", "boundary_rows", cfg.output.boundary_rows);
        rd.flag(*sec, "output", "benchmark_row", cfg.output.benchmark_row);
        rd.count(*sec, "output", "density_points", cfg.output.density_points);
        rd.number(*sec, "output", "density_max", cfg.output.density_max);
        rd.count(*sec, "output", "quantile_stride", cfg.output.quantile_stride);
    }
    if (auto sec = tree.get_child_optional("figure1")) {
        rd.list(*sec, "figure1", "p", cfg.figure1.p_values);
        rd.number(*sec, "figure1", "p_alpha", cfg.figure1.p_sweep_alpha);
        rd.list(*sec, "figure1", "alpha", cfg.figure1.alpha_values);
        rd.list(*sec, "figure1", "alpha_p", cfg.figure1.alpha_sweep_p);
        rd.number(*sec, "figure1", "shift", cfg.figure1.shift);
        rd.count(*sec, "figure1", "grid", cfg.figure1.grid);
    }

    const auto more = validate_config(cfg);
    errors.insert(errors.end(), more.begin(), more.end());
    if (!errors.empty()) {
        throw ConfigError(fmt::format("{}: invalid configuration\n{}", source, join(errors)));
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(fmt::format("cannot read config file '{}'", path));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::vector<std::string> validate_config(const RunConfig& cfg)
{
    std::vector<std::string> errors;
    try {
        cfg.market.validate();
    } catch (const InvalidMarket& e) {
        errors.push_back(fmt::format("market: {}", e.what()));
    }
    auto each = [](const std::vector<double>& sweep, double base) {
        return sweep.empty() ? std::vector<double>{base} : sweep;
    };
    for (double p : each(cfg.sweep_p, cfg.p)) {
        if (!(p > 1.0)) {
            errors.push_back(fmt::format("p = {}: Bregman exponent must exceed 1", format_value(p)));
        }
    }
    for (double a : each(cfg.sweep_alpha, cfg.alpha)) {
        if (!(a > 0.0 && a < 1.0)) {
            errors.push_back(fmt::format("alpha = {}: must lie in (0,1)", format_value(a)));
        }
    }
    for (double c : each(cfg.sweep_c, cfg.c)) {
        if (!(c >= 0.0 && c <= 1.0)) {
            errors.push_back(fmt::format("c = {}: must lie in [0,1]", format_value(c)));
        }
    }
    for (double x : each(cfg.sweep_x0, cfg.x0)) {
        if (!(x > 0.0)) {
            errors.push_back(fmt::format("x0 = {}: budget must be positive", format_value(x)));
        }
    }
    for (double e : each(cfg.sweep_epsilon, cfg.epsilon)) {
        if (!(e >= 0.0)) {
            errors.push_back(fmt::format("epsilon = {}: must be non-negative", format_value(e)));
        }
    }
    if (!(cfg.risk_aversion > 0.0 && cfg.risk_aversion < 1.0)) {
        errors.push_back(fmt::format("risk_aversion = {}: CRRA coefficient must lie in (0,1)",
                                     format_value(cfg.risk_aversion)));
    }
    if (cfg.grid < 2) {
        errors.emplace_back("numerics.grid: at least 2 cells are required");
    }
    if (!(cfg.tol.root_tol > 0.0) || !(cfg.tol.constraint_tol > 0.0) || cfg.tol.max_iter < 1) {
        errors.emplace_back("numerics: tolerances must be positive and max_iter >= 1");
    }
    for (double l : {cfg.levels.var, cfg.levels.es, cfg.levels.ute}) {
        if (!(l > 0.0 && l < 1.0)) {
            errors.push_back(fmt::format("statistics: level {} must lie in (0,1)", format_value(l)));
        }
    }
    if (!cfg.output.csv && !cfg.output.svg) {
        errors.emplace_back("output.formats: select at least one of csv, svg");
    }
    if (cfg.output.density_points < 2) {
        errors.emplace_back("output.density_points: at least 2 points are required");
    }
    if (cfg.output.quantile_stride < 1) {
        errors.emplace_back("output.quantile_stride: must be at least 1");
    }
    if (!(cfg.output.density_max >= 0.0)) {
        errors.emplace_back("output.density_max: must be non-negative");
    }
    for (double p : cfg.figure1.p_values) {
        if (!(p > 1.0)) {
            errors.push_back(fmt::format("figure1.p = {}: must exceed 1", format_value(p)));
        }
    }
    for (double p : cfg.figure1.alpha_sweep_p) {
        if (!(p > 1.0)) {
            errors.push_back(fmt::format("figure1.alpha_p = {}: must exceed 1", format_value(p)));
        }
    }
    for (double a : cfg.figure1.alpha_values) {
        if (!(a > 0.0 && a < 1.0)) {
            errors.push_back(fmt::format("figure1.alpha = {}: must lie in (0,1)", format_value(a)));
        }
    }
    if (!(cfg.figure1.p_sweep_alpha > 0.0 && cfg.figure1.p_sweep_alpha < 1.0)) {
        errors.emplace_back("figure1.p_alpha: must lie in (0,1)");
    }
    if (cfg.figure1.grid < 2) {
        errors.emplace_back("figure1.grid: at least 2 cells are required");
    }
    return errors;
}

std::vector<RunCase> expand_cases(const RunConfig& cfg)
{
    auto each = [](const std::vector<double>& sweep, double base) {
        return sweep.empty() ? std::vector<double>{base} : sweep;
    };
    std::vector<RunCase> out;
    for (double p : each(cfg.sweep_p, cfg.p)) {
        for (double a : each(cfg.sweep_alpha, cfg.alpha)) {
            for (double c : each(cfg.sweep_c, cfg.c)) {
                for (double x0 : each(cfg.sweep_x0, cfg.x0)) {
                    for (double e : each(cfg.sweep_epsilon, cfg.epsilon)) {
                        RunCase rc;
                        rc.p = p;
                        rc.id = fmt::format("p{:g}_a{:g}_c{:g}_x{:g}_e{:g}", p, a, c, x0, e);
                        rc.spec.market = cfg.market;
                        rc.spec.utility = Utility::crra(cfg.risk_aversion);
                        rc.spec.divergence = DivergenceSpec{a, e, BregmanGenerator::power(p)};
                        rc.spec.x0 = x0;
                        rc.spec.c = c;
                        rc.spec.grid_size = cfg.grid;
                        rc.spec.tol = cfg.tol;
                        out.push_back(std::move(rc));
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace abw
