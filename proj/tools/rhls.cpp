#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rhls/constants.hpp"
#include "rhls/errors.hpp"
#include "rhls/exponents.hpp"
#include "rhls/operators.hpp"
#include "rhls/report.hpp"
#include "rhls/system.hpp"
#include "rhls/varmin.hpp"

using namespace rhls;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kPropertyFailed = 1, kBadExponents = 2, kNoConvergence = 3, kUsage = 64 };

// Settings a config file may preset; flags given on the command line win.
struct Settings {
    QuadratureSpec constant_spec = default_constant_spec();
    long samples = 1 << 15;
    double minimize_tol = MinimizeOptions{}.tol;
    int minimize_max_iters = MinimizeOptions{}.max_iters;
};

void apply_config(const std::string& path, Settings& s) {
    std::ifstream is(path);
    if (!is) throw CLI::ValidationError("--config", "cannot read " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw CLI::ValidationError("--config", e.what());
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "rel_tol") s.constant_spec.rel_tol = value.get<double>();
        else if (key == "abs_tol") s.constant_spec.abs_tol = value.get<double>();
        else if (key == "rule") s.constant_spec.rule = parse_rule(value.get<std::string>());
        else if (key == "max_subdivisions") s.constant_spec.max_subdivisions = value.get<int>();
        else if (key == "samples") s.samples = value.get<long>();
        else if (key == "minimize_tol") s.minimize_tol = value.get<double>();
        else if (key == "minimize_max_iters") s.minimize_max_iters = value.get<int>();
        else throw CLI::ValidationError("--config", "unknown key " + key);
    }
    s.constant_spec.validate();
}

struct Clock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    }
};

struct Context {
    Settings settings;
    bool reproducible = false;
    std::string report_path;
    Clock clock;

    void emit(RunReport& r) const {
        r.wall_time_ms = reproducible ? 0 : clock.ms();
        const std::string text = r.dump();
        if (report_path.empty()) std::cout << text;
        else write_text(report_path, text);
    }
};

int cmd_constants(const Context& ctx, int n, double lambda, const std::string& method) {
    RunReport r;
    r.command = "constants";
    r.inputs = {{"n", n}, {"lambda", lambda}, {"method", method}};
    const bool closed = method != "spherical", spherical = method != "closed-form";
    if (closed && lambda != 2) {
        std::cerr << "closed form needs lambda = 2\n";
        return kBadExponents;
    }
    diagonal_exponents(n, lambda);  // rejects inadmissible (n, lambda)
    std::optional<double> cs, cc;
    if (spherical) {
        const ConstantReport c = c_spherical(n, lambda, ctx.settings.constant_spec);
        cs = c.c_spherical;
        r.set("c_spherical", c.c_spherical, c.error_estimate);
    }
    if (closed) {
        cc = c_explicit_lambda2(n);
        r.set("c_closed_form", *cc, 0);
    }
    if (cs && cc) r.set("relative_discrepancy", std::abs(*cs / *cc - 1), 0);
    ctx.emit(r);
    return kOk;
}

int cmd_scan(const Context& ctx, int n, double from, double to, int steps, const std::string& out) {
    std::vector<double> lambdas(steps + 1);
    for (int i = 0; i <= steps; ++i) lambdas[i] = i == steps ? to : from + (to - from) * i / steps;
    for (double l : lambdas) diagonal_exponents(n, l);
    std::vector<std::vector<double>> rows(lambdas.size());
    std::vector<char> failed(lambdas.size(), 0);
    const QuadratureSpec spec = ctx.settings.constant_spec;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        double c, err;
        try {
            const ConstantReport rep = c_spherical(n, lambdas[i], spec);
            c = rep.c_spherical;
            err = rep.error_estimate;
        } catch (const NoConvergence& e) {
            c = e.best_value;
            err = e.best_error;
            failed[i] = 1;
        }
        rows[i] = {lambdas[i], c, c_near_zero(n, lambdas[i], spec), err};
    }
    write_text(out, csv_text({"lambda", "c_spherical", "c_near_zero", "abs_err_estimate"}, rows));

    RunReport r;
    r.command = "scan";
    json bad = json::array();
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        if (failed[i]) bad.push_back(lambdas[i]);
    r.inputs = {{"n", n}, {"lambda_from", from}, {"lambda_to", to}, {"steps", steps}, {"out", out},
                {"nonconverged_lambdas", bad}};
    double worst = 0;
    for (const auto& row : rows) worst = std::max(worst, row[3]);
    r.set("rows", static_cast<double>(rows.size()), 0);
    r.set("c_first", rows.front()[1], rows.front()[3]);
    r.set("c_last", rows.back()[1], rows.back()[3]);
    r.set("max_abs_err_estimate", worst, 0);
    ctx.emit(r);
    return bad.empty() ? kOk : kNoConvergence;
}

int cmd_verify(const Context& ctx, int n, double lambda, double p, int trials, std::uint64_t seed) {
    const ExponentSet e = from_lambda_p(n, lambda, p);
    const PairTrials t = random_pair_quotients(e, trials, seed, ctx.settings.samples);
    RunReport r;
    r.command = "verify";
    r.seed = seed;
    const bool diagonal = std::abs(p - diagonal_family(n, lambda).first) <= kRelationTol;
    r.inputs = {{"n", n}, {"lambda", lambda}, {"p", p}, {"trials", trials}, {"samples", ctx.settings.samples},
                {"reference", diagonal ? "c_spherical" : "none"}};
    r.set("min_quotient", t.min_quotient(), t.min_std_error());
    bool pass = std::isfinite(t.min_quotient()) && t.min_quotient() > 0;
    if (diagonal) {
        const ConstantReport c = c_spherical(n, lambda, ctx.settings.constant_spec);
        r.set("constant", c.c_spherical, c.error_estimate);
        for (std::size_t i = 0; i < t.quotients.size(); ++i)
            pass = pass && t.quotients[i] >= c.c_spherical * (1 - 1e-6) - 3 * t.std_errors[i];
        RadialFunction f;
        f.dim = n - 1;
        f.value = [expo = 1 - n - 0.5 * lambda](double x) { return std::pow(1 + x * x, expo); };
        const double ext = extension_quotient(f, e);
        r.set("extremal_quotient", ext, std::abs(ext - c.c_spherical));
        pass = pass && std::abs(ext - c.c_spherical) <= 1e-4;
    }
    r.set("pass", pass ? 1 : 0, 0);
    ctx.emit(r);
    return pass ? kOk : kPropertyFailed;
}

int cmd_check_system(const Context& ctx, int n, double lambda, double b) {
    const AmplitudeResult amp = amplitude_fixed_point(n, lambda, b);
    ClassifiedSolution s = classified_pair(n, lambda, amp.a, b, {Vec(n - 1, 0.0)});
    s.field = amp.field;
    const SystemResidual res = system_residual(s, {0.0, 1.0, 10.0});
    const GrowthReport g = growth_and_identity_checks(s);
    RunReport r;
    r.command = "check-system";
    r.inputs = {{"n", n}, {"lambda", lambda}, {"b", b}};
    r.set("amplitude", amp.a, std::abs(amp.a - amp.closed_form));
    r.set("amplitude_closed_form", amp.closed_form, 0);
    r.set("scale_exponent", amp.scale_exponent, 0);
    r.set("res_u", res.res_u, 0);
    r.set("res_v", res.res_v, 0);
    r.set("trace_ratio", res.trace_ratio, res.trace_shape);
    r.set("trace_shape", res.trace_shape, 0);
    r.set("mass_u", g.mass_u, std::abs(g.mass_u - g.mass_v));
    r.set("mass_v", g.mass_v, std::abs(g.mass_u - g.mass_v));
    r.set("sandwich_c", g.sandwich_c, 0);
    const bool pass = res.res_u <= 1e-6 && res.trace_shape <= 1e-8 && g.sandwich_ok;
    r.set("pass", pass ? 1 : 0, 0);
    ctx.emit(r);
    return pass ? kOk : kPropertyFailed;
}

int cmd_minimize(const Context& ctx, int n, double lambda, int grid, std::uint64_t seed, const std::string& init,
                 const std::string& out) {
    const ExponentSet e = diagonal_exponents(n, lambda);
    MinimizeOptions o;
    o.grid_size = grid;
    o.seed = seed;
    o.init = parse_init(init);
    o.tol = ctx.settings.minimize_tol;
    o.max_iters = ctx.settings.minimize_max_iters;
    o.validate();
    const MinimizeResult m = minimize_profile(e, o);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < m.values.size(); ++i) rows.push_back({m.profile.radii[i], m.values[i]});
    write_text(out, csv_text({"r", "value"}, rows));
    RunReport r;
    r.command = "minimize";
    r.seed = seed;
    r.inputs = {{"n", n}, {"lambda", lambda}, {"grid", grid}, {"init", init}, {"out", out},
                {"tol", o.tol}, {"max_iters", o.max_iters}};
    const double drop = m.trace.size() > 1 ? m.trace[m.trace.size() - 2] - m.trace.back() : 0;
    r.set("constant", m.constant, drop);
    r.set("stationarity", m.stationarity, 0);
    r.set("iterations", m.iterations, 0);
    r.set("p_mass", m.p_mass, std::abs(m.p_mass - 1));
    r.set("tail_exponent", m.tail_exponent, 0);
    if (lambda == 2) {
        const ShapeFit fit = fit_extremal_shape(m.profile.radii, m.values, 1 - n - 0.5 * lambda);
        r.set("fit_scale_c", fit.scale_c, 0);
        r.set("fit_scale_s", fit.scale_s, 0);
        r.set("fit_max_rel_dev", fit.max_rel_dev, 0);
        r.set("c_closed_form", c_explicit_lambda2(n), 0);
    }
    r.set("converged", m.converged ? 1 : 0, 0);
    ctx.emit(r);
    return m.converged ? kOk : kNoConvergence;
}

int cmd_loghls(const Context& ctx, int n) {
    RunReport r;
    r.command = "loghls";
    r.inputs = {{"n", n}};
    if (n < 2) throw InvalidArgument("n must be at least 2");
    r.set("c_n_log", c_n_log(n, ctx.settings.constant_spec), 0);
    bool pass = true;
    if (n == 2) {
        const LogHlsPair pair = loghls_extremal_pair();
        const LogHlsTerms t = loghls_terms(pair.f, pair.g);
        r.set("entropy_f", t.entropy_f, 0);
        r.set("entropy_g", t.entropy_g, 0);
        r.set("cross", t.cross, 0);
        r.set("constant", t.constant, 0);
        r.set("deficit", t.deficit, std::abs(t.deficit));
        pass = std::abs(t.deficit) <= 1e-5;
        r.set("pass", pass ? 1 : 0, 0);
    }
    ctx.emit(r);
    return pass ? kOk : kPropertyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reversed HLS inequality on the half space: constants, checks and experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config;
    int threads = 0;
    Context ctx;
    app.add_option("--config", config, "JSON file presetting tolerances")->check(CLI::ExistingFile);
    app.add_option("--threads", threads, "worker threads (default: OpenMP default)")->check(CLI::PositiveNumber);
    app.add_flag("--reproducible", ctx.reproducible, "write wall_time_ms = 0 so reports are byte-identical");
    app.add_option("--report", ctx.report_path, "write the JSON report here instead of stdout");

    std::optional<double> rel_tol, abs_tol;
    auto tolerances = [&](CLI::App* sub) {
        sub->add_option("--rel-tol", rel_tol, "quadrature relative tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--abs-tol", abs_tol, "quadrature absolute tolerance")->check(CLI::PositiveNumber);
    };

    int n = 2;
    double lambda = 2, from = 0, to = 0, p = 0.5, b = 1;
    int steps = 20, trials = 100, grid = MinimizeOptions{}.grid_size;
    std::uint64_t seed = 1;
    std::optional<long> samples;
    std::optional<double> tol;
    std::optional<int> max_iters;
    std::string method = "both", out, init = "random";

    auto* constants = app.add_subcommand("constants", "sharp constant by the spherical formula and/or in closed form");
    constants->add_option("--n", n)->required();
    constants->add_option("--lambda", lambda)->required();
    constants->add_option("--method", method)->check(CLI::IsMember({"spherical", "closed-form", "both"}));
    tolerances(constants);

    auto* scan = app.add_subcommand("scan", "constant over a lambda range, as CSV");
    scan->add_option("--n", n)->required();
    scan->add_option("--lambda-from", from)->required()->check(CLI::PositiveNumber);
    scan->add_option("--lambda-to", to)->required();
    scan->add_option("--steps", steps)->check(CLI::PositiveNumber);
    scan->add_option("--out", out)->required();
    tolerances(scan);

    auto* verify = app.add_subcommand("verify", "random pairs against the sharp constant");
    verify->add_option("--n", n)->required();
    verify->add_option("--lambda", lambda)->required();
    verify->add_option("--p", p)->required();
    verify->add_option("--trials", trials)->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed);
    verify->add_option("--samples", samples, "Monte Carlo samples per trial")->check(CLI::Range(2L, 1L << 30));
    tolerances(verify);

    auto* check_system = app.add_subcommand("check-system", "classified solution of the Euler-Lagrange system");
    check_system->add_option("--n", n)->required();
    check_system->add_option("--lambda", lambda)->required();
    check_system->add_option("--b", b)->check(CLI::PositiveNumber);

    auto* minimize = app.add_subcommand("minimize", "variational minimizer over radial profiles");
    minimize->add_option("--n", n)->required();
    minimize->add_option("--lambda", lambda)->required();
    minimize->add_option("--grid", grid);
    minimize->add_option("--seed", seed);
    minimize->add_option("--init", init)->check(CLI::IsMember({"random", "flat", "extremal-seed"}));
    minimize->add_option("--tol", tol)->check(CLI::PositiveNumber);
    minimize->add_option("--max-iters", max_iters)->check(CLI::NonNegativeNumber);
    minimize->add_option("--out", out, "profile CSV (default profile.csv)");

    auto* loghls = app.add_subcommand("loghls", "log-HLS constant and deficit at the extremal pair");
    loghls->add_option("--n", n)->required();
    tolerances(loghls);

    try {
        app.parse(argc, argv);
        if (scan->parsed() && !(from < to))
            throw CLI::ValidationError("--lambda-from", "must be smaller than --lambda-to");
        if (!config.empty()) apply_config(config, ctx.settings);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    if (rel_tol) ctx.settings.constant_spec.rel_tol = *rel_tol;
    if (abs_tol) ctx.settings.constant_spec.abs_tol = *abs_tol;
    if (samples) ctx.settings.samples = *samples;
    if (tol) ctx.settings.minimize_tol = *tol;
    if (max_iters) ctx.settings.minimize_max_iters = *max_iters;
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (constants->parsed()) return cmd_constants(ctx, n, lambda, method);
        if (scan->parsed()) return cmd_scan(ctx, n, from, to, steps, out);
        if (verify->parsed()) return cmd_verify(ctx, n, lambda, p, trials, seed);
        if (check_system->parsed()) return cmd_check_system(ctx, n, lambda, b);
        if (minimize->parsed()) return cmd_minimize(ctx, n, lambda, grid, seed, init, out.empty() ? "profile.csv" : out);
        if (loghls->parsed()) return cmd_loghls(ctx, n);
    } catch (const NoConvergence& e) {
        std::cerr << "no convergence: " << e.what() << " (best " << e.best_value << " +- " << e.best_error << ")\n";
        return kNoConvergence;
    } catch (const Stalled& e) {
        std::cerr << "stalled: " << e.what() << "\n";
        return kNoConvergence;
    } catch (const OutOfRange& e) {
        std::cerr << "invalid exponents: " << e.what() << "\n";
        return kBadExponents;
    } catch (const DegenerateExponent& e) {
        std::cerr << "invalid exponents: " << e.what() << "\n";
        return kBadExponents;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kBadExponents;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kPropertyFailed;
    }
    return kUsage;
}
