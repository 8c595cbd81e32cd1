#include "psihilfer/cli.hpp"

#include <omp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "psihilfer/config.hpp"
#include "psihilfer/frac_ops.hpp"
#include "psihilfer/linear_forms.hpp"
#include "psihilfer/special_functions.hpp"

namespace psihilfer::cli {

namespace {

std::ofstream open_output(const std::string& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    return file;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream file = open_output(path);
    file << contents;
    file.flush();
    if (!file) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
}

std::string join_numbers(const std::vector<double>& values) {
    std::string out;
    for (double v : values) {
        if (!out.empty()) out += ' ';
        out += format_number(v);
    }
    return out;
}

void apply_threads(int threads) {
    if (threads > 0) omp_set_num_threads(threads);
}

std::optional<double> parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

/// Two-column CSV (t, h); an optional non-numeric header line is skipped.
void read_samples(const std::string& path, std::vector<double>& t, std::vector<double>& h) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        const auto tv = comma == std::string::npos ? std::nullopt : parse_double(std::string_view(line).substr(0, comma));
        const auto hv = comma == std::string::npos ? std::nullopt : parse_double(std::string_view(line).substr(comma + 1));
        if (!tv || !hv) {
            if (line_no == 1) continue;
            throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": expected 't,h'");
        }
        if (!t.empty() && !(*tv > t.back())) {
            throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": t must increase strictly");
        }
        t.push_back(*tv);
        h.push_back(*hv);
    }
    if (t.size() < 2) throw Error(ErrorKind::ParseError, path + ": need at least two samples");
}

double interpolate(const std::vector<double>& t, const std::vector<double>& h, double x) {
    auto it = std::upper_bound(t.begin(), t.end(), x);
    if (it == t.begin()) return h.front();
    if (it == t.end()) return h.back();
    const auto j = static_cast<std::size_t>(it - t.begin());
    const double s = (x - t[j - 1]) / (t[j] - t[j - 1]);
    return h[j - 1] + s * (h[j] - h[j - 1]);
}

struct SolveArgs {
    std::string config;
    std::string output;
    std::string report;
    int threads = 0;
};

int do_solve(const SolveArgs& args, std::ostream& out) {
    apply_threads(args.threads);
    const ProblemConfig cfg = load_config(args.config);
    const CauchyProblem problem = cfg.cauchy_problem();
    const SolveResult result = picard_solve(problem, cfg.solve_options());
    const std::string csv_path = args.output.empty() ? cfg.output_path : args.output;
    const std::string report_path = args.report.empty() ? csv_path + ".report" : args.report;

    std::ostringstream csv;
    write_solution_csv(csv, result.solution);
    write_file(csv_path, csv.str());
    const std::string report = format_report(result.report, problem.params.zeta());
    write_file(report_path, report);
    out << report;
    return result.report.converged ? ok : numerical;
}

struct LinearArgs {
    SolveArgs io;
    std::string mode = "constant";
};

int do_linear(const LinearArgs& args, std::ostream& out) {
    apply_threads(args.io.threads);
    const ProblemConfig cfg = load_config(args.io.config);
    const LinearProblem problem = cfg.linear_problem();
    const WeightedGridFunction f = args.mode == "variable" ? solve_variable(problem, cfg.n) : solve_constant(problem, cfg.n);
    const std::string csv_path = args.io.output.empty() ? cfg.output_path : args.io.output;
    std::ostringstream csv;
    write_solution_csv(csv, f);
    write_file(csv_path, csv.str());
    out << "mode = " << args.mode << "\nzeta = " << format_number(f.zeta) << "\nn = " << cfg.n
        << "\noutput = " << csv_path << '\n';
    return ok;
}

struct FrintArgs {
    std::string input;
    std::string output;
    std::string psi = "identity";
    double rho = 1.0;
    double eta = 0.5;
    double a = 0.0;
    double b = 1.0;
    std::size_t n = 1024;
    int threads = 0;
};

int do_frint(const FrintArgs& args, std::ostream& out) {
    apply_threads(args.threads);
    const auto kind = psi_kind_from_string(args.psi);
    if (!kind || *kind == PsiKind::custom) throw Error(ErrorKind::ValidationError, "--psi must be identity, power, log or exp");
    if (!(args.b > args.a)) throw Error(ErrorKind::ValidationError, "--b must exceed --a");
    if (args.n < 2) throw Error(ErrorKind::ValidationError, "--n must be at least 2");
    const double params[1] = {args.rho};
    const auto grid = PsiGrid::make(make_psi(*kind, params, {args.a, args.b}), args.a, args.b, args.n);

    std::vector<double> t;
    std::vector<double> h;
    read_samples(args.input, t, h);
    const double slack = 1e-12 * std::max(1.0, std::abs(args.b));
    if (t.front() > args.a + slack || t.back() < args.b - slack) {
        throw Error(ErrorKind::ValidationError, "input samples must cover [a, b]");
    }
    std::vector<double> samples(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) samples[i] = interpolate(t, h, grid->t(i));
    const std::vector<double> result = frac_integral(grid, args.eta, samples);

    std::ostringstream csv;
    csv << "t,integral\n";
    for (std::size_t i = 0; i < grid->size(); ++i) {
        csv << format_number(grid->t(i)) << ',' << format_number(result[i]) << '\n';
    }
    if (args.output.empty()) {
        out << csv.str();
    } else {
        write_file(args.output, csv.str());
    }
    return ok;
}

struct MlArgs {
    std::string family = "two-param";
    double eta = 1.0;
    double nu = 1.0;
    double m = 1.0;
    double l = 0.0;
    double z = 0.0;
    double rel_tol = 1e-12;
    std::size_t max_terms = 10'000;
    bool verbose = false;
};

int do_ml(const MlArgs& args, std::ostream& out) {
    const MLSeriesParams policy{args.rel_tol, args.max_terms};
    const SeriesResult r = args.family == "kilbas-saigo" ? kilbas_saigo(args.eta, args.m, args.l, args.z, policy)
                                                         : mittag_leffler2(args.eta, args.nu, args.z, policy);
    out << format_number(r.value) << '\n';
    if (args.verbose) {
        out << "terms_used = " << r.terms_used << "\ntruncation_estimate = " << format_number(r.truncation_estimate)
            << "\nconverged = " << (r.converged ? "true" : "false") << '\n';
    }
    return r.converged ? ok : numerical;
}

struct BoundsArgs {
    std::string config;
    std::optional<double> norm_f;
    std::optional<double> z_a;
    std::size_t iterations = 20;
};

int do_bounds(const BoundsArgs& args, std::ostream& out) {
    const ProblemConfig cfg = load_config(args.config);
    const CauchyProblem problem = cfg.cauchy_problem();
    const ProblemConstants constants = measure_constants(problem, cfg.n, cfg.L_override, cfg.M_override);
    const double norm_f = args.norm_f.value_or(constants.M);
    const ExistenceInterval chi = existence_interval(problem, norm_f);

    out << "zeta = " << format_number(problem.params.zeta()) << '\n';
    out << "norm_f = " << format_number(norm_f) << '\n';
    out << "norm_source = " << (args.norm_f ? "override (--norm-f)" : constants.M_source) << '\n';
    out << "chi = " << format_number(chi.chi) << '\n';
    out << "chi_clamped = " << (chi.clamped ? "true" : "false") << '\n';
    out << "M_used = " << format_number(constants.M) << '\n';
    out << "L_used = " << format_number(constants.L) << '\n';
    out << "L_source = " << constants.L_source << '\n';
    if (!(constants.L > 0.0)) {
        out << "apriori_error_bound = n/a (L = 0)\n";
        out << "continuous_dependence_factor = n/a (L = 0)\n";
        return ok;
    }
    for (std::size_t m = 0; m <= args.iterations; ++m) {
        out << "apriori_error_bound[" << m << "] = "
            << format_number(apriori_error_bound(constants.M, constants.L, m, problem.params, problem.psi, problem.a,
                                                 chi.chi))
            << '\n';
    }
    out << "continuous_dependence_factor = "
        << format_number(continuous_dependence_bound(1.0, 0.0, constants.L, problem.params, problem.psi, problem.a,
                                                     chi.chi))
        << '\n';
    if (args.z_a) {
        out << "continuous_dependence_bound = "
            << format_number(continuous_dependence_bound(problem.y_a, *args.z_a, constants.L, problem.params,
                                                         problem.psi, problem.a, chi.chi))
            << '\n';
    }
    return ok;
}

int do_parse_check(const std::string& expr, std::ostream& out) {
    const RhsExpr parsed = RhsExpr::parse(expr);
    out << "canonical = " << parsed.to_string() << '\n';
    out << "depends_on_t = " << (parsed.depends_on_t() ? "true" : "false") << '\n';
    out << "depends_on_y = " << (parsed.depends_on_y() ? "true" : "false") << '\n';
    out << parsed.tree_string();
    return ok;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotConverged:
        case ErrorKind::OverflowGuard: return numerical;
        case ErrorKind::Io: return io;
        default: return validation;
    }
}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

void write_solution_csv(std::ostream& out, const WeightedGridFunction& f) {
    const PsiGrid& grid = *f.grid;
    out << "t,w,y\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << format_number(grid.t(i)) << ',' << format_number(f.w[i]) << ',';
        if (i > 0 || f.zeta == 1.0) out << format_number(f.value(i));
        out << '\n';
    }
}

std::string format_report(const SolveReport& report, double zeta) {
    std::ostringstream out;
    out << "zeta = " << format_number(zeta) << '\n';
    out << "chi = " << format_number(report.chi) << '\n';
    out << "chi_clamped = " << (report.chi_clamped ? "true" : "false") << '\n';
    out << "horizon = " << format_number(report.horizon) << '\n';
    out << "iterations = " << report.iterations << '\n';
    out << "converged = " << (report.converged ? "true" : "false") << '\n';
    out << "deltas = " << join_numbers(report.weighted_deltas) << '\n';
    out << "apriori_bounds = " << join_numbers(report.apriori_bounds) << '\n';
    out << "residual = " << format_number(report.residual_norm) << '\n';
    out << "M_used = " << format_number(report.M_used) << '\n';
    out << "M_source = " << report.M_source << '\n';
    out << "L_used = " << format_number(report.L_used) << '\n';
    out << "L_source = " << report.L_source << '\n';
    for (const auto& w : report.warnings) out << "warning = " << w << '\n';
    return out.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Psi-Hilfer fractional Cauchy problems by successive approximation", "psihilfer"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Picard solve of a nonlinear problem; writes CSV and report");
    solve->add_option("--config,-c", solve_args.config, "problem JSON")->required();
    solve->add_option("--output,-o", solve_args.output, "CSV path (default: output_path from config)");
    solve->add_option("--report", solve_args.report, "report path (default: <csv>.report)");
    solve->add_option("--threads", solve_args.threads, "OpenMP threads")->check(CLI::PositiveNumber);

    LinearArgs linear_args;
    auto* linear = app.add_subcommand("linear", "closed-form solution of a linear problem");
    linear->add_option("--config,-c", linear_args.io.config, "problem JSON")->required();
    linear->add_option("--mode", linear_args.mode, "constant or variable")
        ->check(CLI::IsMember({"constant", "variable"}));
    linear->add_option("--output,-o", linear_args.io.output, "CSV path (default: output_path from config)");
    linear->add_option("--threads", linear_args.io.threads, "OpenMP threads")->check(CLI::PositiveNumber);

    FrintArgs frint_args;
    auto* frint = app.add_subcommand("frint", "fractional integral of sampled data");
    frint->add_option("--input,-i", frint_args.input, "CSV with columns t,h")->required();
    frint->add_option("--output,-o", frint_args.output, "CSV path (default: stdout)");
    frint->add_option("--psi", frint_args.psi, "identity, power, log or exp");
    frint->add_option("--rho", frint_args.rho, "exponent for --psi power");
    frint->add_option("--eta", frint_args.eta, "order")->required();
    frint->add_option("--a", frint_args.a, "left end")->required();
    frint->add_option("--b", frint_args.b, "right end")->required();
    frint->add_option("--n", frint_args.n, "panels");
    frint->add_option("--threads", frint_args.threads, "OpenMP threads")->check(CLI::PositiveNumber);

    MlArgs ml_args;
    auto* ml = app.add_subcommand("ml", "evaluate a Mittag-Leffler function");
    ml->add_option("--family", ml_args.family, "two-param or kilbas-saigo")
        ->check(CLI::IsMember({"two-param", "kilbas-saigo"}));
    ml->add_option("--eta", ml_args.eta, "eta")->required();
    ml->add_option("--nu", ml_args.nu, "nu (two-param)");
    ml->add_option("--m", ml_args.m, "m (kilbas-saigo)");
    ml->add_option("--l", ml_args.l, "l (kilbas-saigo)");
    ml->add_option("--z", ml_args.z, "argument")->required();
    ml->add_option("--rel-tol", ml_args.rel_tol, "series tolerance");
    ml->add_option("--max-terms", ml_args.max_terms, "series term limit");
    ml->add_flag("--verbose,-v", ml_args.verbose, "also print series diagnostics");

    BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("bounds", "existence interval and error bounds for a problem");
    bounds->add_option("--config,-c", bounds_args.config, "problem JSON")->required();
    bounds->add_option("--norm-f", bounds_args.norm_f, "use this weighted norm of f instead of the measured M");
    bounds->add_option("--z-a", bounds_args.z_a, "second initial datum for the continuous-dependence bound");
    bounds->add_option("--iterations", bounds_args.iterations, "length of the a-priori bound table");

    std::string expr;
    auto* parse_check = app.add_subcommand("parse-check", "parse an expression and print its tree");
    parse_check->add_option("expr", expr, "expression in t and y")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : validation;
    }

    try {
        if (*solve) return do_solve(solve_args, out);
        if (*linear) return do_linear(linear_args, out);
        if (*frint) return do_frint(frint_args, out);
        if (*ml) return do_ml(ml_args, out);
        if (*bounds) return do_bounds(bounds_args, out);
        if (*parse_check) return do_parse_check(expr, out);
    } catch (const ConfigError& e) {
        for (const auto& v : e.violations()) err << "error: ValidationError: " << v << '\n';
        return validation;
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
    return validation;
}

}  // namespace psihilfer::cli
