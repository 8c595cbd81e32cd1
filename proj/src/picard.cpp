#include "psihilfer/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psihilfer/errors.hpp"
#include "psihilfer/special_functions.hpp"

namespace psihilfer {

namespace {

constexpr std::size_t kMinPanels = 16;
constexpr std::size_t kLipschitzSamples = 1024;
constexpr double kBoxExitFactor = 1.1;

std::vector<double> initial_samples(const PsiGrid& grid, double w0) { return std::vector<double>(grid.size(), w0); }

}  // namespace

void CauchyProblem::validate() const {
    if (!(xi > 0.0) || !std::isfinite(xi)) throw Error(ErrorKind::ParamViolation, "xi must be positive");
    if (!(k_box > 0.0) || !std::isfinite(k_box)) throw Error(ErrorKind::ParamViolation, "k_box must be positive");
    if (!std::isfinite(y_a)) throw Error(ErrorKind::ParamViolation, "y_a must be finite");
    const Interval& dom = psi.domain();
    const double slack = 1e-12 * std::max(1.0, std::abs(a + xi));
    if (!dom.contains(a) || !dom.contains(a + xi, slack)) {
        throw Error(ErrorKind::DomainViolation, "[a, a + xi] must lie inside the Psi domain");
    }
}

double initial_weighted_value(const CauchyProblem& problem) {
    return problem.y_a * std::exp(-log_gamma(problem.params.zeta()));
}

ExistenceInterval existence_interval(const CauchyProblem& problem, double norm_f) {
    problem.validate();
    if (!(norm_f >= 0.0)) throw Error(ErrorKind::ParamViolation, "norm_f must be nonnegative");
    if (norm_f == 0.0) return {problem.xi, false};
    const double eta = problem.params.eta();
    const double zeta = problem.params.zeta();
    const double log_ratio =
        std::log(problem.k_box) + log_gamma(eta + zeta) - log_gamma(zeta) - std::log(norm_f);
    const double offset = std::exp(log_ratio / eta);
    const double u_a = problem.psi.eval(problem.a);
    const double u_end = problem.psi.eval(problem.psi.domain().hi);
    if (!std::isfinite(offset) || u_a + offset > u_end) return {problem.xi, true};
    const double reach = problem.psi.inverse(u_a + offset) - problem.a;
    return {std::min(problem.xi, reach), false};
}

PicardOperator::PicardOperator(const CauchyProblem& problem, GridPtr grid, Execution exec)
    : problem_(problem),
      grid_(grid),
      integrator_(FracIntegrator::weighted(grid, problem.params.eta(), problem.params.zeta(), exec)),
      weight_up_(grid->size(), 1.0),
      weight_down_(grid->size(), 1.0),
      w0_(initial_weighted_value(problem)) {
    const double zeta = problem.params.zeta();
    if (zeta != 1.0) {
        weight_up_[0] = 0.0;
        for (std::size_t i = 1; i < grid->size(); ++i) {
            weight_up_[i] = std::pow(grid->x(i), 1.0 - zeta);
            weight_down_[i] = 1.0 / weight_up_[i];
        }
    }
}

std::vector<double> PicardOperator::composite(std::span<const double> w) const {
    const PsiGrid& grid = *grid_;
    if (w.size() != grid.size()) throw Error(ErrorKind::GridMismatch, "iterate does not match the grid");
    std::vector<double> F(grid.size());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        F[i] = weight_up_[i] * problem_.rhs.eval(grid.t(i), w[i] * weight_down_[i]);
    }
    if (problem_.params.zeta() == 1.0) {
        F[0] = problem_.rhs.eval(grid.t(0), w[0]);
    } else {
        F[0] = extrapolate_to_origin(F[1], F[2], F[3]);
    }
    return F;
}

std::vector<double> PicardOperator::apply(std::span<const double> w) const {
    std::vector<double> next = integrator_.weighted_values(composite(w));
    for (double& v : next) v += w0_;
    next[0] = w0_;
    return next;
}

std::vector<double> PicardOperator::initial() const { return initial_samples(*grid_, w0_); }

ProblemConstants measure_constants(const CauchyProblem& problem, std::size_t n, std::optional<double> L_override,
                                   std::optional<double> M_override) {
    problem.validate();
    const double zeta = problem.params.zeta();
    const double w0 = initial_weighted_value(problem);
    const auto grid = PsiGrid::make(problem.psi, problem.a, problem.a + problem.xi, n);
    double y_lo = std::numeric_limits<double>::infinity();
    double y_hi = -y_lo;
    double max_weight_up = 0.0;
    double max_f0 = 0.0;
    for (std::size_t i = 1; i < grid->size(); ++i) {
        const double up = zeta == 1.0 ? 1.0 : std::pow(grid->x(i), 1.0 - zeta);
        const double y0 = w0 / up;
        y_lo = std::min(y_lo, y0);
        y_hi = std::max(y_hi, y0);
        max_weight_up = std::max(max_weight_up, up);
        max_f0 = std::max(max_f0, up * std::abs(problem.rhs.eval(grid->t(i), y0)));
    }
    if (zeta == 1.0) max_f0 = std::max(max_f0, std::abs(problem.rhs.eval(problem.a, w0)));

    ProblemConstants out;
    if (L_override) {
        if (!(*L_override >= 0.0)) throw Error(ErrorKind::ParamViolation, "L_override must be nonnegative");
        out.L = *L_override;
        out.L_source = "override";
    } else {
        out.L = lipschitz_estimate(problem.rhs, {problem.a, problem.a + problem.xi},
                                   {y_lo - problem.k_box, y_hi + problem.k_box}, kLipschitzSamples);
        out.L_source = "estimated (heuristic)";
    }
    if (M_override) {
        if (!(*M_override >= 0.0)) throw Error(ErrorKind::ParamViolation, "M_override must be nonnegative");
        out.M = *M_override;
        out.M_source = "override";
    } else {
        out.M = max_f0 + out.L * problem.k_box * max_weight_up;
        out.M_source = "measured on initial iterate plus box slack";
    }
    return out;
}

SolveResult picard_solve(const CauchyProblem& problem, const SolveOptions& options) {
    problem.validate();
    if (options.n < kMinPanels) throw Error(ErrorKind::GridTooCoarse, "picard_solve needs n >= 16");
    if (!(options.tol > 0.0)) throw Error(ErrorKind::ParamViolation, "tol must be positive");
    if (options.max_iter == 0) throw Error(ErrorKind::ParamViolation, "max_iter must be positive");

    SolveReport report;
    const double zeta = problem.params.zeta();
    const double w0 = initial_weighted_value(problem);

    const ProblemConstants constants =
        measure_constants(problem, options.n, options.L_override, options.M_override);
    report.M_used = constants.M;
    report.L_used = constants.L;
    report.M_source = constants.M_source;
    report.L_source = constants.L_source;

    const ExistenceInterval chi = existence_interval(problem, report.M_used);
    report.chi = chi.chi;
    report.chi_clamped = chi.clamped;
    if (chi.clamped) report.warnings.emplace_back("existence interval clamped to xi at the end of the Psi domain");
    report.horizon = report.chi;
    if (options.horizon) {
        if (!(*options.horizon > 0.0) || *options.horizon > problem.xi) {
            throw Error(ErrorKind::ParamViolation, "horizon must lie in (0, xi]");
        }
        report.horizon = *options.horizon;
        if (report.horizon > report.chi) {
            report.warnings.emplace_back("horizon exceeds the existence interval chi");
        }
    }

    const auto grid = PsiGrid::make(problem.psi, problem.a, problem.a + report.horizon, options.n);
    const PicardOperator op(problem, grid, options.execution);

    std::vector<double> current = op.initial();
    if (options.initial_iterate) {
        if (options.initial_iterate->size() != grid->size()) {
            throw Error(ErrorKind::GridMismatch, "initial iterate does not match the grid");
        }
        current = *options.initial_iterate;
        current[0] = w0;
    }
    if (options.keep_iterates) report.iterates.push_back(current);

    const std::vector<double> y0 = op.initial();
    std::vector<double> up(grid->size(), 1.0);
    if (zeta != 1.0) {
        for (std::size_t i = 1; i < grid->size(); ++i) up[i] = std::pow(grid->x(i), 1.0 - zeta);
    }
    bool box_warned = false;

    while (report.iterations < options.max_iter) {
        std::vector<double> next = op.apply(current);
        double delta = 0.0;
        double excursion = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            delta = std::max(delta, std::abs(next[i] - current[i]));
            if (i > 0) excursion = std::max(excursion, std::abs(next[i] - y0[i]) / up[i]);
        }
        ++report.iterations;
        report.weighted_deltas.push_back(delta);
        current = std::move(next);
        if (options.keep_iterates) report.iterates.push_back(current);
        if (!box_warned && excursion > kBoxExitFactor * problem.k_box) {
            report.warnings.emplace_back("BoxExit: iterate " + std::to_string(report.iterations) +
                                         " leaves the box around y_0 by more than 10%");
            box_warned = true;
        }
        if (!std::isfinite(delta)) break;
        if (delta <= options.tol) {
            report.converged = true;
            break;
        }
    }
    if (!report.converged) {
        report.warnings.emplace_back("NotConverged: stopped after " + std::to_string(report.iterations) +
                                     " iterations");
    }

    if (report.L_used > 0.0) {
        for (std::size_t m = 0; m <= report.iterations; ++m) {
            report.apriori_bounds.push_back(apriori_error_bound(report.M_used, report.L_used, m, problem.params,
                                                                problem.psi, problem.a, report.horizon));
        }
    }

    WeightedGridFunction solution{grid, zeta, std::move(current)};
    report.residual_norm = options.n >= 256 ? residual_check(problem, solution, options.execution)
                                            : std::numeric_limits<double>::quiet_NaN();
    return {std::move(solution), std::move(report)};
}

double apriori_error_bound(double M, double L, std::size_t n_iter, const OrderParams& params, const PsiMap& psi,
                           double a, double chi) {
    if (!(L > 0.0)) throw Error(ErrorKind::ParamViolation, "apriori_error_bound needs L > 0");
    if (!(M >= 0.0)) throw Error(ErrorKind::ParamViolation, "apriori_error_bound needs M >= 0");
    if (M == 0.0) return 0.0;
    const double x = psi_increment(psi, a, a + chi);
    const double z = L * std::pow(x, params.eta());
    const double tail = mittag_leffler2_tail(params.eta(), params.zeta(), z, n_iter);
    return M * gamma_fn(params.zeta()) / L * tail;
}

double continuous_dependence_bound(double y_a, double z_a, double L, const OrderParams& params, const PsiMap& psi,
                                   double a, double chi) {
    if (!(L > 0.0)) throw Error(ErrorKind::ParamViolation, "continuous_dependence_bound needs L > 0");
    const double gz = gamma_fn(params.zeta());
    const double x = psi_increment(psi, a, a + chi);
    const double ml = mittag_leffler2(params.eta(), params.zeta(), L * std::pow(x, params.eta())).value;
    return (1.0 + gz * ml) * std::abs(y_a - z_a) / gz;
}

double residual_check(const CauchyProblem& problem, const WeightedGridFunction& solution, Execution exec) {
    const PsiGrid& grid = *solution.grid;
    const std::size_t n = grid.n();
    if (n < 256) throw Error(ErrorKind::GridTooCoarse, "residual_check needs n >= 256");
    const std::vector<double> d = hilfer_derivative(problem.params, solution, exec);
    const double zeta = solution.zeta;
    double worst = 0.0;
    for (std::size_t i = n / 16; i < n; ++i) {
        const double y = solution.value(i);
        const double gap = std::abs(d[i - 1] - problem.rhs.eval(grid.t(i), y));
        worst = std::max(worst, zeta == 1.0 ? gap : std::pow(grid.x(i), 1.0 - zeta) * gap);
    }
    return worst;
}

}  // namespace psihilfer
