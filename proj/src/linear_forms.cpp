#include "psihilfer/linear_forms.hpp"

#include <cmath>
#include <locale>
#include <sstream>

#include "psihilfer/errors.hpp"
#include "psihilfer/special_functions.hpp"

namespace psihilfer {

namespace {

constexpr std::size_t kMinPanels = 4;

std::string short_number(double v) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << v;
    return out.str();
}

GridPtr make_grid(const LinearProblem& problem, std::size_t n) {
    if (n < kMinPanels) throw Error(ErrorKind::GridTooCoarse, "linear solves need n >= 4");
    return PsiGrid::make(problem.psi, problem.a, problem.b, n);
}

}  // namespace

void LinearProblem::validate() const {
    if (!(b > a)) throw Error(ErrorKind::ParamViolation, "b must exceed a");
    if (!std::isfinite(y_a) || !std::isfinite(lambda)) {
        throw Error(ErrorKind::ParamViolation, "y_a and lambda must be finite");
    }
    if (mu) {
        const double floor = 1.0 - params.eta();
        if (!(*mu > floor)) {
            throw Error(ErrorKind::ParamViolation, "mu must exceed 1-eta = " + short_number(floor));
        }
        if (forcing) throw Error(ErrorKind::ParamViolation, "the variable-coefficient problem takes no forcing");
    }
    if (forcing && forcing->depends_on_y()) throw Error(ErrorKind::ParamViolation, "forcing must depend on t only");
}

KilbasSaigoParams variable_coefficient_params(const OrderParams& params, double mu) {
    const double eta = params.eta();
    return {1.0 + (mu - 1.0) / eta, (mu + params.zeta() - 2.0) / eta};
}

WeightedGridFunction solve_constant(const LinearProblem& problem, std::size_t n, Execution exec) {
    problem.validate();
    if (problem.mu) throw Error(ErrorKind::ParamViolation, "solve_constant does not take mu");
    const auto grid = make_grid(problem, n);
    const double eta = problem.params.eta();
    const double zeta = problem.params.zeta();
    const double h = grid->h();

    WeightedGridFunction out{grid, zeta, std::vector<double>(grid->size())};
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double z = problem.lambda * std::pow(grid->x(i), eta);
        out.w[i] = problem.y_a * mittag_leffler2(eta, zeta, z).value;
    }
    if (!problem.forcing) return out;

    std::vector<double> factor(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        const double mid = (static_cast<double>(k) - 0.5) * h;
        factor[k] = mittag_leffler2(eta, eta, problem.lambda * std::pow(mid, eta)).value;
    }
    const auto weights = kernels::abel_toeplitz(kernels::abel_moments(eta, n), factor, std::pow(h, eta));

    std::vector<double> f(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) f[i] = problem.forcing->eval(grid->t(i), 0.0);
    std::vector<double> conv(grid->size());
    kernels::apply_toeplitz(exec, weights, f, conv);
    for (std::size_t i = 1; i < grid->size(); ++i) {
        const double up = zeta == 1.0 ? 1.0 : std::pow(grid->x(i), 1.0 - zeta);
        out.w[i] += up * conv[i];
    }
    return out;
}

WeightedGridFunction solve_variable(const LinearProblem& problem, std::size_t n) {
    problem.validate();
    if (!problem.mu) throw Error(ErrorKind::ParamViolation, "solve_variable needs mu");
    const auto grid = make_grid(problem, n);
    const double eta = problem.params.eta();
    const double zeta = problem.params.zeta();
    const auto [m, l] = variable_coefficient_params(problem.params, *problem.mu);
    const double scale = problem.y_a * std::exp(-log_gamma(zeta));
    const double power = eta + *problem.mu - 1.0;

    WeightedGridFunction out{grid, zeta, std::vector<double>(grid->size())};
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double z = problem.lambda * std::pow(grid->x(i), power);
        out.w[i] = scale * kilbas_saigo(eta, m, l, z).value;
    }
    return out;
}

}  // namespace psihilfer
