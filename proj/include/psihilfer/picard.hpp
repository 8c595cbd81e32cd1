#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psihilfer/frac_ops.hpp"
#include "psihilfer/grid.hpp"
#include "psihilfer/rhs_expr.hpp"

namespace psihilfer {

/// D^{eta,nu;Psi} y = f(t, y) on [a, a + xi] with I^{1-zeta;Psi} y(a) = y_a.
/// k_box is the radius of the box |y - y_0| <= k around the initial iterate.
struct CauchyProblem {
    PsiMap psi;
    OrderParams params;
    double a = 0.0;
    double xi = 1.0;
    double y_a = 0.0;
    RhsExpr rhs;
    double k_box = 1.0;

    /// Throws DomainViolation / ParamViolation on an inconsistent problem.
    void validate() const;
};

struct ExistenceInterval {
    double chi = 0.0;
    /// Psi(a) + offset ran past the end of the Psi domain; chi was clamped to xi.
    bool clamped = false;
};

/// chi = min{xi, Psi^{-1}[Psi(a) + (k Gamma(eta+zeta) / (Gamma(zeta) norm_f))^{1/eta}] - a}.
/// norm_f = 0 gives chi = xi.
ExistenceInterval existence_interval(const CauchyProblem& problem, double norm_f);

/// Weighted value y_a / Gamma(zeta) of the initial iterate.
double initial_weighted_value(const CauchyProblem& problem);

/// Weighted bound M of f over the box around y_0 and Lipschitz constant L,
/// both taken on [a, a + xi].
struct ProblemConstants {
    double M = 0.0;
    double L = 0.0;
    std::string M_source;
    std::string L_source;
};

/// M = max_i X_i^{1-zeta} |f(t_i, y_0(t_i))| + L k max_i X_i^{1-zeta} on an n-panel grid;
/// L from lipschitz_estimate over y in [min y_0 - k, max y_0 + k]. Either may be overridden.
ProblemConstants measure_constants(const CauchyProblem& problem, std::size_t n,
                                   std::optional<double> L_override = std::nullopt,
                                   std::optional<double> M_override = std::nullopt);

/// One Picard step y -> y_0 + I^{eta;Psi} f(., y) on a fixed grid, in weighted form.
class PicardOperator {
public:
    PicardOperator(const CauchyProblem& problem, GridPtr grid, Execution exec = Execution::parallel);

    const GridPtr& grid() const { return grid_; }

    /// F_i = (Psi(t_i) - Psi(a))^{1-zeta} f(t_i, y(t_i)); F_0 is evaluated
    /// directly when zeta = 1 and extrapolated from F_1..F_3 otherwise.
    std::vector<double> composite(std::span<const double> w) const;

    /// Weighted samples of the next iterate; w_0 is always y_a / Gamma(zeta).
    std::vector<double> apply(std::span<const double> w) const;

    /// Weighted samples of the initial iterate y_0 = H(t, a) y_a.
    std::vector<double> initial() const;

private:
    CauchyProblem problem_;
    GridPtr grid_;
    FracIntegrator integrator_;
    std::vector<double> weight_up_;    // X_i^{1-zeta}
    std::vector<double> weight_down_;  // X_i^{zeta-1}, index 0 unused
    double w0_;
};

struct SolveOptions {
    std::size_t n = 1024;
    double tol = 1e-10;
    std::size_t max_iter = 200;
    std::optional<double> L_override;
    std::optional<double> M_override;
    /// Solve horizon; must not exceed xi. Defaults to chi.
    std::optional<double> horizon;
    bool keep_iterates = false;
    /// Weighted samples replacing y_0 as the first iterate; w_0 is reset to y_a / Gamma(zeta).
    std::optional<std::vector<double>> initial_iterate;
    Execution execution = Execution::parallel;
};

struct SolveReport {
    std::size_t iterations = 0;
    double chi = 0.0;
    bool chi_clamped = false;
    double horizon = 0.0;
    /// ||y_m - y_{m-1}|| for m = 1..iterations.
    std::vector<double> weighted_deltas;
    /// apriori_error_bound at m = 0..iterations over the solve horizon.
    std::vector<double> apriori_bounds;
    /// NaN when the grid is too coarse for residual_check.
    double residual_norm = 0.0;
    bool converged = false;
    double M_used = 0.0;
    double L_used = 0.0;
    std::string M_source;
    std::string L_source;
    std::vector<std::string> warnings;
    /// Weighted samples of y_0..y_final when keep_iterates is set.
    std::vector<std::vector<double>> iterates;
};

struct SolveResult {
    WeightedGridFunction solution;
    SolveReport report;
};

/// Successive approximations in weighted form. Non-convergence is reported
/// through report.converged, never thrown.
SolveResult picard_solve(const CauchyProblem& problem, const SolveOptions& options = {});

/// (M Gamma(zeta) / L) sum_{k > n_iter} (L X^eta)^k / Gamma(k eta + zeta), X = Psi(a + chi) - Psi(a).
double apriori_error_bound(double M, double L, std::size_t n_iter, const OrderParams& params, const PsiMap& psi,
                           double a, double chi);

/// {1 + Gamma(zeta) E_{eta,zeta}(L X^eta)} |y_a - z_a| / Gamma(zeta).
double continuous_dependence_bound(double y_a, double z_a, double L, const OrderParams& params, const PsiMap& psi,
                                   double a, double chi);

/// max over i in [n/16, n-1] of X_i^{1-zeta} |D y(t_i) - f(t_i, y(t_i))|. Needs n >= 256.
double residual_check(const CauchyProblem& problem, const WeightedGridFunction& solution,
                      Execution exec = Execution::parallel);

}  // namespace psihilfer
