#pragma once

#include <optional>

#include "psihilfer/frac_ops.hpp"
#include "psihilfer/grid.hpp"
#include "psihilfer/rhs_expr.hpp"

namespace psihilfer {

/// D^{eta,nu;Psi} y - lambda y = f(t) (constant coefficient), or
/// D^{eta,nu;Psi} y = lambda (Psi(t) - Psi(a))^{mu-1} y (variable coefficient, homogeneous),
/// with I^{1-zeta;Psi} y(a) = y_a on [a, b].
struct LinearProblem {
    PsiMap psi;
    OrderParams params;
    double a = 0.0;
    double b = 1.0;
    double y_a = 0.0;
    double lambda = 0.0;
    std::optional<double> mu;
    /// f(t); must not depend on y.
    std::optional<RhsExpr> forcing;

    void validate() const;
};

/// w = y_a E_{eta,zeta}(lambda X^eta) + X^{1-zeta} int_0^X (X-s)^{eta-1} E_{eta,eta}(lambda (X-s)^eta) f ds.
/// The power factor is integrated exactly per panel against piecewise-linear
/// f; the Mittag-Leffler factor is sampled at panel midpoints.
WeightedGridFunction solve_constant(const LinearProblem& problem, std::size_t n,
                                    Execution exec = Execution::parallel);

/// w = y_a / Gamma(zeta) E_{eta,m,l}(lambda X^{eta+mu-1}) with
/// m = 1 + (mu-1)/eta and l = (mu+zeta-2)/eta, which reproduces the product
/// c_k = prod_{j<k} Gamma(j(eta+mu-1)+mu+zeta-1) / Gamma(j(eta+mu-1)+eta+mu+zeta-1).
WeightedGridFunction solve_variable(const LinearProblem& problem, std::size_t n);

/// Kilbas-Saigo (m, l) for a given mu.
struct KilbasSaigoParams {
    double m;
    double l;
};
KilbasSaigoParams variable_coefficient_params(const OrderParams& params, double mu);

}  // namespace psihilfer
