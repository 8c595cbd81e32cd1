#pragma once

#include <span>
#include <vector>

#include "psihilfer/grid.hpp"
#include "psihilfer/kernels.hpp"
#include "psihilfer/special_functions.hpp"

namespace psihilfer {

using kernels::Execution;

enum class IntegralMode { plain, weighted };

/// Psi-Riemann-Liouville integral of order beta on a fixed Psi-uniform grid.
///
/// In u = Psi(t) the operator is (1/Gamma(beta)) int_0^{X} (X - s)^{beta-1} g(s) ds
/// with X = Psi(t) - Psi(a). The smooth factor is interpolated piecewise
/// linearly and the kernel is integrated exactly against every linear piece.
///
/// plain mode: the input is h(t_i) itself and the Abel weights are Toeplitz,
/// O(n) storage.
/// weighted mode: the input is w_i with h = (Psi - Psi(a))^{zeta-1} w, and
/// the endpoint factor s^{zeta-1} is part of the exact panel weights, so h is
/// never sampled at t = a. Weights form an O(n^2) triangular table that is
/// built once and reused.
class FracIntegrator {
public:
    static FracIntegrator plain(GridPtr grid, double beta, Execution exec = Execution::parallel);
    static FracIntegrator weighted(GridPtr grid, double beta, double zeta, Execution exec = Execution::parallel);

    const GridPtr& grid() const { return grid_; }
    double order() const { return beta_; }
    IntegralMode mode() const { return mode_; }
    double zeta() const { return zeta_; }

    /// Plain values I h(t_i) for i = 0..n. In weighted mode node 0 holds the
    /// limit: 0, Gamma(zeta)/Gamma(beta+zeta) w_0 or +-inf depending on the
    /// sign of beta + zeta - 1.
    std::vector<double> values(std::span<const double> samples) const;

    /// Weighted output (Psi - Psi(a))^{1-zeta} I h, with exponent zeta; node 0 is 0.
    /// Only valid in weighted mode.
    std::vector<double> weighted_values(std::span<const double> w) const;

private:
    FracIntegrator(GridPtr grid, double beta, IntegralMode mode, double zeta, Execution exec)
        : grid_(std::move(grid)), beta_(beta), mode_(mode), zeta_(zeta), exec_(exec) {}

    GridPtr grid_;
    double beta_;
    IntegralMode mode_;
    double zeta_;
    Execution exec_;
    kernels::ToeplitzWeights toeplitz_;
    kernels::TriangularTable table_;
};

/// Plain-mode integral of samples h(t_i).
std::vector<double> frac_integral(GridPtr grid, double eta, std::span<const double> h,
                                  Execution exec = Execution::parallel);

/// Weighted-mode integral; the result carries the same exponent zeta.
WeightedGridFunction frac_integral(const WeightedGridFunction& h, double eta,
                                   Execution exec = Execution::parallel);

/// Closed form of I^{eta;Psi} (Psi(.) - Psi(a))^{delta-1} at t:
/// Gamma(delta)/Gamma(eta+delta) (Psi(t) - Psi(a))^{eta+delta-1}.
double monomial_oracle(const PsiMap& psi, double eta, double delta, double a, double t);

/// Psi-Hilfer derivative of order eta in (0,1] and type nu of y, at the
/// interior nodes t_1..t_{n-1}.
///
/// The inner integral of order (1-nu)(1-eta) is applied in weighted mode.
/// For nu = 0 the result is d/du of it, by central differences with
/// second-order one-sided stencils at t_1 and t_{n-1}. For nu > 0 the outer
/// integral of order nu(1-eta) is taken of the piecewise-linear derivative
/// panel by panel, which never evaluates the derivative at t = a.
std::vector<double> hilfer_derivative(const OrderParams& params, const WeightedGridFunction& y,
                                      Execution exec = Execution::parallel);

/// v * E_eta(g Gamma(eta) (Psi(t) - Psi(a))^eta).
double gronwall_bound(const PsiMap& psi, double eta, double a, double t, double v_bound, double g_bound,
                      const MLSeriesParams& policy = {});

}  // namespace psihilfer
