#include "psihilfer/frac_ops.hpp"

#include <cmath>
#include <limits>

#include "psihilfer/errors.hpp"

namespace psihilfer {

namespace {

constexpr double kOrderEps = 1e-12;
constexpr std::size_t kMinDerivativePanels = 8;

void require_size(const PsiGrid& grid, std::size_t count) {
    if (count != grid.size()) {
        throw Error(ErrorKind::GridMismatch, "expected " + std::to_string(grid.size()) + " samples, got " +
                                                 std::to_string(count));
    }
}

}  // namespace

FracIntegrator FracIntegrator::plain(GridPtr grid, double beta, Execution exec) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw Error(ErrorKind::DomainViolation, "fractional integral order must be positive");
    }
    FracIntegrator op(std::move(grid), beta, IntegralMode::plain, 1.0, exec);
    const auto moments = kernels::abel_moments(beta, op.grid_->n());
    const double scale = std::pow(op.grid_->h(), beta) / gamma_fn(beta);
    op.toeplitz_ = kernels::abel_toeplitz(moments, {}, scale);
    return op;
}

FracIntegrator FracIntegrator::weighted(GridPtr grid, double beta, double zeta, Execution exec) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw Error(ErrorKind::DomainViolation, "fractional integral order must be positive");
    }
    if (!(zeta > 0.0) || !std::isfinite(zeta)) {
        throw Error(ErrorKind::DomainViolation, "weight exponent zeta must be positive");
    }
    FracIntegrator op(std::move(grid), beta, IntegralMode::weighted, zeta, exec);
    op.table_ = kernels::TriangularTable(op.grid_->n());
    kernels::build_weighted_table(exec, beta, zeta, op.grid_->h(), op.table_);
    return op;
}

std::vector<double> FracIntegrator::values(std::span<const double> samples) const {
    require_size(*grid_, samples.size());
    std::vector<double> out(samples.size());
    if (mode_ == IntegralMode::plain) {
        kernels::apply_toeplitz(exec_, toeplitz_, samples, out);
        return out;
    }
    kernels::apply_table(exec_, table_, samples, out);
    const double endpoint_power = beta_ + zeta_ - 1.0;
    if (endpoint_power > kOrderEps) {
        out[0] = 0.0;
    } else if (endpoint_power >= -kOrderEps) {
        out[0] = std::exp(log_gamma(zeta_) - log_gamma(beta_ + zeta_)) * samples[0];
    } else {
        out[0] = samples[0] == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), samples[0]);
    }
    return out;
}

std::vector<double> FracIntegrator::weighted_values(std::span<const double> w) const {
    if (mode_ != IntegralMode::weighted) {
        throw Error(ErrorKind::GridMismatch, "weighted output requested from a plain integrator");
    }
    require_size(*grid_, w.size());
    std::vector<double> out(w.size());
    kernels::apply_table(exec_, table_, w, out);
    out[0] = 0.0;
    if (zeta_ != 1.0) {
        for (std::size_t i = 1; i < out.size(); ++i) out[i] *= std::pow(grid_->x(i), 1.0 - zeta_);
    }
    return out;
}

std::vector<double> frac_integral(GridPtr grid, double eta, std::span<const double> h, Execution exec) {
    require_size(*grid, h.size());
    return FracIntegrator::plain(std::move(grid), eta, exec).values(h);
}

WeightedGridFunction frac_integral(const WeightedGridFunction& h, double eta, Execution exec) {
    const auto op = FracIntegrator::weighted(h.grid, eta, h.zeta, exec);
    return WeightedGridFunction{h.grid, h.zeta, op.weighted_values(h.w)};
}

double monomial_oracle(const PsiMap& psi, double eta, double delta, double a, double t) {
    if (!(eta > 0.0) || !(delta > 0.0)) {
        throw Error(ErrorKind::DomainViolation, "monomial_oracle needs eta > 0 and delta > 0");
    }
    const double x = psi_increment(psi, a, t);
    const double power = eta + delta - 1.0;
    const double ratio = std::exp(log_gamma(delta) - log_gamma(eta + delta));
    if (x == 0.0) {
        if (power > 0.0) return 0.0;
        if (power == 0.0) return ratio;
        return std::numeric_limits<double>::infinity();
    }
    return ratio * std::pow(x, power);
}

std::vector<double> hilfer_derivative(const OrderParams& params, const WeightedGridFunction& y, Execution exec) {
    const PsiGrid& grid = *y.grid;
    require_size(grid, y.w.size());
    const std::size_t n = grid.n();
    if (n < kMinDerivativePanels) {
        throw Error(ErrorKind::GridTooCoarse, "hilfer_derivative needs at least 8 panels");
    }
    const double h = grid.h();

    // v = I^{(1-nu)(1-eta)} y on all nodes, finite at t = a.
    std::vector<double> v;
    const double inner = params.inner_order();
    if (inner <= kOrderEps) {
        if (y.zeta != 1.0) {
            throw Error(ErrorKind::DomainViolation,
                        "with a zero-order inner integral the input must be unweighted (zeta = 1)");
        }
        v = y.w;
    } else {
        v = FracIntegrator::weighted(y.grid, inner, y.zeta, exec).values(y.w);
        if (!std::isfinite(v[0])) {
            throw Error(ErrorKind::DomainViolation, "inner integral is unbounded at t = a for this weight");
        }
    }

    std::vector<double> out(n - 1);
    const double outer = params.outer_order();
    if (outer <= kOrderEps) {
        const double inv_2h = 1.0 / (2.0 * h);
        out[0] = (-3.0 * v[1] + 4.0 * v[2] - v[3]) * inv_2h;
        for (std::size_t i = 2; i + 1 < n; ++i) out[i - 1] = (v[i + 1] - v[i - 1]) * inv_2h;
        out[n - 2] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) * inv_2h;
        return out;
    }

    // Outer integral of the panelwise derivative (v_{j+1} - v_j)/h:
    //   D_i = h^{beta-1}/Gamma(beta+1) sum_{k=1}^{i} b_k (v_{i-k+1} - v_{i-k}),
    //   b_k = k^beta - (k-1)^beta, regrouped by node for the Toeplitz kernel.
    kernels::ToeplitzWeights weights;
    weights.interior.assign(n, 0.0);
    weights.boundary.assign(n + 1, 0.0);
    const double scale = std::pow(h, outer - 1.0) / gamma_fn(outer + 1.0);
    weights.interior[0] = scale;
    for (std::size_t k = 1; k < n; ++k) weights.interior[k] = scale * kernels::second_difference_power(outer, k);
    for (std::size_t i = 1; i <= n; ++i) weights.boundary[i] = -scale * kernels::first_difference_power(outer, i);

    std::vector<double> full(n + 1);
    kernels::apply_toeplitz(exec, weights, v, full);
    for (std::size_t i = 1; i < n; ++i) out[i - 1] = full[i];
    return out;
}

double gronwall_bound(const PsiMap& psi, double eta, double a, double t, double v_bound, double g_bound,
                      const MLSeriesParams& policy) {
    if (!(v_bound >= 0.0) || !(g_bound >= 0.0)) {
        throw Error(ErrorKind::DomainViolation, "gronwall_bound needs nonnegative v and g");
    }
    if (v_bound == 0.0) return 0.0;
    const double x = psi_increment(psi, a, t);
    const double z = g_bound * gamma_fn(eta) * std::pow(x, eta);
    return v_bound * mittag_leffler2(eta, 1.0, z, policy).value;
}

}  // namespace psihilfer
