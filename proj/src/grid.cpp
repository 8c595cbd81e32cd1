#include "psihilfer/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "psihilfer/errors.hpp"

namespace psihilfer {

OrderParams OrderParams::make(double eta, double nu) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw Error(ErrorKind::ParamViolation, "eta must lie in (0,1]");
    }
    if (!(nu >= 0.0 && nu <= 1.0)) {
        throw Error(ErrorKind::ParamViolation, "nu must lie in [0,1]");
    }
    double zeta = eta + nu * (1.0 - eta);
    // Keep the end cases exact so that zeta == 1 tests are reliable.
    if (nu == 0.0) zeta = eta;
    if (nu == 1.0) zeta = 1.0;
    return OrderParams(eta, nu, zeta);
}

PsiGrid::PsiGrid(PsiMap psi, double a, double b, std::size_t n)
    : psi_(std::move(psi)), a_(a), b_(b), n_(n), h_(0.0), nodes_(n + 1) {
    const double ua = psi_.eval(a);
    const double ub = psi_.eval(b);
    h_ = (ub - ua) / static_cast<double>(n);
    nodes_.front() = a;
    nodes_.back() = b;
    for (std::size_t i = 1; i < n; ++i) {
        nodes_[i] = psi_.inverse(ua + static_cast<double>(i) * h_);
    }
}

std::shared_ptr<const PsiGrid> PsiGrid::make(PsiMap psi, double a, double b, std::size_t n) {
    if (n == 0) {
        throw Error(ErrorKind::GridTooCoarse, "grid needs at least one panel");
    }
    const Interval& dom = psi.domain();
    const double slack = 1e-12 * std::max(1.0, std::abs(b));
    if (!(a < b) || !dom.contains(a, slack) || !dom.contains(b, slack)) {
        throw Error(ErrorKind::DomainViolation, "grid interval [" + std::to_string(a) + ", " +
                                                    std::to_string(b) + "] is not inside the psi domain");
    }
    auto grid = std::shared_ptr<const PsiGrid>(new PsiGrid(std::move(psi), a, b, n));
    for (std::size_t i = 1; i < grid->size(); ++i) {
        if (!(grid->t(i) > grid->t(i - 1))) {
            throw Error(ErrorKind::NonMonotone, "grid nodes are not strictly increasing");
        }
    }
    return grid;
}

bool PsiGrid::same_as(const PsiGrid& other) const {
    return this == &other || (psi_ == other.psi_ && a_ == other.a_ && b_ == other.b_ && n_ == other.n_);
}

double WeightedGridFunction::value(std::size_t i) const {
    if (zeta == 1.0) return w[i];
    if (i == 0) {
        if (w[0] == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return std::copysign(std::numeric_limits<double>::infinity(), w[0]);
    }
    return w[i] * std::pow(grid->x(i), zeta - 1.0);
}

std::vector<double> WeightedGridFunction::values() const {
    std::vector<double> y(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) y[i] = value(i);
    return y;
}

WeightedGridFunction WeightedGridFunction::from_values(GridPtr grid, double zeta, std::span<const double> y) {
    if (y.size() != grid->size()) {
        throw Error(ErrorKind::GridMismatch, "sample count does not match the grid");
    }
    WeightedGridFunction f{grid, zeta, std::vector<double>(y.size())};
    if (zeta == 1.0) {
        std::copy(y.begin(), y.end(), f.w.begin());
        return f;
    }
    for (std::size_t i = 1; i < y.size(); ++i) {
        f.w[i] = std::pow(grid->x(i), 1.0 - zeta) * y[i];
    }
    f.w[0] = (y.size() >= 4) ? extrapolate_to_origin(f.w[1], f.w[2], f.w[3]) : f.w[1];
    return f;
}

double weighted_norm(std::span<const double> w) {
    double norm = 0.0;
    for (double v : w) norm = std::max(norm, std::abs(v));
    return norm;
}

double weighted_norm(const WeightedGridFunction& f) { return weighted_norm(f.w); }

double weighted_distance(const WeightedGridFunction& lhs, const WeightedGridFunction& rhs) {
    if (!lhs.grid->same_as(*rhs.grid) || lhs.zeta != rhs.zeta || lhs.w.size() != rhs.w.size()) {
        throw Error(ErrorKind::GridMismatch, "weighted functions live on different grids");
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < lhs.w.size(); ++i) norm = std::max(norm, std::abs(lhs.w[i] - rhs.w[i]));
    return norm;
}

}  // namespace psihilfer
