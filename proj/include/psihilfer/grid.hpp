#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "psihilfer/psi_map.hpp"

namespace psihilfer {

/// Order triple of a Psi-Hilfer derivative: order eta, type nu and the
/// weight exponent zeta = eta + nu (1 - eta).
///
/// eta = 1 is accepted as the classical integer-order limit.
class OrderParams {
public:
    static OrderParams make(double eta, double nu);

    double eta() const { return eta_; }
    double nu() const { return nu_; }
    double zeta() const { return zeta_; }

    /// Order of the inner integral, (1 - nu)(1 - eta) = 1 - zeta.
    double inner_order() const { return (1.0 - nu_) * (1.0 - eta_); }
    /// Order of the outer integral, nu (1 - eta).
    double outer_order() const { return nu_ * (1.0 - eta_); }

private:
    OrderParams(double eta, double nu, double zeta) : eta_(eta), nu_(nu), zeta_(zeta) {}
    double eta_;
    double nu_;
    double zeta_;
};

/// Grid on [a, b] that is uniform in u = Psi(t): Psi(t_i) = Psi(a) + i h.
class PsiGrid {
public:
    static std::shared_ptr<const PsiGrid> make(PsiMap psi, double a, double b, std::size_t n);

    const PsiMap& psi() const { return psi_; }
    double a() const { return a_; }
    double b() const { return b_; }
    /// Number of panels; there are n + 1 nodes.
    std::size_t n() const { return n_; }
    std::size_t size() const { return n_ + 1; }
    /// Spacing in u.
    double h() const { return h_; }

    double t(std::size_t i) const { return nodes_[i]; }
    /// Psi(t_i) - Psi(a) = i h.
    double x(std::size_t i) const { return static_cast<double>(i) * h_; }
    std::span<const double> nodes() const { return nodes_; }

    bool same_as(const PsiGrid& other) const;

private:
    PsiGrid(PsiMap psi, double a, double b, std::size_t n);

    PsiMap psi_;
    double a_;
    double b_;
    std::size_t n_;
    double h_;
    std::vector<double> nodes_;
};

using GridPtr = std::shared_ptr<const PsiGrid>;

/// Samples of w(t) = (Psi(t) - Psi(a))^{1 - zeta} y(t) on a PsiGrid; w[0] is
/// the limiting weighted value at t = a.
struct WeightedGridFunction {
    GridPtr grid;
    double zeta = 1.0;
    std::vector<double> w;

    /// y(t_i) = w_i (Psi(t_i) - Psi(a))^{zeta - 1}; index 0 is +-inf (or NaN
    /// when w_0 = 0) whenever zeta < 1.
    double value(std::size_t i) const;
    std::vector<double> values() const;

    /// Builds the weighted representation of plain samples y_i; w_0 is taken
    /// by quadratic extrapolation from w_1, w_2, w_3 unless zeta == 1.
    static WeightedGridFunction from_values(GridPtr grid, double zeta, std::span<const double> y);
};

/// max_i |w_i|.
double weighted_norm(const WeightedGridFunction& f);
double weighted_norm(std::span<const double> w);

/// Weighted sup-norm distance; grids and exponents must agree.
double weighted_distance(const WeightedGridFunction& lhs, const WeightedGridFunction& rhs);

/// Quadratic extrapolation of a sequence to index 0 from indices 1, 2, 3.
inline double extrapolate_to_origin(double v1, double v2, double v3) { return 3.0 * v1 - 3.0 * v2 + v3; }

}  // namespace psihilfer
