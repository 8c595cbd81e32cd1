#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

namespace psihilfer {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double t, double slack = 0.0) const { return t >= lo - slack && t <= hi + slack; }
    double width() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

enum class PsiKind { identity, power, log, exp, custom };

std::string_view to_string(PsiKind kind);
std::optional<PsiKind> psi_kind_from_string(std::string_view name);

/// Strictly increasing C^1 transform Psi on a closed interval, with its
/// derivative and inverse. Immutable after construction.
///
/// Construction spot-checks monotonicity on 64 subintervals: Psi must be
/// strictly increasing across the 65 breakpoints and Psi' must be positive
/// at every subinterval midpoint. Psi' may vanish at an endpoint (t^rho with
/// rho > 1 at t = 0).
class PsiMap {
public:
    using Fn = std::function<double(double)>;

    static PsiMap identity(Interval domain);
    static PsiMap power(double rho, Interval domain);
    static PsiMap log(Interval domain);
    static PsiMap exp(Interval domain);
    /// Without an inverse, Psi^{-1} is found by bisection to 1e-13 absolute.
    static PsiMap custom(Fn eval, Fn deriv, std::optional<Fn> inverse, Interval domain);

    double eval(double t) const;
    double deriv(double t) const;
    double inverse(double u) const;
    double operator()(double t) const { return eval(t); }

    PsiKind kind() const { return kind_; }
    double rho() const { return rho_; }
    const Interval& domain() const { return domain_; }

    /// Two maps are equal when they are the same built-in transform on the
    /// same domain; custom maps compare equal only to copies of themselves.
    bool operator==(const PsiMap& other) const;

private:
    PsiMap(PsiKind kind, double rho, Interval domain);
    void verify_monotone() const;

    PsiKind kind_;
    double rho_ = 1.0;
    Interval domain_;
    Fn eval_;
    Fn deriv_;
    std::optional<Fn> inverse_;
    std::uint64_t custom_id_ = 0;
};

/// Builds one of the registered maps. `params` holds rho for `power` and is
/// ignored otherwise; `custom` maps must be built with PsiMap::custom.
PsiMap make_psi(PsiKind kind, std::span<const double> params, Interval domain);

/// Psi(t) - Psi(a) for a <= t in the domain; exactly 0 when t == a.
double psi_increment(const PsiMap& map, double a, double t);

}  // namespace psihilfer
