#pragma once

#include <cstddef>

namespace psihilfer {

/// Truncation policy for the Mittag-Leffler series.
struct MLSeriesParams {
    double rel_tol = 1e-12;
    std::size_t max_terms = 10'000;
};

struct SeriesResult {
    double value = 0.0;
    std::size_t terms_used = 0;
    /// Sum of |term| over the omitted tail, accumulated until it stops changing.
    double truncation_estimate = 0.0;
    bool converged = false;
};

/// ln Gamma(x) for x > 0 (Lanczos, g = 607/128, 15 terms).
double log_gamma(double x);

/// Gamma(x) for x > 0 via exp(log_gamma(x)).
double gamma_fn(double x);

/// Two-parameter Mittag-Leffler function E_{eta,nu}(z) = sum_k z^k / Gamma(k eta + nu).
///
/// Terms are formed as sign * exp(k ln|z| - ln Gamma(k eta + nu)) so that no
/// Gamma value is ever materialized. Summation stops once three consecutive
/// terms are below rel_tol * |partial sum| and the tail estimate also meets
/// rel_tol * max(1, |value|). Hitting max_terms returns converged = false.
///
/// Throws ParamViolation for eta <= 0 or nu <= 0 and OverflowGuard when the
/// largest term is not representable.
SeriesResult mittag_leffler2(double eta, double nu, double z, const MLSeriesParams& policy = {});

/// Kilbas-Saigo function E_{eta,m,l}(z) = sum_k c_k z^k with c_0 = 1 and
/// c_k = prod_{j<k} Gamma(eta(jm+l)+1) / Gamma(eta(jm+l+1)+1).
///
/// Throws ParamViolation when a Gamma argument is nonpositive.
SeriesResult kilbas_saigo(double eta, double m, double l, double z, const MLSeriesParams& policy = {});

/// ln c_k of the Kilbas-Saigo series, accumulated incrementally.
double kilbas_saigo_log_coefficient(double eta, double m, double l, std::size_t k);

/// sum_{k > n} z^k / Gamma(k eta + nu) for z >= 0, summed term by term so the
/// result stays positive and strictly decreasing in n while terms are representable.
double mittag_leffler2_tail(double eta, double nu, double z, std::size_t n);

}  // namespace psihilfer
