#include "psihilfer/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "psihilfer/errors.hpp"

namespace psihilfer {

namespace {

// log(DBL_MAX) is about 709.78; leave headroom for the partial sum.
constexpr double kLogTermCeiling = 700.0;
constexpr std::size_t kConsecutiveSmall = 3;

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Drives a power series sum_k exp(log_coef(k) + k ln|z|) * sign(z)^k with the
/// shared stopping rule.
template <typename LogCoef>
SeriesResult sum_series(double z, const MLSeriesParams& policy, LogCoef&& log_coef) {
    if (!(policy.rel_tol > 0.0) || policy.max_terms == 0) {
        throw Error(ErrorKind::ParamViolation, "series policy needs rel_tol > 0 and max_terms > 0");
    }
    SeriesResult result;
    const double log_abs_z = std::log(std::abs(z));
    const bool negative = z < 0.0;

    auto term_at = [&](std::size_t k) {
        const double log_mag = log_coef(k) + static_cast<double>(k) * log_abs_z;
        if (log_mag > kLogTermCeiling) {
            throw Error(ErrorKind::OverflowGuard,
                        "series term " + std::to_string(k) + " exceeds the representable range");
        }
        const double mag = std::exp(log_mag);
        return (negative && (k % 2 == 1)) ? -mag : mag;
    };

    CompensatedSum sum;
    std::size_t small_run = 0;
    for (std::size_t k = 0; k < policy.max_terms; ++k) {
        const double term = term_at(k);
        sum.add(term);
        result.terms_used = k + 1;
        const double partial = sum.value();
        small_run = (std::abs(term) <= policy.rel_tol * std::abs(partial)) ? small_run + 1 : 0;
        if (small_run < kConsecutiveSmall) continue;

        // Tail estimate: absolute terms past k until they stop mattering.
        double tail = 0.0;
        double prev = std::abs(term);
        for (std::size_t j = k + 1; j < k + 1 + policy.max_terms; ++j) {
            const double t = std::abs(term_at(j));
            tail += t;
            if (t == 0.0 || (t <= prev && t <= 1e-17 * tail)) break;
            prev = t;
        }
        if (tail <= policy.rel_tol * std::max(1.0, std::abs(partial))) {
            result.value = partial;
            result.truncation_estimate = tail;
            result.converged = true;
            return result;
        }
    }
    result.value = sum.value();
    result.truncation_estimate = std::numeric_limits<double>::infinity();
    result.converged = false;
    return result;
}

/// E_{1,nu}(z) by the term recurrence t_k = t_{k-1} z / (k - 1 + nu) in
/// extended precision, which keeps the alternating sum for z < 0 accurate.
SeriesResult unit_order_series(double nu, double z, const MLSeriesParams& policy) {
    using Ld = long double;
    SeriesResult result;
    const Ld zl = z;
    Ld term = std::exp(-static_cast<Ld>(log_gamma(nu)));
    Ld sum = 0.0L;
    std::size_t small_run = 0;
    for (std::size_t k = 0; k < policy.max_terms; ++k) {
        if (k > 0) term *= zl / (static_cast<Ld>(k) - 1.0L + nu);
        if (!std::isfinite(static_cast<double>(term))) {
            throw Error(ErrorKind::OverflowGuard, "series term " + std::to_string(k) + " exceeds the representable range");
        }
        sum += term;
        result.terms_used = k + 1;
        small_run = (std::abs(term) <= policy.rel_tol * std::abs(sum)) ? small_run + 1 : 0;
        if (small_run < kConsecutiveSmall) continue;
        Ld tail = 0.0L;
        Ld t = std::abs(term);
        for (std::size_t j = k + 1; j < k + 1 + policy.max_terms; ++j) {
            t *= std::abs(zl) / (static_cast<Ld>(j) - 1.0L + nu);
            tail += t;
            if (t == 0.0L || t <= 1e-17L * tail) break;
        }
        if (tail <= policy.rel_tol * std::max(1.0L, std::abs(sum))) {
            result.value = static_cast<double>(sum);
            result.truncation_estimate = static_cast<double>(tail);
            result.converged = true;
            return result;
        }
    }
    result.value = static_cast<double>(sum);
    result.truncation_estimate = std::numeric_limits<double>::infinity();
    return result;
}

/// E_{eta,nu}(z) for 0 < eta < 1 and nu < 1 + eta from the real integral
/// representation (Gorenflo, Loutchko and Luchko 2002):
///   (1/(pi eta)) int_0^inf chi^{(1-nu)/eta} exp(-chi^{1/eta})
///     [chi sin(pi(1-nu)) - z sin(pi(1-nu+eta))] / (chi^2 - 2 chi z cos(pi eta) + z^2) dchi,
/// plus (1/eta) z^{(1-nu)/eta} exp(z^{1/eta}) when z > 0. Used where the
/// power series cancels (large negative z) or its terms lose digits through
/// log-gamma rounding (large positive z).
SeriesResult integral_representation(double eta, double nu, double z, const MLSeriesParams& policy) {
    const double pi = boost::math::constants::pi<double>();
    const double s1 = std::sin(pi * (1.0 - nu));
    const double s2 = std::sin(pi * (1.0 - nu + eta));
    const double c = std::cos(pi * eta);
    const double power = (1.0 - nu) / eta;
    auto kernel = [&](double chi) {
        if (chi == 0.0) return power == 0.0 ? -s2 / z : 0.0;
        const double decay = std::exp(-std::pow(chi, 1.0 / eta));
        if (decay == 0.0) return 0.0;
        return std::pow(chi, power) * decay * (chi * s1 - z * s2) / (chi * chi - 2.0 * chi * z * c + z * z);
    };
    const double tol = std::min(policy.rel_tol, 1e-14);
    const double split = std::abs(z);
    double err_near = 0.0;
    double err_far = 0.0;
    // Split at chi = |z|, where the denominator peaks when eta is close to 1;
    // tanh-sinh absorbs the chi^{(1-nu)/eta} behaviour at 0.
    boost::math::quadrature::tanh_sinh<double> finite;
    boost::math::quadrature::exp_sinh<double> half_line;
    const double near = finite.integrate(kernel, 0.0, split, tol, &err_near);
    const double far = half_line.integrate([&](double s) { return kernel(s + split); }, tol, &err_far);

    SeriesResult result;
    result.value = (near + far) / (pi * eta);
    result.truncation_estimate = (err_near + err_far) / (pi * eta);
    if (z > 0.0) {
        const double exponent = std::pow(z, 1.0 / eta);
        if (exponent > kLogTermCeiling) {
            throw Error(ErrorKind::OverflowGuard, "Mittag-Leffler value exceeds the representable range");
        }
        result.value += std::pow(z, power) * std::exp(exponent) / eta;
    }
    result.converged = result.truncation_estimate <= policy.rel_tol * std::max(1.0, std::abs(result.value));
    return result;
}

bool use_integral(double eta, double nu, double z) {
    if (!(eta < 1.0) || !(nu < 1.0 + eta)) return false;
    return z < -1.0 || (z > 0.0 && std::pow(z, 1.0 / eta) > 20.0);
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw Error(ErrorKind::DomainViolation, "log_gamma requires a finite x > 0");
    }
    static constexpr std::array<double, 14> kCoef = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
        -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
        .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
        -.261908384015814087e-4, .368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000;  // g + 1/2 with g = 607/128
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : kCoef) ser += c / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

SeriesResult mittag_leffler2(double eta, double nu, double z, const MLSeriesParams& policy) {
    if (!(eta > 0.0) || !(nu > 0.0)) {
        throw Error(ErrorKind::ParamViolation, "mittag_leffler2 requires eta > 0 and nu > 0");
    }
    if (!std::isfinite(z)) {
        throw Error(ErrorKind::OverflowGuard, "mittag_leffler2 argument is not finite");
    }
    if (z == 0.0) {
        return SeriesResult{1.0 / gamma_fn(nu), 1, 0.0, true};
    }
    if (!(policy.rel_tol > 0.0) || policy.max_terms == 0) {
        throw Error(ErrorKind::ParamViolation, "series policy needs rel_tol > 0 and max_terms > 0");
    }
    if (eta == 1.0) return unit_order_series(nu, z, policy);
    if (use_integral(eta, nu, z)) return integral_representation(eta, nu, z, policy);
    return sum_series(z, policy, [&](std::size_t k) {
        return -log_gamma(static_cast<double>(k) * eta + nu);
    });
}

double kilbas_saigo_log_coefficient(double eta, double m, double l, std::size_t k) {
    double log_c = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double base = eta * (static_cast<double>(j) * m + l);
        log_c += log_gamma(base + 1.0) - log_gamma(base + eta + 1.0);
    }
    return log_c;
}

SeriesResult kilbas_saigo(double eta, double m, double l, double z, const MLSeriesParams& policy) {
    if (!(eta > 0.0) || !(m > 0.0)) {
        throw Error(ErrorKind::ParamViolation, "kilbas_saigo requires eta > 0 and m > 0");
    }
    // Arguments grow with j because eta * m > 0, so j = 0 is the binding case.
    if (!(eta * l + 1.0 > 0.0)) {
        throw Error(ErrorKind::ParamViolation,
                    "kilbas_saigo Gamma argument eta*l + 1 = " + std::to_string(eta * l + 1.0) +
                        " is not positive");
    }
    if (!std::isfinite(z)) {
        throw Error(ErrorKind::OverflowGuard, "kilbas_saigo argument is not finite");
    }
    if (z == 0.0) {
        return SeriesResult{1.0, 1, 0.0, true};
    }
    // With m = 1 the product telescopes to c_k = Gamma(eta l + 1) / Gamma(eta (k + l) + 1),
    // so E_{eta,1,l}(z) = Gamma(eta l + 1) E_{eta, eta l + 1}(z); used where the series cancels.
    if (m == 1.0 && use_integral(eta, eta * l + 1.0, z)) {
        SeriesResult r = mittag_leffler2(eta, eta * l + 1.0, z, policy);
        const double scale = gamma_fn(eta * l + 1.0);
        r.value *= scale;
        r.truncation_estimate *= scale;
        return r;
    }
    // Coefficients are requested in increasing k by the driver, except for
    // the tail probe which restarts one past the last index; cache the running
    // log product so each step costs two log_gamma calls.
    std::size_t cached_k = 0;
    double cached_log = 0.0;
    return sum_series(z, policy, [&](std::size_t k) {
        if (k < cached_k) {
            cached_k = 0;
            cached_log = 0.0;
        }
        while (cached_k < k) {
            const double base = eta * (static_cast<double>(cached_k) * m + l);
            cached_log += log_gamma(base + 1.0) - log_gamma(base + eta + 1.0);
            ++cached_k;
        }
        return cached_log;
    });
}

double mittag_leffler2_tail(double eta, double nu, double z, std::size_t n) {
    if (!(eta > 0.0) || !(nu > 0.0)) {
        throw Error(ErrorKind::ParamViolation, "mittag_leffler2_tail requires eta > 0 and nu > 0");
    }
    if (z < 0.0) {
        throw Error(ErrorKind::ParamViolation, "mittag_leffler2_tail requires z >= 0");
    }
    if (z == 0.0) return 0.0;
    const double log_z = std::log(z);
    CompensatedSum sum;
    double prev = 0.0;
    for (std::size_t k = n + 1; k < n + 1 + 100'000; ++k) {
        const double log_mag = static_cast<double>(k) * log_z - log_gamma(static_cast<double>(k) * eta + nu);
        if (log_mag > kLogTermCeiling) {
            throw Error(ErrorKind::OverflowGuard, "Mittag-Leffler tail term exceeds the representable range");
        }
        const double term = std::exp(log_mag);
        sum.add(term);
        if (term == 0.0 || (term <= prev && term <= 1e-18 * sum.value())) break;
        prev = term;
    }
    return sum.value();
}

}  // namespace psihilfer
