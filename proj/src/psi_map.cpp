#include "psihilfer/psi_map.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "psihilfer/errors.hpp"

namespace psihilfer {

namespace {

constexpr int kMonotoneSamples = 64;
constexpr double kBisectionTol = 1e-13;

double domain_slack(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

std::uint64_t next_custom_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
}

void require_domain(const Interval& domain) {
    if (!(std::isfinite(domain.lo) && std::isfinite(domain.hi)) || !(domain.lo < domain.hi)) {
        throw Error(ErrorKind::DomainViolation, "psi domain must be a nonempty finite interval");
    }
}

}  // namespace

std::string_view to_string(PsiKind kind) {
    switch (kind) {
        case PsiKind::identity: return "identity";
        case PsiKind::power: return "power";
        case PsiKind::log: return "log";
        case PsiKind::exp: return "exp";
        case PsiKind::custom: return "custom";
    }
    return "custom";
}

std::optional<PsiKind> psi_kind_from_string(std::string_view name) {
    if (name == "identity") return PsiKind::identity;
    if (name == "power") return PsiKind::power;
    if (name == "log") return PsiKind::log;
    if (name == "exp") return PsiKind::exp;
    if (name == "custom") return PsiKind::custom;
    return std::nullopt;
}

PsiMap::PsiMap(PsiKind kind, double rho, Interval domain) : kind_(kind), rho_(rho), domain_(domain) {}

PsiMap PsiMap::identity(Interval domain) {
    require_domain(domain);
    PsiMap map(PsiKind::identity, 1.0, domain);
    map.verify_monotone();
    return map;
}

PsiMap PsiMap::power(double rho, Interval domain) {
    require_domain(domain);
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw Error(ErrorKind::DomainViolation, "power map requires rho > 0");
    }
    if (domain.lo < 0.0) {
        throw Error(ErrorKind::DomainViolation, "power map requires a nonnegative domain");
    }
    PsiMap map(PsiKind::power, rho, domain);
    map.verify_monotone();
    return map;
}

PsiMap PsiMap::log(Interval domain) {
    require_domain(domain);
    if (!(domain.lo > 0.0)) {
        throw Error(ErrorKind::DomainViolation, "log map requires domain start > 0");
    }
    PsiMap map(PsiKind::log, 1.0, domain);
    map.verify_monotone();
    return map;
}

PsiMap PsiMap::exp(Interval domain) {
    require_domain(domain);
    PsiMap map(PsiKind::exp, 1.0, domain);
    map.verify_monotone();
    return map;
}

PsiMap PsiMap::custom(Fn eval, Fn deriv, std::optional<Fn> inverse, Interval domain) {
    require_domain(domain);
    if (!eval || !deriv) {
        throw Error(ErrorKind::DomainViolation, "custom map needs eval and deriv callables");
    }
    PsiMap map(PsiKind::custom, 1.0, domain);
    map.eval_ = std::move(eval);
    map.deriv_ = std::move(deriv);
    if (inverse && *inverse) map.inverse_ = std::move(inverse);
    map.custom_id_ = next_custom_id();
    map.verify_monotone();
    return map;
}

void PsiMap::verify_monotone() const {
    const double step = domain_.width() / kMonotoneSamples;
    double prev = eval(domain_.lo);
    for (int i = 1; i <= kMonotoneSamples; ++i) {
        const double t = (i == kMonotoneSamples) ? domain_.hi : domain_.lo + i * step;
        const double mid = domain_.lo + (i - 0.5) * step;
        const double value = eval(t);
        const double slope = deriv(mid);
        if (!(value > prev) || !(slope > 0.0) || !std::isfinite(value)) {
            throw Error(ErrorKind::NonMonotone,
                        "psi is not strictly increasing near t = " + std::to_string(mid));
        }
        prev = value;
    }
}

double PsiMap::eval(double t) const {
    switch (kind_) {
        case PsiKind::identity: return t;
        case PsiKind::power: return std::pow(t, rho_);
        case PsiKind::log: return std::log(t);
        case PsiKind::exp: return std::exp(t);
        case PsiKind::custom: return eval_(t);
    }
    return t;
}

double PsiMap::deriv(double t) const {
    switch (kind_) {
        case PsiKind::identity: return 1.0;
        case PsiKind::power: return rho_ * std::pow(t, rho_ - 1.0);
        case PsiKind::log: return 1.0 / t;
        case PsiKind::exp: return std::exp(t);
        case PsiKind::custom: return deriv_(t);
    }
    return 1.0;
}

double PsiMap::inverse(double u) const {
    switch (kind_) {
        case PsiKind::identity: return u;
        case PsiKind::power: return std::pow(u, 1.0 / rho_);
        case PsiKind::log: return std::exp(u);
        case PsiKind::exp: return std::log(u);
        case PsiKind::custom: break;
    }
    if (inverse_) return (*inverse_)(u);

    double lo = domain_.lo;
    double hi = domain_.hi;
    if (u <= eval(lo)) return lo;
    if (u >= eval(hi)) return hi;
    while (hi - lo > kBisectionTol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (eval(mid) < u) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

bool PsiMap::operator==(const PsiMap& other) const {
    if (kind_ != other.kind_ || domain_ != other.domain_) return false;
    if (kind_ == PsiKind::custom) return custom_id_ == other.custom_id_;
    if (kind_ == PsiKind::power) return rho_ == other.rho_;
    return true;
}

PsiMap make_psi(PsiKind kind, std::span<const double> params, Interval domain) {
    switch (kind) {
        case PsiKind::identity: return PsiMap::identity(domain);
        case PsiKind::power:
            if (params.empty()) {
                throw Error(ErrorKind::DomainViolation, "power map requires rho");
            }
            return PsiMap::power(params[0], domain);
        case PsiKind::log: return PsiMap::log(domain);
        case PsiKind::exp: return PsiMap::exp(domain);
        case PsiKind::custom: break;
    }
    throw Error(ErrorKind::DomainViolation, "custom maps are built with PsiMap::custom");
}

double psi_increment(const PsiMap& map, double a, double t) {
    const Interval& dom = map.domain();
    if (!dom.contains(a, domain_slack(a)) || !dom.contains(t, domain_slack(t)) || t < a) {
        throw Error(ErrorKind::DomainViolation, "psi_increment needs a <= t inside the domain");
    }
    if (t == a) return 0.0;
    if (map.kind() == PsiKind::identity) return t - a;
    return map.eval(t) - map.eval(a);
}

}  // namespace psihilfer
