#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "psihilfer/errors.hpp"
#include "psihilfer/psi_map.hpp"

using namespace psihilfer;

namespace {

const double kE = std::exp(1.0);

std::vector<PsiMap> registered_maps() {
    return {PsiMap::identity({-1.0, 2.0}), PsiMap::power(2.0, {0.0, 1.0}), PsiMap::power(0.5, {0.0, 3.0}),
            PsiMap::log({1.0, kE}), PsiMap::exp({0.0, 2.0})};
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no psihilfer::Error thrown";
    return ErrorKind::Io;
}

}  // namespace

TEST(PsiMap, IdentityExample) {
    const auto psi = make_psi(PsiKind::identity, {}, {0.0, 1.0});
    EXPECT_DOUBLE_EQ(psi.eval(0.5), 0.5);
    EXPECT_DOUBLE_EQ(psi.deriv(0.5), 1.0);
}

TEST(PsiMap, PowerExample) {
    const double rho[] = {2.0};
    const auto psi = make_psi(PsiKind::power, rho, {0.0, 1.0});
    EXPECT_DOUBLE_EQ(psi.eval(0.5), 0.25);
    EXPECT_NEAR(psi.inverse(0.25), 0.5, 1e-15);
}

TEST(PsiMap, LogExample) {
    const auto psi = make_psi(PsiKind::log, {}, {1.0, kE});
    EXPECT_NEAR(psi.eval(kE), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(psi.deriv(1.0), 1.0);
}

TEST(PsiMap, IncrementExamples) {
    EXPECT_DOUBLE_EQ(psi_increment(PsiMap::identity({0.0, 1.0}), 0.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(psi_increment(PsiMap::power(2.0, {0.0, 1.0}), 0.0, 0.5), 0.25);
    EXPECT_NEAR(psi_increment(PsiMap::log({1.0, kE}), 1.0, kE), 1.0, 1e-15);
}

TEST(PsiMap, IncrementIsExactlyZeroAtA) {
    for (const auto& psi : registered_maps()) {
        const double a = psi.domain().lo + 0.3 * psi.domain().width();
        EXPECT_EQ(psi_increment(psi, a, a), 0.0);
    }
}

TEST(PsiMap, IncrementIsMonotone) {
    std::mt19937_64 rng(11);
    for (const auto& psi : registered_maps()) {
        std::uniform_real_distribution<double> u(psi.domain().lo, psi.domain().hi);
        const double a = psi.domain().lo;
        for (int k = 0; k < 500; ++k) {
            double s = u(rng);
            double t = u(rng);
            if (s > t) std::swap(s, t);
            EXPECT_LE(psi_increment(psi, a, s), psi_increment(psi, a, t));
        }
    }
}

TEST(PsiMap, InverseRoundTrip) {
    std::mt19937_64 rng(5);
    for (const auto& psi : registered_maps()) {
        std::uniform_real_distribution<double> u(psi.domain().lo, psi.domain().hi);
        for (int k = 0; k < 1000; ++k) {
            const double t = u(rng);
            EXPECT_LE(std::abs(psi.inverse(psi.eval(t)) - t), 1e-12 * std::max(1.0, std::abs(t))) << to_string(psi.kind());
        }
    }
}

TEST(PsiMap, DerivativeMatchesCentralDifference) {
    const double h = 1e-5;
    for (const auto& psi : registered_maps()) {
        const Interval d = psi.domain();
        for (int k = 1; k < 20; ++k) {
            const double t = d.lo + d.width() * k / 20.0;
            const double fd = (psi.eval(t + h) - psi.eval(t - h)) / (2.0 * h);
            // C h^2 with C covering the third derivatives here, plus rounding of the quotient.
            EXPECT_NEAR(psi.deriv(t), fd, 50.0 * h * h + 1e-9) << to_string(psi.kind()) << " t=" << t;
        }
    }
}

TEST(PsiMap, CustomWithoutInverseUsesBisection) {
    const auto psi = PsiMap::custom([](double t) { return t + t * t * t; }, [](double t) { return 1.0 + 3.0 * t * t; },
                                    std::nullopt, {0.0, 2.0});
    for (double t : {0.0, 0.1, 0.77, 1.5, 2.0}) EXPECT_NEAR(psi.inverse(psi.eval(t)), t, 1e-12);
}

TEST(PsiMap, RejectsNonMonotoneCustom) {
    EXPECT_EQ(kind_of([] {
                  PsiMap::custom([](double t) { return std::sin(t); }, [](double t) { return std::cos(t); },
                                 std::nullopt, {0.0, 4.0});
              }),
              ErrorKind::NonMonotone);
}

TEST(PsiMap, LogNeedsPositiveStart) {
    EXPECT_EQ(kind_of([] { make_psi(PsiKind::log, {}, {0.0, 1.0}); }), ErrorKind::DomainViolation);
    EXPECT_EQ(kind_of([] { make_psi(PsiKind::log, {}, {-1.0, 1.0}); }), ErrorKind::DomainViolation);
}

TEST(PsiMap, PowerNeedsPositiveRho) {
    const double rho[] = {-1.0};
    EXPECT_EQ(kind_of([&] { make_psi(PsiKind::power, rho, {0.0, 1.0}); }), ErrorKind::DomainViolation);
}

TEST(PsiMap, IncrementOutsideDomain) {
    const auto psi = PsiMap::identity({0.0, 1.0});
    EXPECT_EQ(kind_of([&] { psi_increment(psi, 0.0, 1.5); }), ErrorKind::DomainViolation);
    EXPECT_EQ(kind_of([&] { psi_increment(psi, 0.6, 0.5); }), ErrorKind::DomainViolation);
}

TEST(PsiMap, KindNames) {
    EXPECT_EQ(psi_kind_from_string("power"), PsiKind::power);
    EXPECT_FALSE(psi_kind_from_string("cubic").has_value());
}
