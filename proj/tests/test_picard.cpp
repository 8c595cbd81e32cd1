#include <gtest/gtest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "psihilfer/errors.hpp"
#include "psihilfer/linear_forms.hpp"
#include "psihilfer/picard.hpp"

using namespace psihilfer;

namespace {

const double kE = std::exp(1.0);

CauchyProblem linear_problem(double eta, double nu, double y_a = 1.0, int kind = 0) {
    PsiMap psi = kind == 0   ? PsiMap::identity({0.0, 1.0})
                 : kind == 1 ? PsiMap::power(2.0, {0.0, 1.0})
                             : PsiMap::log({1.0, kE});
    const double a = kind == 2 ? 1.0 : 0.0;
    const double xi = kind == 2 ? kE - 1.0 : 1.0;
    return {psi, OrderParams::make(eta, nu), a, xi, y_a, RhsExpr::parse("-1*y"), 10.0};
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST(ExistenceInterval, GammaRatioExample) {
    CauchyProblem p{PsiMap::identity({0.0, 1.0}), OrderParams::make(0.5, 0.5), 0.0, 1.0, 1.0, RhsExpr::parse("1"), 1.0};
    const auto chi = existence_interval(p, 1.0);
    EXPECT_NEAR(chi.chi, 0.54710990380661915971, 1e-6);
    EXPECT_FALSE(chi.clamped);
    EXPECT_EQ(existence_interval(p, 0.0).chi, 1.0);
    p.k_box = 1e9;
    EXPECT_EQ(existence_interval(p, 1.0).chi, 1.0);
}

TEST(ExistenceInterval, ClampsAtTheDomainEnd) {
    CauchyProblem p{PsiMap::identity({0.0, 1.0}), OrderParams::make(0.5, 0.5), 0.0, 1.0, 1.0, RhsExpr::parse("1"), 1.0};
    p.k_box = 10.0;
    const auto chi = existence_interval(p, 1.0);
    EXPECT_EQ(chi.chi, 1.0);
    EXPECT_TRUE(chi.clamped);
}

TEST(ExistenceInterval, FollowsPsi) {
    // Psi = t^2 on [0, 4]: chi = sqrt(offset).
    CauchyProblem p{PsiMap::power(2.0, {0.0, 4.0}), OrderParams::make(0.5, 0.5), 0.0, 4.0, 1.0, RhsExpr::parse("1"), 1.0};
    EXPECT_NEAR(existence_interval(p, 1.0).chi, std::sqrt(0.54710990380661915971), 1e-9);
}

TEST(ProblemValidation, RejectsBadProblems) {
    CauchyProblem p{PsiMap::identity({0.0, 1.0}), OrderParams::make(0.5, 0.5), 0.0, 2.0, 1.0, RhsExpr::parse("1"), 1.0};
    EXPECT_THROW(p.validate(), Error);
    p.xi = 1.0;
    p.k_box = 0.0;
    EXPECT_THROW(p.validate(), Error);
}

TEST(PicardSolve, ZeroRhsIsAFixedPoint) {
    CauchyProblem p{PsiMap::identity({0.0, 1.0}), OrderParams::make(0.5, 0.5), 0.0, 1.0, 1.0, RhsExpr::parse("0"), 1.0};
    SolveOptions opt;
    opt.n = 512;
    const auto r = picard_solve(p, opt);
    EXPECT_TRUE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 1u);
    EXPECT_EQ(r.report.horizon, 1.0);
    EXPECT_TRUE(r.report.apriori_bounds.empty());
    for (double w : r.solution.w) EXPECT_NEAR(w, 1.0 / gamma_fn(0.75), 1e-15);
    EXPECT_LE(r.report.residual_norm, 1e-3);
}

TEST(PicardSolve, MatchesMittagLefflerClosedForm) {
    auto p = linear_problem(0.6, 0.4);
    SolveOptions opt;
    opt.n = 2048;
    opt.horizon = 1.0;
    const auto r = picard_solve(p, opt);
    ASSERT_TRUE(r.report.converged);
    EXPECT_LE(r.report.iterations, 60u);
    const auto& g = *r.solution.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double exact = mittag_leffler2(0.6, 0.76, -std::pow(g.t(i), 0.6)).value;
        ASSERT_NEAR(r.solution.w[i], exact, 5e-3) << i;
    }
    EXPECT_LE(r.report.residual_norm, 5e-2);
}

TEST(PicardSolve, IterateBound) {
    auto p = linear_problem(0.6, 0.4);
    SolveOptions opt;
    opt.n = 1024;
    opt.keep_iterates = true;
    const auto r = picard_solve(p, opt);
    const auto& g = *r.solution.grid;
    const double M = r.report.M_used;
    const double coef = M * gamma_fn(0.76) / gamma_fn(0.6 + 0.76);
    const auto& y0 = r.report.iterates.front();
    for (const auto& it : r.report.iterates) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            ASSERT_LE(std::abs(it[i] - y0[i]), coef * std::pow(g.x(i), 0.6) * 1.01 + 1e-14);
        }
    }
}

TEST(PicardSolve, AprioriBoundDominatesAndDecreases) {
    for (int kind = 0; kind < 3; ++kind) {
        auto p = linear_problem(0.6, 0.4, 1.0, kind);
        SolveOptions opt;
        opt.n = 1024;
        opt.keep_iterates = true;
        const auto r = picard_solve(p, opt);
        ASSERT_TRUE(r.report.converged);
        const auto& bounds = r.report.apriori_bounds;
        ASSERT_EQ(bounds.size(), r.report.iterations + 1);
        for (std::size_t m = 0; m < r.report.iterates.size(); ++m) {
            EXPECT_LE(distance(r.solution.w, r.report.iterates[m]), 1.1 * bounds[m]) << kind << ' ' << m;
            if (m > 0) EXPECT_LT(bounds[m], bounds[m - 1]);
        }
        EXPECT_LT(apriori_error_bound(r.report.M_used, r.report.L_used, 60, p.params, p.psi, p.a, r.report.horizon),
                  1e-12);
    }
}

TEST(PicardSolve, ContractionCascade) {
    auto p = linear_problem(0.5, 0.5);
    SolveOptions opt;
    opt.n = 1024;
    const auto r = picard_solve(p, opt);
    const double M = r.report.M_used;
    const double L = r.report.L_used;
    const double zeta = p.params.zeta();
    const double z = L * std::pow(r.report.horizon, 0.5);
    for (std::size_t m = 0; m < r.report.weighted_deltas.size(); ++m) {
        const double k = static_cast<double>(m + 1);
        const double bound =
            M * gamma_fn(zeta) / L * std::exp(k * std::log(z) - log_gamma(k * 0.5 + zeta));
        EXPECT_LE(r.report.weighted_deltas[m], 1.1 * bound) << m;
    }
}

TEST(AprioriBound, Examples) {
    const auto params = OrderParams::make(0.5, 0.5);
    const auto id = PsiMap::identity({0.0, 1.0});
    EXPECT_EQ(apriori_error_bound(0.0, 1.0, 3, params, id, 0.0, 0.5), 0.0);
    EXPECT_NEAR(apriori_error_bound(1.0, 1.0, 0, params, id, 0.0, 0.5), 2.3350388683776081154, 1e-12);
    EXPECT_NEAR(apriori_error_bound(1.0, 1.0, 3, params, id, 0.0, 0.5), 0.33000356874979146167, 1e-12);
    EXPECT_THROW(apriori_error_bound(1.0, 0.0, 3, params, id, 0.0, 0.5), Error);
    double last = apriori_error_bound(1.0, 1.0, 0, params, id, 0.0, 0.5);
    for (std::size_t n = 1; n < 40; ++n) {
        const double b = apriori_error_bound(1.0, 1.0, n, params, id, 0.0, 0.5);
        EXPECT_LT(b, last);
        last = b;
    }
}

TEST(ContinuousDependence, Examples) {
    const auto params = OrderParams::make(0.6, 0.4);
    const auto id = PsiMap::identity({0.0, 1.0});
    EXPECT_EQ(continuous_dependence_bound(1.0, 1.0, 1.1, params, id, 0.0, 1.0), 0.0);
    EXPECT_NEAR(continuous_dependence_bound(1.0, 1.1, 1.1, params, id, 0.0, 1.0), 0.63941886948610081326, 1e-12);
    EXPECT_NEAR(continuous_dependence_bound(1.0, 1.1, 1e-12, params, id, 0.0, 1.0), 0.2 / gamma_fn(0.76), 1e-10);
}

TEST(ContinuousDependence, DominatesTwoSolves) {
    for (auto [eta, nu] : {std::pair{0.6, 0.4}, std::pair{0.5, 0.0}, std::pair{0.5, 1.0}}) {
        auto p = linear_problem(eta, nu, 1.0);
        auto q = linear_problem(eta, nu, 1.1);
        SolveOptions opt;
        opt.n = 1024;
        opt.horizon = 1.0;
        opt.L_override = 1.1;
        const auto y = picard_solve(p, opt);
        const auto z = picard_solve(q, opt);
        const double gap = weighted_distance(y.solution, z.solution);
        const double bound = continuous_dependence_bound(1.0, 1.1, 1.1, p.params, p.psi, p.a, 1.0);
        EXPECT_LE(gap, 0.95 * bound) << eta << ' ' << nu;
    }
}

TEST(ResidualCheck, ConvergedBeatsUnconverged) {
    CauchyProblem p{PsiMap::identity({0.0, 1.0}), OrderParams::make(0.6, 0.4), 0.0, 1.0, 1.0, RhsExpr::parse("-5*y"),
                    10.0};
    SolveOptions opt;
    opt.n = 1024;
    opt.horizon = 1.0;
    const auto good = picard_solve(p, opt);
    ASSERT_TRUE(good.report.converged);
    opt.max_iter = 1;
    const auto bad = picard_solve(p, opt);
    EXPECT_FALSE(bad.report.converged);
    EXPECT_GT(bad.report.residual_norm, good.report.residual_norm);
    EXPECT_TRUE(std::isfinite(bad.report.residual_norm));
}

TEST(ResidualCheck, NeedsFineGrid) {
    auto p = linear_problem(0.6, 0.4);
    SolveOptions opt;
    opt.n = 128;
    const auto r = picard_solve(p, opt);
    EXPECT_TRUE(std::isnan(r.report.residual_norm));
    try {
        residual_check(p, r.solution);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::GridTooCoarse);
    }
}

TEST(PicardOperator, ConvergedSolutionIsAFixedPoint) {
    auto p = linear_problem(0.7, 0.3);
    SolveOptions opt;
    opt.n = 1024;
    opt.tol = 1e-12;
    const auto r = picard_solve(p, opt);
    ASSERT_TRUE(r.report.converged);
    const PicardOperator op(p, r.solution.grid);
    EXPECT_LE(distance(op.apply(r.solution.w), r.solution.w), 1e-12);
}

TEST(PicardSolve, UniqueFromPerturbedStart) {
    auto p = linear_problem(0.6, 0.4);
    SolveOptions opt;
    opt.n = 512;
    const auto base = picard_solve(p, opt);
    std::vector<double> start = base.solution.w;
    const auto& g = *base.solution.grid;
    for (std::size_t i = 0; i < start.size(); ++i) start[i] = 1.0 / gamma_fn(0.76) + 0.3 * std::sin(7.0 * g.x(i));
    opt.initial_iterate = start;
    const auto other = picard_solve(p, opt);
    ASSERT_TRUE(other.report.converged);
    EXPECT_LE(distance(base.solution.w, other.solution.w), 10.0 * opt.tol);
}

TEST(PicardSolve, EndpointValues) {
    SolveOptions opt;
    opt.n = 256;
    const auto caputo = picard_solve(linear_problem(0.5, 1.0, 2.0), opt);
    EXPECT_EQ(caputo.solution.zeta, 1.0);
    EXPECT_DOUBLE_EQ(caputo.solution.w[0], 2.0);
    EXPECT_TRUE(std::isfinite(caputo.solution.value(0)));
    const auto rl = picard_solve(linear_problem(0.5, 0.0, 2.0), opt);
    EXPECT_DOUBLE_EQ(rl.solution.zeta, 0.5);
    EXPECT_NEAR(rl.solution.w[0], 2.0 / gamma_fn(0.5), 1e-15);
    EXPECT_TRUE(std::isinf(rl.solution.value(0)));
}

TEST(PicardSolve, ReportsNonConvergence) {
    auto p = linear_problem(0.6, 0.4);
    SolveOptions opt;
    opt.n = 256;
    opt.max_iter = 3;
    const auto r = picard_solve(p, opt);
    EXPECT_FALSE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 3u);
    ASSERT_FALSE(r.report.warnings.empty());
    EXPECT_EQ(r.report.warnings.back().rfind("NotConverged", 0), 0u);
}

TEST(PicardSolve, WarnsOnBoxExit) {
    CauchyProblem p{PsiMap::identity({0.0, 1.0}), OrderParams::make(0.6, 0.4), 0.0, 1.0, 1.0, RhsExpr::parse("-1*y"),
                    0.01};
    SolveOptions opt;
    opt.n = 256;
    opt.horizon = 1.0;
    const auto r = picard_solve(p, opt);
    bool found = false;
    for (const auto& w : r.report.warnings) found = found || w.rfind("BoxExit", 0) == 0;
    EXPECT_TRUE(found);
    EXPECT_TRUE(r.report.converged);
}

TEST(PicardSolve, RejectsBadOptions) {
    auto p = linear_problem(0.6, 0.4);
    SolveOptions opt;
    opt.n = 8;
    EXPECT_THROW(picard_solve(p, opt), Error);
    opt.n = 64;
    opt.horizon = 2.0;
    EXPECT_THROW(picard_solve(p, opt), Error);
}

TEST(PicardSolve, SerialAndParallelAgreeBitwise) {
    auto p = linear_problem(0.6, 0.4);
    SolveOptions opt;
    opt.n = 512;
    opt.execution = Execution::serial;
    const auto a = picard_solve(p, opt);
    opt.execution = Execution::parallel;
    const auto b = picard_solve(p, opt);
    EXPECT_EQ(a.solution.w, b.solution.w);
}

TEST(MeasureConstants, SourcesAndOverrides) {
    auto p = linear_problem(0.6, 0.4);
    const auto measured = measure_constants(p, 256);
    EXPECT_NEAR(measured.L, 1.1, 1e-6);
    EXPECT_GT(measured.M, 0.0);
    EXPECT_EQ(measured.L_source, "estimated (heuristic)");
    const auto forced = measure_constants(p, 256, 2.0, 3.0);
    EXPECT_EQ(forced.L, 2.0);
    EXPECT_EQ(forced.M, 3.0);
    EXPECT_EQ(forced.M_source, "override");
}
