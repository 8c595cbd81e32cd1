#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "psihilfer/config.hpp"

using namespace psihilfer;

namespace {

const char* kMinimal = R"({
  "psi": {"kind": "identity", "domain": [0, 1]},
  "eta": 0.5, "nu": 0.5, "a": 0, "xi": 1, "y_a": 1,
  "rhs": "-1*y"
})";

std::vector<std::string> violations_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
        return e.violations();
    }
    ADD_FAILURE() << "config accepted: " << text;
    return {};
}

bool contains(const std::vector<std::string>& v, const std::string& needle) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST(Config, MinimalValid) {
    const auto cfg = parse_config(kMinimal);
    EXPECT_DOUBLE_EQ(cfg.zeta(), 0.75);
    EXPECT_EQ(cfg.n, 1024u);
    EXPECT_EQ(cfg.tol, 1e-10);
    EXPECT_EQ(cfg.max_iter, 200u);
    EXPECT_EQ(cfg.k_box, 1.0);
    EXPECT_EQ(cfg.output_path, "solution.csv");
    const auto p = cfg.cauchy_problem();
    EXPECT_EQ(p.rhs.eval(0.0, 2.0), -2.0);
    EXPECT_EQ(p.psi.kind(), PsiKind::identity);
    const auto lp = cfg.linear_problem();
    EXPECT_EQ(lp.b, 1.0);
}

TEST(Config, AllFields) {
    const auto cfg = parse_config(R"json({
      "psi": {"kind": "power", "rho": 2, "domain": [0, 2]},
      "eta": 0.6, "nu": 0.4, "a": 0, "xi": 1.5, "y_a": 2, "rhs": "t - y",
      "k_box": 3, "n": 512, "tol": 1e-9, "max_iter": 50, "L_override": 1.5, "M_override": 4,
      "horizon": 0.5, "lambda": -1, "forcing": "sin(t)", "output_path": "out.csv"
    })json");
    EXPECT_EQ(cfg.psi_kind, PsiKind::power);
    EXPECT_EQ(*cfg.rho, 2.0);
    EXPECT_EQ(cfg.n, 512u);
    const auto opt = cfg.solve_options();
    EXPECT_EQ(opt.max_iter, 50u);
    EXPECT_EQ(*opt.L_override, 1.5);
    EXPECT_EQ(*opt.M_override, 4.0);
    EXPECT_EQ(*opt.horizon, 0.5);
    EXPECT_TRUE(cfg.linear_problem().forcing.has_value());
    EXPECT_EQ(cfg.output_path, "out.csv");
}

TEST(Config, OrderRanges) {
    EXPECT_TRUE(contains(violations_of(R"({"psi": {"kind": "identity", "domain": [0, 1]},
        "eta": 1.2, "nu": 0.5, "a": 0, "xi": 1, "y_a": 1})"), "eta must lie in (0,1)"));
    EXPECT_TRUE(contains(violations_of(R"({"psi": {"kind": "identity", "domain": [0, 1]},
        "eta": 0.5, "nu": -0.1, "a": 0, "xi": 1, "y_a": 1})"), "nu must lie in [0,1]"));
}

TEST(Config, MuFloor) {
    const auto v = violations_of(R"({"psi": {"kind": "identity", "domain": [0, 1]},
        "eta": 0.5, "nu": 0.5, "a": 0, "xi": 1, "y_a": 1, "mu": 0.3})");
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0], "mu must exceed 1-eta = 0.5");
}

TEST(Config, ReportsEveryViolation) {
    const auto v = violations_of(R"({"psi": {"kind": "cubic", "domain": [1, 0]},
        "eta": 0, "nu": 2, "a": 0, "xi": -1, "n": 4, "rhs": "y +", "forcing": "y", "colour": 1})");
    EXPECT_TRUE(contains(v, "psi.kind must be one of identity, power, log, exp"));
    EXPECT_TRUE(contains(v, "psi.domain must satisfy lo < hi"));
    EXPECT_TRUE(contains(v, "eta must lie in (0,1)"));
    EXPECT_TRUE(contains(v, "nu must lie in [0,1]"));
    EXPECT_TRUE(contains(v, "xi must be positive"));
    EXPECT_TRUE(contains(v, "y_a is required"));
    EXPECT_TRUE(contains(v, "n must be at least 16"));
    EXPECT_TRUE(contains(v, "rhs: SyntaxError"));
    EXPECT_TRUE(contains(v, "forcing must depend on t only"));
    EXPECT_TRUE(contains(v, "unknown key 'colour'"));
    EXPECT_GE(v.size(), 10u);
}

TEST(Config, DomainChecks) {
    EXPECT_TRUE(contains(violations_of(R"({"psi": {"kind": "identity", "domain": [0, 1]},
        "eta": 0.5, "nu": 0.5, "a": 0, "xi": 2, "y_a": 1})"), "a + xi must not exceed"));
    EXPECT_TRUE(contains(violations_of(R"({"psi": {"kind": "log", "domain": [0, 1]},
        "eta": 0.5, "nu": 0.5, "a": 0, "xi": 1, "y_a": 1})"), "must start above 0"));
    EXPECT_TRUE(contains(violations_of(R"({"psi": {"kind": "power", "domain": [0, 1]},
        "eta": 0.5, "nu": 0.5, "a": 0, "xi": 1, "y_a": 1})"), "psi.rho is required"));
}

TEST(Config, MissingRhsOnlyMattersForSolve) {
    const auto cfg = parse_config(R"({"psi": {"kind": "identity", "domain": [0, 1]},
        "eta": 0.5, "nu": 0.5, "a": 0, "xi": 1, "y_a": 1, "lambda": -1})");
    EXPECT_NO_THROW(cfg.linear_problem());
    EXPECT_THROW(cfg.cauchy_problem(), ConfigError);
}

TEST(Config, MalformedJson) {
    for (const char* text : {"{", "[1, 2]", "not json"}) {
        try {
            parse_config(text);
            FAIL() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::ParseError) << text;
        }
    }
}

TEST(Config, LoadFromDisk) {
    try {
        load_config("/nonexistent/dir/config.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
    }
    const std::string path = ::testing::TempDir() + "psihilfer_config_test.json";
    {
        std::ofstream out(path);
        out << kMinimal;
    }
    EXPECT_DOUBLE_EQ(load_config(path).zeta(), 0.75);
    std::remove(path.c_str());
}
