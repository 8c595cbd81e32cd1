#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "psihilfer/cli.hpp"

namespace fs = std::filesystem;
using psihilfer::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

int shell(const std::string& command) {
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::path(::testing::TempDir()) /
               ("psihilfer_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    fs::path dir_;
};

const char* kLinearConfig = R"({
  "psi": {"kind": "identity", "domain": [0, 1]},
  "eta": 0.6, "nu": 0.4, "a": 0, "xi": 1, "y_a": 1,
  "rhs": "-1*y", "lambda": -1, "k_box": 10, "n": 1024, "horizon": 1
})";

std::vector<std::vector<double>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream s(line);
        std::string cell;
        while (std::getline(s, cell, ',')) row.push_back(cell.empty() ? NAN : std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST(CliFormat, SeventeenDigits) {
    EXPECT_EQ(psihilfer::cli::format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(psihilfer::cli::format_number(2.0), "2");
    EXPECT_EQ(psihilfer::cli::format_number(1e-30), "1.0000000000000001e-30");
}

TEST(CliFormat, ExitCodes) {
    using psihilfer::ErrorKind;
    EXPECT_EQ(psihilfer::cli::exit_code_for(ErrorKind::NotConverged), 3);
    EXPECT_EQ(psihilfer::cli::exit_code_for(ErrorKind::OverflowGuard), 3);
    EXPECT_EQ(psihilfer::cli::exit_code_for(ErrorKind::Io), 4);
    EXPECT_EQ(psihilfer::cli::exit_code_for(ErrorKind::SyntaxError), 2);
    EXPECT_EQ(psihilfer::cli::exit_code_for(ErrorKind::ValidationError), 2);
}

TEST_F(CliTest, MittagLeffler) {
    auto r = call({"ml", "--eta", "1", "--nu", "1", "--z", "1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("2.71828182845904", 0), 0u) << r.out;
    r = call({"ml", "--family", "kilbas-saigo", "--eta", "0.5", "--m", "1.5", "--l", "0.2", "--z", "0.7"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NEAR(std::stod(r.out), 2.454881240196060086, 1e-13);
    r = call({"ml", "--eta", "0.5", "--nu", "1", "--z", "0.9", "--max-terms", "5", "--verbose"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("converged = false"), std::string::npos);
}

TEST_F(CliTest, BoundsExample) {
    const auto cfg = write("chi.json", R"({
      "psi": {"kind": "identity", "domain": [0, 1]},
      "eta": 0.5, "nu": 0.5, "a": 0, "xi": 1, "y_a": 1, "rhs": "1", "k_box": 1
    })");
    auto r = call({"bounds", "--config", cfg.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("chi = 0.547109903806"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("apriori_error_bound = n/a (L = 0)"), std::string::npos);

    const auto lin = write("lin.json", kLinearConfig);
    r = call({"bounds", "--config", lin.string(), "--norm-f", "1", "--z-a", "1.1", "--iterations", "5"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("norm_source = override (--norm-f)"), std::string::npos);
    EXPECT_NE(r.out.find("apriori_error_bound[5] = "), std::string::npos);
    EXPECT_EQ(r.out.find("apriori_error_bound[6]"), std::string::npos);
    EXPECT_NE(r.out.find("continuous_dependence_bound = "), std::string::npos);
}

TEST_F(CliTest, SolveAgreesWithLinear) {
    const auto cfg = write("lin.json", kLinearConfig);
    const auto solve_csv = dir_ / "solve.csv";
    const auto linear_csv = dir_ / "linear.csv";
    auto r = call({"solve", "--config", cfg.string(), "--output", solve_csv.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("converged = true"), std::string::npos);
    EXPECT_TRUE(fs::exists(solve_csv.string() + ".report"));
    r = call({"linear", "--config", cfg.string(), "--output", linear_csv.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto a = read_csv(solve_csv);
    const auto b = read_csv(linear_csv);
    ASSERT_EQ(a.size(), 1025u);
    ASSERT_EQ(a.size(), b.size());
    EXPECT_TRUE(a[0].size() == 2 || std::isnan(a[0][2]));
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i][0], b[i][0]);
        EXPECT_NEAR(a[i][1], b[i][1], 5e-3) << i;
    }
}

TEST_F(CliTest, VariableMode) {
    const auto cfg = write("var.json", R"({
      "psi": {"kind": "identity", "domain": [0, 1]},
      "eta": 0.5, "nu": 0.5, "a": 0, "xi": 1, "y_a": 1, "lambda": -1, "mu": 1.5, "n": 64
    })");
    const auto csv = dir_ / "var.csv";
    const auto r = call({"linear", "--config", cfg.string(), "--mode", "variable", "--output", csv.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(read_csv(csv).back()[1], 0.36318554673982672672, 1e-13);
}

TEST_F(CliTest, SolveIsDeterministicAcrossRunsAndThreads) {
    const auto cfg = write("lin.json", kLinearConfig);
    const std::string exe = PSIHILFER_CLI_PATH;
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "8", "8", "3"}) {
        const fs::path csv = dir_ / ("run" + std::to_string(outputs.size()) + ".csv");
        ASSERT_EQ(shell(exe + " solve --config " + cfg.string() + " --output " + csv.string() + " --threads " +
                        threads + " > /dev/null"),
                  0);
        outputs.push_back(slurp(csv));
    }
    for (const auto& o : outputs) EXPECT_EQ(o, outputs.front());
}

TEST_F(CliTest, ExitCodesFromTheBinary) {
    const std::string exe = PSIHILFER_CLI_PATH;
    const auto bad = write("bad.json", R"({"psi": {"kind": "identity", "domain": [0, 1]}, "eta": 2})");
    EXPECT_EQ(shell(exe + " solve --config " + bad.string() + " > /dev/null 2>&1"), 2);
    EXPECT_EQ(shell(exe + " solve --config " + (dir_ / "missing.json").string() + " > /dev/null 2>&1"), 4);
    const auto slow = write("slow.json", R"({
      "psi": {"kind": "identity", "domain": [0, 1]},
      "eta": 0.6, "nu": 0.4, "a": 0, "xi": 1, "y_a": 1, "rhs": "-1*y", "n": 64, "max_iter": 2
    })");
    EXPECT_EQ(shell(exe + " solve --config " + slow.string() + " --output " + (dir_ / "s.csv").string() +
                    " > /dev/null 2>&1"),
              3);
    EXPECT_EQ(shell(exe + " parse-check 'y +' > /dev/null 2>&1"), 2);
    EXPECT_EQ(shell(exe + " no-such-command > /dev/null 2>&1"), 2);
}

TEST_F(CliTest, ErrorMessagesNameTheKind) {
    const auto r = call({"parse-check", "1 + x"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err.rfind("error: UnknownIdentifier:", 0), 0u) << r.err;
    const auto bad = write("bad.json", R"({"psi": {"kind": "identity", "domain": [0, 1]}, "eta": 2})");
    const auto s = call({"solve", "--config", bad.string()});
    EXPECT_EQ(s.code, 2);
    EXPECT_NE(s.err.find("eta must lie in (0,1)"), std::string::npos) << s.err;
}

TEST_F(CliTest, ParseCheck) {
    const auto r = call({"parse-check", "y*(1-y)"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("canonical = "), std::string::npos);
    EXPECT_NE(r.out.find("depends_on_t = false"), std::string::npos);
    EXPECT_NE(r.out.find("depends_on_y = true"), std::string::npos);
}

TEST_F(CliTest, FractionalIntegralOfData) {
    std::string text = "t,h\n";
    for (int i = 0; i <= 200; ++i) text += std::to_string(i / 200.0) + ",1\n";
    const auto in = write("h.csv", text);
    const auto r = call({"frint", "--input", in.string(), "--eta", "0.5", "--a", "0", "--b", "1", "--n", "100"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("t,integral\n", 0), 0u);
    // I^0.5 1 = 2 sqrt(t / pi).
    const std::string last = r.out.substr(r.out.rfind("\n1,") + 3);
    EXPECT_NEAR(std::stod(last), 2.0 / std::sqrt(M_PI), 1e-12);
    const auto missing = call({"frint", "--input", (dir_ / "nope.csv").string(), "--eta", "0.5", "--a", "0", "--b", "1"});
    EXPECT_EQ(missing.code, 4);
}
