#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psihilfer/errors.hpp"
#include "psihilfer/linear_forms.hpp"
#include "psihilfer/picard.hpp"

namespace psihilfer {

/// One problem description, read from a single JSON object.
struct ProblemConfig {
    PsiKind psi_kind = PsiKind::identity;
    std::optional<double> rho;
    Interval domain;
    double eta = 0.5;
    double nu = 0.0;
    double a = 0.0;
    double xi = 1.0;
    double y_a = 0.0;
    std::optional<std::string> rhs;
    double k_box = 1.0;
    std::size_t n = 1024;
    double tol = 1e-10;
    std::size_t max_iter = 200;
    std::optional<double> L_override;
    std::optional<double> M_override;
    std::optional<double> horizon;
    double lambda = 0.0;
    std::optional<double> mu;
    std::optional<std::string> forcing;
    std::string output_path = "solution.csv";

    double zeta() const { return OrderParams::make(eta, nu).zeta(); }
    PsiMap psi() const;
    /// Needs rhs.
    CauchyProblem cauchy_problem() const;
    SolveOptions solve_options() const;
    /// Linear problem on [a, a + xi].
    LinearProblem linear_problem() const;
};

/// Every violation found while loading, not just the first.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Throws Error(Io) when the file cannot be read, Error(ParseError) on
/// malformed JSON and ConfigError (kind ValidationError) on bad content.
ProblemConfig load_config(const std::string& path);
ProblemConfig parse_config(std::string_view json_text);

}  // namespace psihilfer
