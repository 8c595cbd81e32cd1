#include "psihilfer/config.hpp"

#include <cmath>
#include <fstream>
#include <locale>
#include <set>
#include <sstream>

#include <json.hpp>

namespace psihilfer {

namespace {

using nlohmann::json;

std::string short_number(double v) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << v;
    return out.str();
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += "; ";
        out += item;
    }
    return out;
}

const std::set<std::string> kKnownKeys = {
    "psi", "eta", "nu", "a", "xi", "y_a", "rhs", "k_box", "n", "tol", "max_iter", "L_override",
    "M_override", "horizon", "lambda", "mu", "forcing", "output_path",
};

class Reader {
public:
    explicit Reader(const json& doc) : doc_(doc) {}

    std::vector<std::string> errors;

    std::optional<double> number(const char* key, bool required) {
        if (!doc_.contains(key)) {
            if (required) errors.push_back(std::string(key) + " is required");
            return std::nullopt;
        }
        const json& v = doc_.at(key);
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            errors.push_back(std::string(key) + " must be a finite number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<std::size_t> count(const char* key) {
        if (!doc_.contains(key)) return std::nullopt;
        const json& v = doc_.at(key);
        if (!v.is_number_integer() || v.get<long long>() <= 0) {
            errors.push_back(std::string(key) + " must be a positive integer");
            return std::nullopt;
        }
        return static_cast<std::size_t>(v.get<long long>());
    }

    std::optional<std::string> text(const char* key) {
        if (!doc_.contains(key)) return std::nullopt;
        const json& v = doc_.at(key);
        if (!v.is_string()) {
            errors.push_back(std::string(key) + " must be a string");
            return std::nullopt;
        }
        return v.get<std::string>();
    }

private:
    const json& doc_;
};

void read_psi(const json& doc, ProblemConfig& cfg, std::vector<std::string>& errors) {
    if (!doc.contains("psi")) {
        errors.emplace_back("psi is required");
        return;
    }
    const json& psi = doc.at("psi");
    if (!psi.is_object()) {
        errors.emplace_back("psi must be an object {kind, rho?, domain}");
        return;
    }
    for (const auto& [key, value] : psi.items()) {
        if (key != "kind" && key != "rho" && key != "domain") errors.push_back("unknown key 'psi." + key + "'");
    }
    if (!psi.contains("kind") || !psi.at("kind").is_string()) {
        errors.emplace_back("psi.kind must be one of identity, power, log, exp");
    } else {
        const auto kind = psi_kind_from_string(psi.at("kind").get<std::string>());
        if (!kind || *kind == PsiKind::custom) {
            errors.emplace_back("psi.kind must be one of identity, power, log, exp");
        } else {
            cfg.psi_kind = *kind;
        }
    }
    if (psi.contains("rho")) {
        if (!psi.at("rho").is_number()) {
            errors.emplace_back("psi.rho must be a number");
        } else {
            cfg.rho = psi.at("rho").get<double>();
        }
    }
    if (cfg.psi_kind == PsiKind::power) {
        if (!cfg.rho) {
            errors.emplace_back("psi.rho is required for kind power");
        } else if (!(*cfg.rho > 0.0)) {
            errors.emplace_back("psi.rho must be positive");
        }
    }
    const json* domain = psi.contains("domain") ? &psi.at("domain") : nullptr;
    if (!domain || !domain->is_array() || domain->size() != 2 || !(*domain)[0].is_number() ||
        !(*domain)[1].is_number()) {
        errors.emplace_back("psi.domain must be [lo, hi]");
        return;
    }
    cfg.domain = {(*domain)[0].get<double>(), (*domain)[1].get<double>()};
    if (!(cfg.domain.lo < cfg.domain.hi)) errors.emplace_back("psi.domain must satisfy lo < hi");
    if (cfg.psi_kind == PsiKind::log && !(cfg.domain.lo > 0.0)) {
        errors.emplace_back("psi.domain must start above 0 for kind log");
    }
    if (cfg.psi_kind == PsiKind::power && cfg.domain.lo < 0.0) {
        errors.emplace_back("psi.domain must start at or above 0 for kind power");
    }
}

void check_expression(const std::string& key, const std::string& text, bool t_only,
                      std::vector<std::string>& errors) {
    try {
        const RhsExpr expr = RhsExpr::parse(text);
        if (t_only && expr.depends_on_y()) errors.push_back(key + " must depend on t only");
    } catch (const ExprError& e) {
        errors.push_back(key + ": " + std::string(to_string(e.kind())) + ": " + e.what());
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(ErrorKind::ValidationError, join(violations)), violations_(std::move(violations)) {}

PsiMap ProblemConfig::psi() const {
    const double params[1] = {rho.value_or(1.0)};
    return make_psi(psi_kind, params, domain);
}

CauchyProblem ProblemConfig::cauchy_problem() const {
    if (!rhs) throw ConfigError({"rhs is required"});
    return CauchyProblem{psi(), OrderParams::make(eta, nu), a, xi, y_a, RhsExpr::parse(*rhs), k_box};
}

SolveOptions ProblemConfig::solve_options() const {
    SolveOptions options;
    options.n = n;
    options.tol = tol;
    options.max_iter = max_iter;
    options.L_override = L_override;
    options.M_override = M_override;
    options.horizon = horizon;
    return options;
}

LinearProblem ProblemConfig::linear_problem() const {
    LinearProblem problem{psi(), OrderParams::make(eta, nu), a, a + xi, y_a, lambda, mu, std::nullopt};
    if (forcing) problem.forcing = RhsExpr::parse(*forcing);
    return problem;
}

ProblemConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::ParseError, "config must be a JSON object");

    ProblemConfig cfg;
    Reader in(doc);
    for (const auto& [key, value] : doc.items()) {
        if (!kKnownKeys.count(key)) in.errors.push_back("unknown key '" + key + "'");
    }
    read_psi(doc, cfg, in.errors);

    if (auto v = in.number("eta", true)) {
        cfg.eta = *v;
        if (!(cfg.eta > 0.0 && cfg.eta < 1.0)) in.errors.emplace_back("eta must lie in (0,1)");
    }
    if (auto v = in.number("nu", true)) {
        cfg.nu = *v;
        if (!(cfg.nu >= 0.0 && cfg.nu <= 1.0)) in.errors.emplace_back("nu must lie in [0,1]");
    }
    const auto a = in.number("a", true);
    const auto xi = in.number("xi", true);
    const bool have_a = a.has_value();
    const bool have_xi = xi.has_value();
    cfg.a = a.value_or(cfg.a);
    cfg.xi = xi.value_or(cfg.xi);
    if (have_xi && !(cfg.xi > 0.0)) in.errors.emplace_back("xi must be positive");
    if (have_a && cfg.domain.lo < cfg.domain.hi) {
        if (!cfg.domain.contains(cfg.a)) in.errors.emplace_back("a must lie in psi.domain");
        const double slack = 1e-12 * std::max(1.0, std::abs(cfg.a + cfg.xi));
        if (have_xi && cfg.xi > 0.0 && !cfg.domain.contains(cfg.a + cfg.xi, slack)) {
            in.errors.emplace_back("a + xi must not exceed the end of psi.domain");
        }
    }
    if (auto v = in.number("y_a", true)) cfg.y_a = *v;
    if (auto v = in.number("k_box", false)) {
        cfg.k_box = *v;
        if (!(cfg.k_box > 0.0)) in.errors.emplace_back("k_box must be positive");
    }
    if (auto v = in.count("n")) {
        cfg.n = *v;
        if (cfg.n < 16) in.errors.emplace_back("n must be at least 16");
    }
    if (auto v = in.number("tol", false)) {
        cfg.tol = *v;
        if (!(cfg.tol > 0.0)) in.errors.emplace_back("tol must be positive");
    }
    if (auto v = in.count("max_iter")) cfg.max_iter = *v;
    if (auto v = in.number("L_override", false)) {
        cfg.L_override = *v;
        if (*v < 0.0) in.errors.emplace_back("L_override must be nonnegative");
    }
    if (auto v = in.number("M_override", false)) {
        cfg.M_override = *v;
        if (*v < 0.0) in.errors.emplace_back("M_override must be nonnegative");
    }
    if (auto v = in.number("horizon", false)) {
        cfg.horizon = *v;
        if (!(*v > 0.0) || (have_xi && *v > cfg.xi)) in.errors.emplace_back("horizon must lie in (0, xi]");
    }
    if (auto v = in.number("lambda", false)) cfg.lambda = *v;
    if (auto v = in.number("mu", false)) {
        cfg.mu = *v;
        const double floor = 1.0 - cfg.eta;
        if (!(*v > floor)) in.errors.push_back("mu must exceed 1-eta = " + short_number(floor));
    }
    cfg.rhs = in.text("rhs");
    if (cfg.rhs) check_expression("rhs", *cfg.rhs, false, in.errors);
    cfg.forcing = in.text("forcing");
    if (cfg.forcing) check_expression("forcing", *cfg.forcing, true, in.errors);
    if (cfg.mu && cfg.forcing) in.errors.emplace_back("forcing is not allowed together with mu");
    if (auto v = in.text("output_path")) {
        if (v->empty()) {
            in.errors.emplace_back("output_path must not be empty");
        } else {
            cfg.output_path = *v;
        }
    }

    if (!in.errors.empty()) throw ConfigError(std::move(in.errors));
    return cfg;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::Io, "cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    if (file.bad()) throw Error(ErrorKind::Io, "cannot read config file '" + path + "'");
    return parse_config(buffer.str());
}

}  // namespace psihilfer
