#include "psihilfer/rhs_expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "psihilfer/errors.hpp"

namespace psihilfer {

namespace {

using Op = RhsExpr::Op;

struct FunctionInfo {
    std::string_view name;
    Op op;
    int arity;
};

constexpr std::array<FunctionInfo, 8> kFunctions = {{
    {"sin", Op::fn_sin, 1},
    {"cos", Op::fn_cos, 1},
    {"exp", Op::fn_exp, 1},
    {"ln", Op::fn_ln, 1},
    {"abs", Op::fn_abs, 1},
    {"sqrt", Op::fn_sqrt, 1},
    {"pow", Op::fn_pow, 2},
    {"gamma", Op::fn_gamma, 1},
}};

std::string_view op_name(Op op) {
    switch (op) {
        case Op::number: return "number";
        case Op::var_t: return "t";
        case Op::var_y: return "y";
        case Op::neg: return "neg";
        case Op::add: return "+";
        case Op::sub: return "-";
        case Op::mul: return "*";
        case Op::div: return "/";
        case Op::pow: return "^";
        default: break;
    }
    for (const auto& fn : kFunctions) {
        if (fn.op == op) return fn.name;
    }
    return "?";
}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

}  // namespace

class RhsParser {
public:
    explicit RhsParser(std::string_view text) : text_(text) { expr_.source_ = std::string(text); }

    RhsExpr run() {
        skip_space();
        if (pos_ >= text_.size()) fail("empty expression");
        expr_.root_ = parse_sum();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return std::move(expr_);
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ExprError(ErrorKind::SyntaxError, message, pos_);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::int32_t add_node(Op op, std::size_t offset, std::int32_t lhs = -1, std::int32_t rhs = -1,
                          double value = 0.0) {
        expr_.nodes_.push_back(RhsExpr::Node{op, value, lhs, rhs, offset});
        return static_cast<std::int32_t>(expr_.nodes_.size() - 1);
    }

    std::int32_t parse_sum() {
        std::int32_t lhs = parse_product();
        for (;;) {
            skip_space();
            const std::size_t at = pos_;
            if (accept('+')) {
                lhs = add_node(Op::add, at, lhs, parse_product());
            } else if (accept('-')) {
                lhs = add_node(Op::sub, at, lhs, parse_product());
            } else {
                return lhs;
            }
        }
    }

    std::int32_t parse_product() {
        std::int32_t lhs = parse_unary();
        for (;;) {
            skip_space();
            const std::size_t at = pos_;
            if (accept('*')) {
                lhs = add_node(Op::mul, at, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = add_node(Op::div, at, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    std::int32_t parse_unary() {
        skip_space();
        const std::size_t at = pos_;
        if (accept('-')) return add_node(Op::neg, at, parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    // ^ binds tighter than unary minus and is right-associative; its
    // exponent may itself carry a sign ("2^-1").
    std::int32_t parse_power() {
        const std::int32_t base = parse_primary();
        skip_space();
        const std::size_t at = pos_;
        if (accept('^')) return add_node(Op::pow, at, base, parse_unary());
        return base;
    }

    std::int32_t parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const std::size_t at = pos_;
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            const std::int32_t inner = parse_sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string_view ident = text_.substr(at, pos_ - at);
            if (ident == "t") return add_node(Op::var_t, at);
            if (ident == "y") return add_node(Op::var_y, at);
            for (const auto& fn : kFunctions) {
                if (fn.name != ident) continue;
                expect('(');
                const std::int32_t first = parse_sum();
                std::int32_t second = -1;
                if (fn.arity == 2) {
                    expect(',');
                    second = parse_sum();
                }
                expect(')');
                return add_node(fn.op, at, first, second);
            }
            throw ExprError(ErrorKind::UnknownIdentifier, "unknown identifier '" + std::string(ident) + "'", at);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::int32_t parse_number() {
        const std::size_t at = pos_;
        std::size_t end = pos_;
        auto digits = [&] {
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
        };
        digits();
        if (end < text_.size() && text_[end] == '.') {
            ++end;
            digits();
        }
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t exp_end = end + 1;
            if (exp_end < text_.size() && (text_[exp_end] == '+' || text_[exp_end] == '-')) ++exp_end;
            if (exp_end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp_end]))) {
                end = exp_end;
                digits();
            }
        }
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text_.data() + at, text_.data() + end, value);
        if (ec != std::errc() || ptr != text_.data() + end || !std::isfinite(value)) {
            fail("malformed number");
        }
        pos_ = end;
        return add_node(Op::number, at, -1, -1, value);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    RhsExpr expr_;
};

RhsExpr RhsExpr::parse(std::string_view text) { return RhsParser(text).run(); }

double RhsExpr::eval(double t, double y) const { return eval_node(root_, t, y); }

double RhsExpr::eval_node(std::int32_t index, double t, double y) const {
    const Node& node = nodes_[static_cast<std::size_t>(index)];
    auto domain_error = [&](const std::string& what) -> double {
        throw ExprError(ErrorKind::DomainError, what, node.offset);
    };
    double result = 0.0;
    switch (node.op) {
        case Op::number: return node.value;
        case Op::var_t: return t;
        case Op::var_y: return y;
        case Op::neg: return -eval_node(node.lhs, t, y);
        case Op::add: result = eval_node(node.lhs, t, y) + eval_node(node.rhs, t, y); break;
        case Op::sub: result = eval_node(node.lhs, t, y) - eval_node(node.rhs, t, y); break;
        case Op::mul: result = eval_node(node.lhs, t, y) * eval_node(node.rhs, t, y); break;
        case Op::div: {
            const double num = eval_node(node.lhs, t, y);
            const double den = eval_node(node.rhs, t, y);
            if (den == 0.0) return domain_error("division by zero");
            result = num / den;
            break;
        }
        case Op::pow:
        case Op::fn_pow: {
            const double base = eval_node(node.lhs, t, y);
            const double expo = eval_node(node.rhs, t, y);
            if (base == 0.0 && expo < 0.0) return domain_error("zero raised to a negative power");
            result = std::pow(base, expo);
            break;
        }
        case Op::fn_sin: result = std::sin(eval_node(node.lhs, t, y)); break;
        case Op::fn_cos: result = std::cos(eval_node(node.lhs, t, y)); break;
        case Op::fn_exp: result = std::exp(eval_node(node.lhs, t, y)); break;
        case Op::fn_ln: {
            const double arg = eval_node(node.lhs, t, y);
            if (!(arg > 0.0)) return domain_error("ln of a nonpositive value");
            result = std::log(arg);
            break;
        }
        case Op::fn_abs: result = std::abs(eval_node(node.lhs, t, y)); break;
        case Op::fn_sqrt: {
            const double arg = eval_node(node.lhs, t, y);
            if (arg < 0.0) return domain_error("sqrt of a negative value");
            result = std::sqrt(arg);
            break;
        }
        case Op::fn_gamma: {
            const double arg = eval_node(node.lhs, t, y);
            if (arg <= 0.0 && arg == std::floor(arg)) return domain_error("gamma at a nonpositive integer");
            result = std::tgamma(arg);
            break;
        }
    }
    if (!std::isfinite(result)) return domain_error("non-finite result");
    return result;
}

void RhsExpr::print_node(std::int32_t index, std::string& out) const {
    const Node& node = nodes_[static_cast<std::size_t>(index)];
    switch (node.op) {
        case Op::number: out += format_number(node.value); return;
        case Op::var_t: out += 't'; return;
        case Op::var_y: out += 'y'; return;
        case Op::neg:
            out += "(-";
            print_node(node.lhs, out);
            out += ')';
            return;
        case Op::add:
        case Op::sub:
        case Op::mul:
        case Op::div:
        case Op::pow:
            out += '(';
            print_node(node.lhs, out);
            out += ' ';
            out += op_name(node.op);
            out += ' ';
            print_node(node.rhs, out);
            out += ')';
            return;
        default:
            out += op_name(node.op);
            out += '(';
            print_node(node.lhs, out);
            if (node.rhs >= 0) {
                out += ", ";
                print_node(node.rhs, out);
            }
            out += ')';
            return;
    }
}

std::string RhsExpr::to_string() const {
    std::string out;
    print_node(root_, out);
    return out;
}

void RhsExpr::tree_node(std::int32_t index, int depth, std::string& out) const {
    const Node& node = nodes_[static_cast<std::size_t>(index)];
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    if (node.op == Op::number) {
        out += format_number(node.value);
    } else {
        out += op_name(node.op);
    }
    out += '\n';
    if (node.lhs >= 0) tree_node(node.lhs, depth + 1, out);
    if (node.rhs >= 0) tree_node(node.rhs, depth + 1, out);
}

std::string RhsExpr::tree_string() const {
    std::string out;
    tree_node(root_, 0, out);
    return out;
}

bool RhsExpr::depends_on_y() const {
    for (const auto& node : nodes_) {
        if (node.op == Op::var_y) return true;
    }
    return false;
}

bool RhsExpr::depends_on_t() const {
    for (const auto& node : nodes_) {
        if (node.op == Op::var_t) return true;
    }
    return false;
}

bool RhsExpr::same_subtree(std::int32_t a, const RhsExpr& other, std::int32_t b) const {
    if (a < 0 || b < 0) return a == b;
    const Node& x = nodes_[static_cast<std::size_t>(a)];
    const Node& z = other.nodes_[static_cast<std::size_t>(b)];
    if (x.op != z.op) return false;
    if (x.op == Op::number && x.value != z.value) return false;
    return same_subtree(x.lhs, other, z.lhs) && same_subtree(x.rhs, other, z.rhs);
}

bool RhsExpr::same_tree(const RhsExpr& other) const { return same_subtree(root_, other, other.root_); }

double lipschitz_estimate(const RhsExpr& expr, Interval t_range, Interval y_range, std::size_t samples) {
    if (samples < 100) {
        throw Error(ErrorKind::ParamViolation, "lipschitz_estimate needs at least 100 samples");
    }
    if (!(t_range.lo <= t_range.hi) || !(y_range.lo <= y_range.hi)) {
        throw Error(ErrorKind::ParamViolation, "lipschitz_estimate needs nonempty ranges");
    }
    if (!expr.depends_on_y()) return 0.0;

    const double width = y_range.width();
    const double step = width > 0.0 ? 1e-6 * width : 1e-6 * std::max(1.0, std::abs(y_range.lo));
    double best = 0.0;
    auto probe = [&](double t, double y) {
        const double slope = (expr.eval(t, y + step) - expr.eval(t, y - step)) / (2.0 * step);
        best = std::max(best, std::abs(slope));
    };

    const std::array<double, 3> fractions = {0.0, 0.5, 1.0};
    for (double ft : fractions) {
        for (double fy : fractions) {
            probe(t_range.lo + ft * t_range.width(), y_range.lo + fy * width);
        }
    }
    auto radical_inverse = [](std::size_t index, std::size_t base) {
        double result = 0.0;
        double f = 1.0 / static_cast<double>(base);
        while (index > 0) {
            result += f * static_cast<double>(index % base);
            index /= base;
            f /= static_cast<double>(base);
        }
        return result;
    };
    for (std::size_t k = 1; k <= samples; ++k) {
        probe(t_range.lo + radical_inverse(k, 2) * t_range.width(), y_range.lo + radical_inverse(k, 3) * width);
    }
    return 1.1 * best;
}

}  // namespace psihilfer
