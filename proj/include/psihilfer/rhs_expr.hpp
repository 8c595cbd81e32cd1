#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "psihilfer/psi_map.hpp"

namespace psihilfer {

/// Parsed right-hand side f(t, y): constants, the variables t and y,
/// + - * / ^ (right-associative), unary minus, and the functions
/// sin cos exp ln abs sqrt pow gamma.
///
/// Precedence, tightest first: ^, unary -, * /, + -. The tree is stored as a
/// flat node array; an RhsExpr is immutable and eval is reentrant.
class RhsExpr {
public:
    enum class Op : std::uint8_t {
        number, var_t, var_y, neg, add, sub, mul, div, pow,
        fn_sin, fn_cos, fn_exp, fn_ln, fn_abs, fn_sqrt, fn_pow, fn_gamma,
    };

    struct Node {
        Op op;
        double value = 0.0;
        std::int32_t lhs = -1;
        std::int32_t rhs = -1;
        std::size_t offset = 0;

        bool operator==(const Node&) const = default;
    };

    static RhsExpr parse(std::string_view text);

    /// Throws DomainError (ln of nonpositive, division by zero, 0^negative,
    /// or any non-finite intermediate) carrying the offending node's offset.
    double eval(double t, double y) const;

    /// Canonical text: fully parenthesized binary and unary operations,
    /// numbers with 17 significant digits. Re-parsing yields an identical tree.
    std::string to_string() const;

    /// Indented one-node-per-line rendering of the tree.
    std::string tree_string() const;

    bool depends_on_y() const;
    bool depends_on_t() const;
    const std::string& source() const { return source_; }

    /// Trees are equal when their structure and constants match; offsets are ignored.
    bool same_tree(const RhsExpr& other) const;

private:
    RhsExpr() = default;
    double eval_node(std::int32_t index, double t, double y) const;
    void print_node(std::int32_t index, std::string& out) const;
    void tree_node(std::int32_t index, int depth, std::string& out) const;
    bool same_subtree(std::int32_t a, const RhsExpr& other, std::int32_t b) const;

    friend class RhsParser;

    std::string source_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

/// Empirical Lipschitz constant of f in y over a box: max |df/dy| from
/// central differences (step 1e-6 of the y-range width) at the box corners,
/// edge midpoints and a fixed Halton(2,3) sequence, times a 1.1 safety factor.
/// This is a heuristic, not a bound.
double lipschitz_estimate(const RhsExpr& expr, Interval t_range, Interval y_range, std::size_t samples);

}  // namespace psihilfer
