#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ym {

// Raised when an expression cannot be evaluated at a point (log/sqrt of a
// negative argument, division by zero, overflow to non-finite).
class EvalDomainError : public std::runtime_error {
public:
    explicit EvalDomainError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by parse_expression. Carries the byte offset of the offending token
// and the set of tokens that would have been accepted there.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset,
               std::vector<std::string> expected);

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

// Immutable scalar expression tree over a single free variable.
//
// Node set: constants, the variable, unary {neg, sin, cos, exp, log, sqrt,
// abs}, binary {+, -, *, /} and powers with a constant exponent. Trees are
// shared_ptr-backed, so copies are cheap and subtrees can be reused freely;
// an Expr is safe to share across threads once built.
class Expr {
public:
    enum class Op {
        Constant, Variable,
        Neg, Sin, Cos, Exp, Log, Sqrt, Abs,
        Add, Sub, Mul, Div, Pow
    };

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct Node {
        Op op;
        double value = 0.0;  // payload for Constant
        NodePtr a, b;
    };

    Expr() = default;  // empty; only assignment makes it usable
    explicit Expr(NodePtr root) : root_(std::move(root)) {}

    static Expr constant(double v);
    static Expr variable();
    static Expr unary(Op op, const Expr& a);
    static Expr binary(Op op, const Expr& a, const Expr& b);

    bool empty() const noexcept { return root_ == nullptr; }
    const NodePtr& root() const noexcept { return root_; }

    // Evaluates at x. Returns a finite double or throws EvalDomainError.
    double eval(double x) const;

    // True when no Variable node occurs anywhere in the tree.
    bool is_constant() const;
    // Value of a constant tree (pre: is_constant()).
    double constant_value() const;

private:
    NodePtr root_;
};

// Parses the standard-precedence arithmetic grammar: '+'/'-' < '*'/'/' <
// unary minus < '^' (right-associative, constant exponent only). Function
// application is by name: sin, cos, exp, log, sqrt, abs. `variable` names
// the single free symbol accepted (default "x").
Expr parse_expression(std::string_view source, std::string_view variable = "x");

// Symbolic derivative. Total on well-formed trees; applies light constant
// folding so derivatives of polynomials come out in the expected shape.
Expr differentiate(const Expr& e);

// Replaces every occurrence of the variable with `replacement`.
Expr substitute(const Expr& e, const Expr& replacement);

}  // namespace ym
