#include "ym/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace ym {

ParseError::ParseError(const std::string& message, std::size_t offset,
                       std::vector<std::string> expected)
    : std::runtime_error(message + " at offset " + std::to_string(offset)),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

Expr::NodePtr make_node(Expr::Op op, double value, Expr::NodePtr a, Expr::NodePtr b) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->value = value;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

double checked_pow(double base, double expo) {
    const bool integral = std::nearbyint(expo) == expo && std::abs(expo) < 1e15;
    if (!integral) {
        if (base < 0.0)
            throw EvalDomainError("negative base raised to non-integer power");
        if (base == 0.0 && expo < 0.0)
            throw EvalDomainError("zero raised to negative power");
    } else if (base == 0.0 && expo < 0.0) {
        throw EvalDomainError("zero raised to negative power");
    }
    return std::pow(base, expo);
}

double eval_node(const Expr::Node& n, double x) {
    switch (n.op) {
        case Expr::Op::Constant: return n.value;
        case Expr::Op::Variable: return x;
        case Expr::Op::Neg: return -eval_node(*n.a, x);
        case Expr::Op::Sin: return std::sin(eval_node(*n.a, x));
        case Expr::Op::Cos: return std::cos(eval_node(*n.a, x));
        case Expr::Op::Exp: return std::exp(eval_node(*n.a, x));
        case Expr::Op::Log: {
            const double v = eval_node(*n.a, x);
            if (v <= 0.0) throw EvalDomainError("log of non-positive argument");
            return std::log(v);
        }
        case Expr::Op::Sqrt: {
            const double v = eval_node(*n.a, x);
            if (v < 0.0) throw EvalDomainError("sqrt of negative argument");
            return std::sqrt(v);
        }
        case Expr::Op::Abs: return std::abs(eval_node(*n.a, x));
        case Expr::Op::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
        case Expr::Op::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
        case Expr::Op::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
        case Expr::Op::Div: {
            const double den = eval_node(*n.b, x);
            if (den == 0.0) throw EvalDomainError("division by zero");
            return eval_node(*n.a, x) / den;
        }
        case Expr::Op::Pow:
            return checked_pow(eval_node(*n.a, x), eval_node(*n.b, x));
    }
    throw EvalDomainError("corrupt expression node");
}

bool node_is_constant(const Expr::Node& n) {
    if (n.op == Expr::Op::Variable) return false;
    if (n.a && !node_is_constant(*n.a)) return false;
    if (n.b && !node_is_constant(*n.b)) return false;
    return true;
}

}  // namespace

Expr Expr::constant(double v) { return Expr(make_node(Op::Constant, v, nullptr, nullptr)); }
Expr Expr::variable() { return Expr(make_node(Op::Variable, 0.0, nullptr, nullptr)); }

Expr Expr::unary(Op op, const Expr& a) {
    return Expr(make_node(op, 0.0, a.root_, nullptr));
}

Expr Expr::binary(Op op, const Expr& a, const Expr& b) {
    return Expr(make_node(op, 0.0, a.root_, b.root_));
}

double Expr::eval(double x) const {
    if (!root_) throw EvalDomainError("empty expression");
    const double r = eval_node(*root_, x);
    if (!std::isfinite(r)) throw EvalDomainError("evaluation is not finite");
    return r;
}

bool Expr::is_constant() const { return root_ && node_is_constant(*root_); }

double Expr::constant_value() const { return eval(0.0); }

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t offset;
    double number = 0.0;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        current_.offset = pos_;
        current_.text.clear();
        if (pos_ >= src_.size()) {
            current_.kind = Tok::End;
            return;
        }
        const char c = src_[pos_];
        switch (c) {
            case '+': current_.kind = Tok::Plus; ++pos_; return;
            case '-': current_.kind = Tok::Minus; ++pos_; return;
            case '*': current_.kind = Tok::Star; ++pos_; return;
            case '/': current_.kind = Tok::Slash; ++pos_; return;
            case '^': current_.kind = Tok::Caret; ++pos_; return;
            case '(': current_.kind = Tok::LParen; ++pos_; return;
            case ')': current_.kind = Tok::RParen; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double value = 0.0;
            const char* begin = src_.data() + pos_;
            const char* end = src_.data() + src_.size();
            auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc{} || ptr == begin)
                throw ParseError("malformed number", pos_, {"number"});
            current_.kind = Tok::Number;
            current_.number = value;
            pos_ += static_cast<std::size_t>(ptr - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t s = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            current_.kind = Tok::Ident;
            current_.text = std::string(src_.substr(s, pos_ - s));
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_,
                         {"number", "identifier", "operator", "(", ")"});
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token current_;
};

struct FnEntry {
    const char* name;
    Expr::Op op;
};

constexpr FnEntry kFunctions[] = {
    {"sin", Expr::Op::Sin}, {"cos", Expr::Op::Cos}, {"exp", Expr::Op::Exp},
    {"log", Expr::Op::Log}, {"sqrt", Expr::Op::Sqrt}, {"abs", Expr::Op::Abs},
};

class Parser {
public:
    Parser(std::string_view src, std::string_view variable)
        : lex_(src), variable_(variable) {}

    Expr parse() {
        Expr e = parse_sum();
        const Token& t = lex_.peek();
        if (t.kind != Tok::End)
            throw ParseError("trailing input", t.offset, {"end of input", "operator"});
        return e;
    }

private:
    Expr parse_sum() {
        Expr lhs = parse_term();
        for (;;) {
            const Tok k = lex_.peek().kind;
            if (k == Tok::Plus || k == Tok::Minus) {
                lex_.take();
                Expr rhs = parse_term();
                lhs = Expr::binary(k == Tok::Plus ? Expr::Op::Add : Expr::Op::Sub, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            const Tok k = lex_.peek().kind;
            if (k == Tok::Star || k == Tok::Slash) {
                lex_.take();
                Expr rhs = parse_unary();
                lhs = Expr::binary(k == Tok::Star ? Expr::Op::Mul : Expr::Op::Div, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return Expr::unary(Expr::Op::Neg, parse_unary());
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (lex_.peek().kind != Tok::Caret) return base;
        lex_.take();
        const std::size_t expo_offset = lex_.peek().offset;
        Expr expo = parse_unary();  // right-associative; allows x^-2, x^(1/3)
        if (!expo.is_constant())
            throw ParseError("exponent must be a constant expression", expo_offset,
                             {"constant expression"});
        double value;
        try {
            value = expo.constant_value();
        } catch (const EvalDomainError& e) {
            throw ParseError(std::string("exponent does not evaluate: ") + e.what(),
                             expo_offset, {"constant expression"});
        }
        return Expr::binary(Expr::Op::Pow, base, Expr::constant(value));
    }

    Expr parse_primary() {
        const Token t = lex_.take();
        switch (t.kind) {
            case Tok::Number:
                return Expr::constant(t.number);
            case Tok::LParen: {
                Expr e = parse_sum();
                const Token close = lex_.take();
                if (close.kind != Tok::RParen)
                    throw ParseError("expected ')'", close.offset, {")"});
                return e;
            }
            case Tok::Ident: {
                if (t.text == variable_) return Expr::variable();
                for (const auto& fn : kFunctions) {
                    if (t.text == fn.name) {
                        const Token open = lex_.take();
                        if (open.kind != Tok::LParen)
                            throw ParseError("expected '(' after function name", open.offset, {"("});
                        Expr arg = parse_sum();
                        const Token close = lex_.take();
                        if (close.kind != Tok::RParen)
                            throw ParseError("expected ')'", close.offset, {")"});
                        return Expr::unary(fn.op, arg);
                    }
                }
                throw ParseError("unknown identifier '" + t.text + "'", t.offset,
                                 {std::string(variable_), "sin", "cos", "exp", "log", "sqrt", "abs"});
            }
            default:
                throw ParseError("expected an expression", t.offset,
                                 {"number", std::string(variable_), "function", "(", "-"});
        }
    }

    Lexer lex_;
    std::string_view variable_;
};

}  // namespace

Expr parse_expression(std::string_view source, std::string_view variable) {
    if (source.empty())
        throw ParseError("empty expression", 0, {"number", std::string(variable), "function", "(", "-"});
    return Parser(source, variable).parse();
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

namespace {

bool is_const_node(const Expr::NodePtr& n, double v) {
    return n->op == Expr::Op::Constant && n->value == v;
}

// Folding combinators keep derivative trees in the shape a person would write.
Expr::NodePtr c_(double v) { return make_node(Expr::Op::Constant, v, nullptr, nullptr); }

Expr::NodePtr add_(Expr::NodePtr a, Expr::NodePtr b) {
    if (is_const_node(a, 0.0)) return b;
    if (is_const_node(b, 0.0)) return a;
    if (a->op == Expr::Op::Constant && b->op == Expr::Op::Constant)
        return c_(a->value + b->value);
    return make_node(Expr::Op::Add, 0.0, std::move(a), std::move(b));
}

Expr::NodePtr sub_(Expr::NodePtr a, Expr::NodePtr b) {
    if (is_const_node(b, 0.0)) return a;
    if (a->op == Expr::Op::Constant && b->op == Expr::Op::Constant)
        return c_(a->value - b->value);
    if (is_const_node(a, 0.0)) return make_node(Expr::Op::Neg, 0.0, std::move(b), nullptr);
    return make_node(Expr::Op::Sub, 0.0, std::move(a), std::move(b));
}

Expr::NodePtr mul_(Expr::NodePtr a, Expr::NodePtr b) {
    if (is_const_node(a, 0.0) || is_const_node(b, 0.0)) return c_(0.0);
    if (is_const_node(a, 1.0)) return b;
    if (is_const_node(b, 1.0)) return a;
    if (a->op == Expr::Op::Constant && b->op == Expr::Op::Constant)
        return c_(a->value * b->value);
    return make_node(Expr::Op::Mul, 0.0, std::move(a), std::move(b));
}

Expr::NodePtr div_(Expr::NodePtr a, Expr::NodePtr b) {
    if (is_const_node(a, 0.0)) return c_(0.0);
    if (is_const_node(b, 1.0)) return a;
    return make_node(Expr::Op::Div, 0.0, std::move(a), std::move(b));
}

Expr::NodePtr neg_(Expr::NodePtr a) {
    if (a->op == Expr::Op::Constant) return c_(-a->value);
    return make_node(Expr::Op::Neg, 0.0, std::move(a), nullptr);
}

Expr::NodePtr pow_(Expr::NodePtr base, double expo) {
    if (expo == 0.0) return c_(1.0);
    if (expo == 1.0) return base;
    return make_node(Expr::Op::Pow, 0.0, std::move(base), c_(expo));
}

Expr::NodePtr un_(Expr::Op op, Expr::NodePtr a) {
    return make_node(op, 0.0, std::move(a), nullptr);
}

Expr::NodePtr diff_node(const Expr::NodePtr& n) {
    switch (n->op) {
        case Expr::Op::Constant: return c_(0.0);
        case Expr::Op::Variable: return c_(1.0);
        case Expr::Op::Neg: return neg_(diff_node(n->a));
        case Expr::Op::Sin: return mul_(un_(Expr::Op::Cos, n->a), diff_node(n->a));
        case Expr::Op::Cos: return neg_(mul_(un_(Expr::Op::Sin, n->a), diff_node(n->a)));
        case Expr::Op::Exp: return mul_(un_(Expr::Op::Exp, n->a), diff_node(n->a));
        case Expr::Op::Log: return div_(diff_node(n->a), n->a);
        case Expr::Op::Sqrt:
            return div_(diff_node(n->a), mul_(c_(2.0), un_(Expr::Op::Sqrt, n->a)));
        case Expr::Op::Abs:
            // d|f| = f/|f| * f'; undefined (division by zero) where f = 0
            return mul_(div_(n->a, un_(Expr::Op::Abs, n->a)), diff_node(n->a));
        case Expr::Op::Add: return add_(diff_node(n->a), diff_node(n->b));
        case Expr::Op::Sub: return sub_(diff_node(n->a), diff_node(n->b));
        case Expr::Op::Mul:
            return add_(mul_(diff_node(n->a), n->b), mul_(n->a, diff_node(n->b)));
        case Expr::Op::Div:
            return div_(sub_(mul_(diff_node(n->a), n->b), mul_(n->a, diff_node(n->b))),
                        pow_(n->b, 2.0));
        case Expr::Op::Pow: {
            if (n->b->op != Expr::Op::Constant)
                throw std::invalid_argument("differentiate: powers must carry constant exponents");
            const double k = n->b->value;
            return mul_(mul_(c_(k), pow_(n->a, k - 1.0)), diff_node(n->a));
        }
    }
    return c_(0.0);
}

Expr::NodePtr subst_node(const Expr::NodePtr& n, const Expr::NodePtr& repl) {
    if (n->op == Expr::Op::Variable) return repl;
    if (!n->a) return n;
    Expr::NodePtr a = subst_node(n->a, repl);
    Expr::NodePtr b = n->b ? subst_node(n->b, repl) : nullptr;
    if (a == n->a && b == n->b) return n;
    return make_node(n->op, n->value, std::move(a), std::move(b));
}

}  // namespace

Expr differentiate(const Expr& e) {
    if (e.empty()) throw std::invalid_argument("differentiate: empty expression");
    return Expr(diff_node(e.root()));
}

Expr substitute(const Expr& e, const Expr& replacement) {
    if (e.empty() || replacement.empty())
        throw std::invalid_argument("substitute: empty expression");
    return Expr(subst_node(e.root(), replacement.root()));
}

}  // namespace ym
