#ifndef FRACBVP_EXPR_HPP
#define FRACBVP_EXPR_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>

#include "fracbvp/common.hpp"

namespace fracbvp::expr {

enum class NodeKind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Func };

enum class FuncId { Exp, Cosh, Sinh, Sqrt, Log, Abs };

inline const char* func_name(FuncId f) {
    switch (f) {
        case FuncId::Exp: return "exp";
        case FuncId::Cosh: return "cosh";
        case FuncId::Sinh: return "sinh";
        case FuncId::Sqrt: return "sqrt";
        case FuncId::Log: return "log";
        case FuncId::Abs: return "abs";
    }
    return "?";
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    double value = 0.0;           // Constant
    FuncId func = FuncId::Exp;    // Func
    NodePtr lhs, rhs;             // rhs empty for unary nodes
};

/// Immutable expression in a single variable (`t` or `u`).
/// The function catalog is closed: exp, cosh, sinh, sqrt, log, abs.
class Expr {
public:
    Expr() = default;

    static Expr constant(double v) {
        return Expr(std::make_shared<Node>(Node{NodeKind::Constant, v}), 'u');
    }
    static Expr variable(char var) {
        check_variable(var);
        return Expr(std::make_shared<Node>(Node{NodeKind::Variable}), var);
    }
    static Expr negate(const Expr& e) {
        return Expr(std::make_shared<Node>(
                        Node{NodeKind::Negate, 0.0, FuncId::Exp, e.root_}),
                    e.var_);
    }
    static Expr binary(NodeKind op, const Expr& l, const Expr& r) {
        return Expr(std::make_shared<Node>(
                        Node{op, 0.0, FuncId::Exp, l.root_, r.root_}),
                    l.root_->kind == NodeKind::Constant && has_var(*r.root_) ? r.var_
                                                                             : l.var_);
    }
    static Expr call(FuncId f, const Expr& arg) {
        return Expr(std::make_shared<Node>(
                        Node{NodeKind::Func, 0.0, f, arg.root_}),
                    arg.var_);
    }

    bool empty() const { return !root_; }
    char variable_name() const { return var_; }
    bool is_variable() const { return root_ && root_->kind == NodeKind::Variable; }
    const NodePtr& root() const { return root_; }

    double operator()(double x) const;
    std::string to_string() const;
    bool same_structure(const Expr& other) const {
        return same_structure(root_.get(), other.root_.get());
    }

private:
    friend class Parser;
    friend Expr parse(std::string_view, char);

    Expr(NodePtr root, char var) : root_(std::move(root)), var_(var) {}

    static void check_variable(char var) {
        require(var == 't' || var == 'u', "expression variable must be 't' or 'u'");
    }
    static bool has_var(const Node& n) {
        if (n.kind == NodeKind::Variable) return true;
        if (n.lhs && has_var(*n.lhs)) return true;
        return n.rhs && has_var(*n.rhs);
    }
    static bool same_structure(const Node* a, const Node* b) {
        if (!a || !b) return a == b;
        if (a->kind != b->kind) return false;
        if (a->kind == NodeKind::Constant && a->value != b->value) return false;
        if (a->kind == NodeKind::Func && a->func != b->func) return false;
        return same_structure(a->lhs.get(), b->lhs.get()) &&
               same_structure(a->rhs.get(), b->rhs.get());
    }

    NodePtr root_;
    char var_ = 'u';
};

namespace detail {

inline double eval_node(const Node& n, double x) {
    switch (n.kind) {
        case NodeKind::Constant: return n.value;
        case NodeKind::Variable: return x;
        case NodeKind::Negate: return -eval_node(*n.lhs, x);
        case NodeKind::Add: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
        case NodeKind::Sub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
        case NodeKind::Mul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
        case NodeKind::Div: {
            const double den = eval_node(*n.rhs, x);
            if (den == 0.0) throw DomainError("division by zero");
            return eval_node(*n.lhs, x) / den;
        }
        case NodeKind::Pow: {
            const double base = eval_node(*n.lhs, x);
            const double expo = eval_node(*n.rhs, x);
            if (base < 0.0 && !nearly_integer(expo, 0.0))
                throw DomainError("fractional power of negative base");
            if (base == 0.0 && expo < 0.0) throw DomainError("zero to a negative power");
            return std::pow(base, expo);
        }
        case NodeKind::Func: {
            const double v = eval_node(*n.lhs, x);
            switch (n.func) {
                case FuncId::Exp: return std::exp(v);
                case FuncId::Cosh: return std::cosh(v);
                case FuncId::Sinh: return std::sinh(v);
                case FuncId::Sqrt:
                    if (v < 0.0) throw DomainError("sqrt of a negative number");
                    return std::sqrt(v);
                case FuncId::Log:
                    if (v <= 0.0) throw DomainError("log of a non-positive number");
                    return std::log(v);
                case FuncId::Abs: return std::fabs(v);
            }
        }
    }
    throw Error("corrupt expression node");
}

inline int precedence(const Node& n) {
    switch (n.kind) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Negate: return 3;
        case NodeKind::Pow: return 4;
        default: return 5;
    }
}

inline void print_node(const Node& n, char var, std::string& out);

inline void print_child(const Node& child, char var, bool need_parens, std::string& out) {
    if (need_parens) out += '(';
    print_node(child, var, out);
    if (need_parens) out += ')';
}

inline void print_node(const Node& n, char var, std::string& out) {
    const int p = precedence(n);
    switch (n.kind) {
        case NodeKind::Constant: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            out += buf;
            return;
        }
        case NodeKind::Variable: out += var; return;
        case NodeKind::Negate:
            out += '-';
            print_child(*n.lhs, var, precedence(*n.lhs) < p, out);
            return;
        case NodeKind::Func:
            out += func_name(n.func);
            out += '(';
            print_node(*n.lhs, var, out);
            out += ')';
            return;
        case NodeKind::Pow:
            // right-associative; the exponent may itself be a power or negation
            print_child(*n.lhs, var, precedence(*n.lhs) <= p, out);
            out += '^';
            print_child(*n.rhs, var, precedence(*n.rhs) < p, out);
            return;
        default: {
            const char op = n.kind == NodeKind::Add ? '+'
                          : n.kind == NodeKind::Sub ? '-'
                          : n.kind == NodeKind::Mul ? '*'
                                                    : '/';
            print_child(*n.lhs, var, precedence(*n.lhs) < p, out);
            out += op;
            print_child(*n.rhs, var, precedence(*n.rhs) <= p, out);
            return;
        }
    }
}

} // namespace detail

inline double Expr::operator()(double x) const {
    require(root_ != nullptr, "evaluating an empty expression");
    const double v = detail::eval_node(*root_, x);
    if (!std::isfinite(v)) throw DomainError("expression evaluated to a non-finite value");
    return v;
}

inline std::string Expr::to_string() const {
    if (!root_) return "";
    std::string out;
    detail::print_node(*root_, var_, out);
    return out;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser. Precedence, tightest first: ^ (right-assoc),
// unary -, * /, + -. No implicit multiplication; numbers are decimal
// literals with an optional exponent.
// ---------------------------------------------------------------------------

class Parser {
public:
    Parser(std::string_view src, char var) : src_(src), var_(var) {}

    Expr run() {
        Expr::check_variable(var_);
        if (src_.empty()) throw ParseError("empty expression", 0);
        skip_ws();
        NodePtr e = parse_sum();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError("unexpected trailing input", pos_);
        return Expr(std::move(e), var_);
    }

private:
    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            skip_ws();
            if (peek() == '+' || peek() == '-') {
                const char op = take();
                NodePtr rhs = parse_product();
                lhs = make(op == '+' ? NodeKind::Add : NodeKind::Sub, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_factor();
        for (;;) {
            skip_ws();
            if (peek() == '*' || peek() == '/') {
                const char op = take();
                NodePtr rhs = parse_factor();
                lhs = make(op == '*' ? NodeKind::Mul : NodeKind::Div, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_factor() {
        skip_ws();
        if (peek() == '-') {
            take();
            NodePtr inner = parse_factor();
            return make(NodeKind::Negate, inner, nullptr);
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        skip_ws();
        if (peek() == '^') {
            take();
            NodePtr expo = parse_factor(); // right-assoc, allows 2^-3
            return make(NodeKind::Pow, base, expo);
        }
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        const std::size_t start = pos_;
        const char c = peek();
        if (c == '(') {
            take();
            NodePtr e = parse_sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string ident;
            while (std::isalpha(static_cast<unsigned char>(peek())))
                ident += take();
            skip_ws();
            if (peek() == '(') {
                take();
                const FuncId f = lookup_func(ident, start);
                NodePtr arg = parse_sum();
                expect(')');
                auto n = std::make_shared<Node>(Node{NodeKind::Func, 0.0, f, arg});
                return n;
            }
            if (ident.size() == 1 && (ident[0] == 't' || ident[0] == 'u')) {
                if (ident[0] != var_)
                    throw ParseError(std::string("wrong variable '") + ident[0] +
                                         "' (this expression is in '" + var_ + "')",
                                     start);
                return std::make_shared<Node>(Node{NodeKind::Variable});
            }
            throw ParseError("unknown identifier '" + ident + "'", start);
        }
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) take();
        if (peek() == '.') {
            take();
            while (std::isdigit(static_cast<unsigned char>(peek()))) take();
        }
        if (pos_ == start) throw ParseError("malformed number", start);
        if (peek() == 'e' || peek() == 'E') {
            const std::size_t mark = pos_;
            take();
            if (peek() == '+' || peek() == '-') take();
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw ParseError("malformed exponent", mark);
            while (std::isdigit(static_cast<unsigned char>(peek()))) take();
        }
        double v = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (res.ec != std::errc{})
            throw ParseError("malformed number", start);
        return std::make_shared<Node>(Node{NodeKind::Constant, v});
    }

    FuncId lookup_func(const std::string& name, std::size_t at) {
        if (name == "exp") return FuncId::Exp;
        if (name == "cosh") return FuncId::Cosh;
        if (name == "sinh") return FuncId::Sinh;
        if (name == "sqrt") return FuncId::Sqrt;
        if (name == "log") return FuncId::Log;
        if (name == "abs") return FuncId::Abs;
        throw ParseError("unknown function '" + name + "'", at);
    }

    static NodePtr make(NodeKind k, NodePtr l, NodePtr r) {
        return std::make_shared<Node>(Node{k, 0.0, FuncId::Exp, std::move(l), std::move(r)});
    }

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    char take() { return src_[pos_++]; }
    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
    }
    void expect(char c) {
        skip_ws();
        if (peek() != c)
            throw ParseError(std::string("expected '") + c + "'", pos_);
        take();
    }

    std::string_view src_;
    char var_;
    std::size_t pos_ = 0;
};

inline Expr parse(std::string_view source, char variable) {
    return Parser(source, variable).run();
}

inline double eval(const Expr& e, double x) { return e(x); }

} // namespace fracbvp::expr

#endif // FRACBVP_EXPR_HPP
