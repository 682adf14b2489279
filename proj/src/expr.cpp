#include "rps/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <variant>
#include <vector>

#include "rps/errors.hpp"

namespace rps {

namespace {

enum class UnaryOp { Neg };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Exp, Ln, Sqrt, Sinh, Asinh, Abs, Min, Max };

struct FuncInfo {
    std::string_view name;
    Func func;
    int arity;
};

constexpr std::array<FuncInfo, 8> kFunctions{{
    {"exp", Func::Exp, 1},
    {"ln", Func::Ln, 1},
    {"sqrt", Func::Sqrt, 1},
    {"sinh", Func::Sinh, 1},
    {"asinh", Func::Asinh, 1},
    {"abs", Func::Abs, 1},
    {"min", Func::Min, 2},
    {"max", Func::Max, 2},
}};

bool is_variable_name(std::string_view name) {
    return name == "r" || name == "t" || name == "s" || name == "x";
}

}  // namespace

struct Expr::Node {
    struct Number {
        double value;
    };
    struct Variable {};
    struct Unary {
        UnaryOp op;
        std::shared_ptr<const Node> child;
    };
    struct Binary {
        BinaryOp op;
        std::shared_ptr<const Node> lhs, rhs;
    };
    struct Call {
        Func func;
        std::vector<std::shared_ptr<const Node>> args;
    };

    std::variant<Number, Variable, Unary, Binary, Call> data;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_number(double v) { return std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Number{v}}); }

class Parser {
public:
    Parser(std::string_view src, const std::map<std::string, double>& params) : src_(src), params_(params) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
        NodePtr e = expr();
        skip_ws();
        if (pos_ < src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = binary(BinaryOp::Add, lhs, term());
            } else if (accept('-')) {
                lhs = binary(BinaryOp::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = binary(BinaryOp::Mul, lhs, unary());
            } else if (accept('/')) {
                lhs = binary(BinaryOp::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            NodePtr child = unary();
            // Fold negated literals so that printing a negative constant round-trips.
            if (const auto* num = std::get_if<Expr::Node::Number>(&child->data)) return make_number(-num->value);
            return std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Unary{UnaryOp::Neg, child}});
        }
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return binary(BinaryOp::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        double value = 0.0;
        const char* first = src_.data() + pos_;
        const char* last = src_.data() + src_.size();
        auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
        if (ec != std::errc{} || ptr == first) throw ParseError("malformed number", start);
        pos_ += static_cast<std::size_t>(ptr - first);
        return make_number(value);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(src_.substr(start, pos_ - start));

        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '(') {
            for (const auto& info : kFunctions) {
                if (info.name != name) continue;
                ++pos_;
                std::vector<NodePtr> args;
                args.push_back(expr());
                while (accept(',')) args.push_back(expr());
                if (!accept(')')) throw ParseError("expected ')' after arguments", pos_);
                if (static_cast<int>(args.size()) != info.arity) {
                    throw ParseError(name + " expects " + std::to_string(info.arity) + " argument(s), got " +
                                         std::to_string(args.size()),
                                     start);
                }
                return std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Call{info.func, std::move(args)}});
            }
            throw ParseError("unknown function '" + name + "'", start);
        }

        if (is_variable_name(name)) return std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Variable{}});
        if (auto it = params_.find(name); it != params_.end()) return make_number(it->second);
        if (name == "pi") return make_number(std::numbers::pi);
        throw ParseError("unknown identifier '" + name + "'", start);
    }

    static NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
        return std::make_shared<const Expr::Node>(Expr::Node{Expr::Node::Binary{op, std::move(lhs), std::move(rhs)}});
    }

    std::string_view src_;
    const std::map<std::string, double>& params_;
    std::size_t pos_ = 0;
};

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
    return v;
}

double pow_checked(double base, double exponent) {
    if (base == 0.0 && exponent < 0.0) throw DomainError("0 raised to a negative power");
    if (base < 0.0 && exponent != std::trunc(exponent)) throw DomainError("negative base with non-integer exponent");
    return checked(std::pow(base, exponent), "^");
}

double evaluate(const Expr::Node& node, double x) {
    return std::visit(
        [x](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Node::Number>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Expr::Node::Variable>) {
                return x;
            } else if constexpr (std::is_same_v<T, Expr::Node::Unary>) {
                return -evaluate(*n.child, x);
            } else if constexpr (std::is_same_v<T, Expr::Node::Binary>) {
                const double a = evaluate(*n.lhs, x);
                const double b = evaluate(*n.rhs, x);
                switch (n.op) {
                    case BinaryOp::Add: return checked(a + b, "+");
                    case BinaryOp::Sub: return checked(a - b, "-");
                    case BinaryOp::Mul: return checked(a * b, "*");
                    case BinaryOp::Div:
                        if (b == 0.0) throw DomainError("division by zero");
                        return checked(a / b, "/");
                    case BinaryOp::Pow: return pow_checked(a, b);
                }
                return 0.0;
            } else {
                const double a = evaluate(*n.args[0], x);
                switch (n.func) {
                    case Func::Exp: return checked(std::exp(a), "exp");
                    case Func::Ln:
                        if (a <= 0.0) throw DomainError("ln of nonpositive argument");
                        return std::log(a);
                    case Func::Sqrt:
                        if (a < 0.0) throw DomainError("sqrt of negative argument");
                        return std::sqrt(a);
                    case Func::Sinh: return checked(std::sinh(a), "sinh");
                    case Func::Asinh: return std::asinh(a);
                    case Func::Abs: return std::abs(a);
                    case Func::Min: return std::min(a, evaluate(*n.args[1], x));
                    case Func::Max: return std::max(a, evaluate(*n.args[1], x));
                }
                return 0.0;
            }
        },
        node.data);
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (v < 0.0) return "(" + s + ")";
    return s;
}

void print(const Expr::Node& node, std::string& out) {
    std::visit(
        [&out](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Node::Number>) {
                out += format_number(n.value);
            } else if constexpr (std::is_same_v<T, Expr::Node::Variable>) {
                out += 'r';
            } else if constexpr (std::is_same_v<T, Expr::Node::Unary>) {
                out += "(-";
                print(*n.child, out);
                out += ')';
            } else if constexpr (std::is_same_v<T, Expr::Node::Binary>) {
                static constexpr std::array<char, 5> sym{'+', '-', '*', '/', '^'};
                out += '(';
                print(*n.lhs, out);
                out += sym[static_cast<std::size_t>(n.op)];
                print(*n.rhs, out);
                out += ')';
            } else {
                for (const auto& info : kFunctions) {
                    if (info.func == n.func) out += info.name;
                }
                out += '(';
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i) out += ", ";
                    print(*n.args[i], out);
                }
                out += ')';
            }
        },
        node.data);
}

bool equal(const Expr::Node& a, const Expr::Node& b) {
    if (a.data.index() != b.data.index()) return false;
    return std::visit(
        [&b](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            const auto& m = std::get<T>(b.data);
            if constexpr (std::is_same_v<T, Expr::Node::Number>) {
                return n.value == m.value;
            } else if constexpr (std::is_same_v<T, Expr::Node::Variable>) {
                return true;
            } else if constexpr (std::is_same_v<T, Expr::Node::Unary>) {
                return n.op == m.op && equal(*n.child, *m.child);
            } else if constexpr (std::is_same_v<T, Expr::Node::Binary>) {
                return n.op == m.op && equal(*n.lhs, *m.lhs) && equal(*n.rhs, *m.rhs);
            } else {
                if (n.func != m.func || n.args.size() != m.args.size()) return false;
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (!equal(*n.args[i], *m.args[i])) return false;
                }
                return true;
            }
        },
        a.data);
}

bool references_variable(const Expr::Node& node) {
    return std::visit(
        [](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Node::Number>) {
                return false;
            } else if constexpr (std::is_same_v<T, Expr::Node::Variable>) {
                return true;
            } else if constexpr (std::is_same_v<T, Expr::Node::Unary>) {
                return references_variable(*n.child);
            } else if constexpr (std::is_same_v<T, Expr::Node::Binary>) {
                return references_variable(*n.lhs) || references_variable(*n.rhs);
            } else {
                for (const auto& arg : n.args) {
                    if (references_variable(*arg)) return true;
                }
                return false;
            }
        },
        node.data);
}

}  // namespace

Expr::Expr() : root_(make_number(0.0)) {}

Expr Expr::parse(std::string_view source, const std::map<std::string, double>& params) {
    return Expr(Parser(source, params).parse());
}

Expr Expr::constant(double value) { return Expr(make_number(value)); }

Expr Expr::variable() { return Expr(std::make_shared<const Node>(Node{Node::Variable{}})); }

double Expr::operator()(double x) const {
    if (!(x >= 0.0)) throw DomainError("expression evaluated at negative or NaN argument");
    return evaluate(*root_, x);
}

std::string Expr::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

bool Expr::is_constant() const { return !references_variable(*root_); }

bool operator==(const Expr& a, const Expr& b) { return equal(*a.root_, *b.root_); }

}  // namespace rps
