#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace rps {

/// Immutable expression tree over one nonnegative real variable.
///
/// Grammar (lowest to highest precedence):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?          (right associative)
///   primary := number | variable | name | func '(' expr (',' expr)* ')' | '(' expr ')'
///
/// The variable may be spelled r, t, s or x. Named parameters are replaced by
/// their numeric value while parsing. Functions: exp ln sqrt sinh asinh abs
/// (one argument), min max (two arguments). The constant `pi` is predefined.
///
/// Copies share the tree; evaluation is const and touches no shared state.
class Expr {
public:
    struct Node;

    Expr();  // the literal 0

    static Expr parse(std::string_view source, const std::map<std::string, double>& params = {});
    static Expr constant(double value);
    static Expr variable();

    /// Throws DomainError when `x` is outside the domain or the value is not finite.
    double operator()(double x) const;
    double eval(double x) const { return (*this)(x); }

    /// Fully parenthesized source that re-parses to a structurally equal tree.
    std::string to_string() const;

    /// True when the tree never references the variable.
    bool is_constant() const;

    friend bool operator==(const Expr& a, const Expr& b);

    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    const Node& root() const { return *root_; }

private:
    std::shared_ptr<const Node> root_;
};

}  // namespace rps
