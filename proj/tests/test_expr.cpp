#include "doctest.h"
#include "rps/errors.hpp"
#include "rps/expr.hpp"

#include <cmath>

using rps::Expr;

TEST_SUITE("expr") {

TEST_CASE("evaluation of simple expressions") {
    CHECK(Expr::parse("r^2 + 1")(2.0) == doctest::Approx(5.0));
    CHECK(Expr::parse("min(r, 4)")(9.0) == 4.0);
    CHECK(Expr::parse("max(r, 4)")(1.0) == 4.0);
    CHECK(Expr::parse("asinh(r)")(0.0) == 0.0);
    CHECK(Expr::parse("6/(1+r^2)")(1.0) == doctest::Approx(3.0));
    CHECK(Expr::parse("2^3^2")(0.0) == 512.0);
    CHECK(Expr::parse("-2^2")(0.0) == -4.0);
    CHECK(Expr::parse("exp(ln(x))")(3.0) == doctest::Approx(3.0));
    CHECK(Expr::parse("sqrt(t) * sinh(0) + abs(-1)")(4.0) == 1.0);
    CHECK(Expr::parse("pi")(0.0) == doctest::Approx(std::acos(-1.0)));
}

TEST_CASE("all variable spellings are the same variable") {
    for (const char* v : {"r", "t", "s", "x"}) CHECK(Expr::parse(std::string(v) + "*2")(3.0) == 6.0);
}

TEST_CASE("parameters are substituted at parse time") {
    const Expr e = Expr::parse("(1+r)^(-sigma)", {{"sigma", 2.0}});
    CHECK(e(1.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(Expr::parse("(1+r)^(-sigma)"), rps::ParseError);
}

TEST_CASE("syntax errors report the offset") {
    try {
        Expr::parse("r +");
        FAIL("expected a parse error");
    } catch (const rps::ParseError& e) {
        CHECK(e.offset() == 3);
    }
    CHECK_THROWS_AS(Expr::parse(""), rps::ParseError);
    CHECK_THROWS_AS(Expr::parse("(r"), rps::ParseError);
    CHECK_THROWS_AS(Expr::parse("foo(r)"), rps::ParseError);
    CHECK_THROWS_AS(Expr::parse("min(r)"), rps::ParseError);
    CHECK_THROWS_AS(Expr::parse("r r"), rps::ParseError);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(Expr::parse("1/r")(0.0), rps::DomainError);
    CHECK_THROWS_AS(Expr::parse("ln(r)")(0.0), rps::DomainError);
    CHECK_THROWS_AS(Expr::parse("sqrt(r-1)")(0.0), rps::DomainError);
    CHECK_THROWS_AS(Expr::parse("exp(r)")(1e4), rps::DomainError);
    CHECK_THROWS_AS(Expr::parse("r")(-1.0), rps::DomainError);
}

TEST_CASE("to_string round-trips to an equal tree") {
    for (const char* src : {"r^2 + 1", "-(1+r)^(-2.5)", "min(r, 4)/max(1, sqrt(r))", "6/(1+r^2)", "2^3^2",
                            "asinh(r)^2*r^(-0.5)", "1e-3*r - -r"}) {
        const Expr e = Expr::parse(src);
        const Expr back = Expr::parse(e.to_string());
        CHECK(e == back);
        for (double x : {0.5, 1.0, 2.0}) CHECK(back(x) == e(x));
    }
}

TEST_CASE("is_constant") {
    CHECK(Expr::parse("2*pi + 1").is_constant());
    CHECK_FALSE(Expr::parse("1 + 0*r").is_constant());
}

}
