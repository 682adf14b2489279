#include "doctest.h"
#include "rps/errors.hpp"
#include "rps/operators.hpp"

#include <cmath>
#include <vector>

using namespace rps;

namespace {
std::vector<PhiOperator> catalog() {
    return {PhiOperator::laplacian(),        PhiOperator::p_laplacian(3.0),  PhiOperator::p_laplacian(1.5),
            PhiOperator::plasma(2.0, 3.0),   PhiOperator::elasticity(1.0),   PhiOperator::plasticity(2.0, 1.0),
            PhiOperator::newtonian(0.5, 1.0), PhiOperator::custom(Expr::parse("1 + t"))};
}
}  // namespace

TEST_SUITE("operators") {

TEST_CASE("flux values") {
    CHECK(PhiOperator::laplacian().h(2.5) == 2.5);
    CHECK(PhiOperator::plasma(2, 3).h(2.0) == doctest::Approx(6.0));
    CHECK(PhiOperator::plasma(2, 3).phi(2.0) == doctest::Approx(3.0));
    CHECK(PhiOperator::p_laplacian(3).h(3.0) == doctest::Approx(9.0));
    for (const auto& op : catalog()) CHECK(op.h(0.0) == 0.0);
}

TEST_CASE("inverse values") {
    CHECK(PhiOperator::plasma(2, 3).h_inverse(6.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(PhiOperator::laplacian().h_inverse(3.7) == 3.7);
    CHECK(PhiOperator::p_laplacian(3).h_inverse(9.0) == doctest::Approx(3.0).epsilon(1e-12));
    for (const auto& op : catalog()) CHECK(op.h_inverse(0.0) == 0.0);
}

TEST_CASE("parameter constraints") {
    CHECK_THROWS_AS(PhiOperator::elasticity(0.4), ConfigError);
    CHECK_THROWS_AS(PhiOperator::p_laplacian(1.0), ConfigError);
    CHECK_THROWS_AS(PhiOperator::plasma(3.0, 2.0), ConfigError);
    CHECK_THROWS_AS(PhiOperator::plasticity(1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(PhiOperator::newtonian(1.5, 1.0), ConfigError);
    CHECK_THROWS_AS(make_operator(OperatorSpec{"nonsense", 0, 0, ""}), ConfigError);
    CHECK_THROWS_AS(PhiOperator::custom(Expr::parse("exp(-t)*0 - 1")), ConfigError);
}

TEST_CASE("make_operator by name") {
    const PhiOperator op = make_operator(OperatorSpec{"plasma", 2, 3, ""});
    CHECK(op.family() == OperatorFamily::Plasma);
    CHECK(op.h(1.0) == doctest::Approx(2.0));
    CHECK(make_operator(OperatorSpec{"custom", 0, 0, "t^k"}, {{"k", 1.0}}).h(2.0) == doctest::Approx(4.0));
}

TEST_CASE("round trip and monotone inverse on the catalog") {
    for (const auto& op : catalog()) {
        CAPTURE(op.describe());
        double prev = -1.0;
        for (int k = 0; k <= 200; ++k) {
            const double t = std::pow(10.0, -6.0 + 12.0 * k / 200.0);
            CHECK(std::abs(op.h_inverse(op.h(t)) - t) / t <= 1e-10);
            const double s = std::pow(10.0, -6.0 + 12.0 * k / 200.0);
            const double x = op.h_inverse(s);
            CHECK(x >= prev);
            prev = x;
        }
        CHECK(validate_operator(op).ok());
    }
}

TEST_CASE("custom operator with bounded flux is rejected") {
    // h(t) = t / (1 + t)^2 is not monotone
    CHECK_THROWS_AS(PhiOperator::custom(Expr::parse("1/(1+t)^2")), ConfigError);
}

TEST_CASE("derived growth exponents") {
    const auto pl = derive_envelopes(PhiOperator::p_laplacian(3.0));
    CHECK(pl.growth.l == doctest::Approx(3.0).epsilon(1e-4));
    CHECK(pl.growth.m == doctest::Approx(3.0).epsilon(1e-4));
    CHECK(pl.envelopes.theta_bar(8.0) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-4));

    const auto pz = derive_envelopes(PhiOperator::plasma(2.0, 3.0));
    CHECK(pz.growth.l >= 2.0 - 1e-3);
    CHECK(pz.growth.l <= 2.0 + 1e-3);
    CHECK(pz.growth.m >= 3.0 - 1e-3);
    CHECK(pz.growth.m <= 3.0 + 1e-3);

    // the sandwich with psi = h^{-1} needs theta(t) = t for the identity flux
    const auto lp = derive_envelopes(PhiOperator::laplacian());
    CHECK(lp.growth.l == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(lp.envelopes.theta_bar(4.0) == doctest::Approx(4.0).epsilon(1e-5));
    CHECK(lp.envelopes.theta_under(4.0) == doctest::Approx(4.0).epsilon(1e-5));
    CHECK(lp.envelopes.psi_bar(3.0) == doctest::Approx(3.0));
}

TEST_CASE("envelope sandwich holds on the catalog") {
    for (const auto& op : catalog()) {
        CAPTURE(op.describe());
        const auto d = derive_envelopes(op);
        const IneqCheck ic = check_envelope_inequality(op, d.envelopes);
        CHECK(ic.samples == 64u * 64u);
        CHECK(ic.violations == 0u);
    }
}

}
