#include "doctest.h"
#include "rps/criteria.hpp"

#include <cmath>

using namespace rps;

namespace {
ProblemSpec linear_spec(const char* a1, const char* a2) {
    ProblemInput in;
    in.a[0] = a1;
    in.a[1] = a2;
    return assemble(in);
}
}  // namespace

TEST_SUITE("criteria") {

TEST_CASE("A for the unit weight") {
    const ProblemSpec spec = linear_spec("1", "1");
    CHECK(eval_A(spec, 1, Variant::Bar, 3.0) == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(eval_A(spec, 2, Variant::Under, 3.0) <= eval_A(spec, 2, Variant::Bar, 3.0));
    const ProblemSpec zero = linear_spec("0", "0");
    CHECK(eval_A(zero, 1, Variant::Bar, 5.0) == 0.0);
}

TEST_CASE("nested P for the unit-weight linear system") {
    const ProblemSpec spec = linear_spec("1", "1");
    CHECK(eval_P(spec, Pair::P12, Variant::Bar, 1.0) == doctest::Approx(0.175).epsilon(1e-7));
    CHECK(eval_P(spec, Pair::P21, Variant::Bar, 2.0) == doctest::Approx(4.0 / 6.0 + 16.0 / 120.0).epsilon(1e-7));
    // c_under = m = 1/2 scales the inner integrand
    CHECK(eval_P(spec, Pair::P12, Variant::Under, 1.0) == doctest::Approx(0.0875).epsilon(1e-7));
    const ProblemSpec zero = linear_spec("0", "0");
    for (Pair p : {Pair::P12, Pair::P21})
        for (Variant v : {Variant::Bar, Variant::Under}) CHECK(eval_P(zero, p, v, 3.0) == 0.0);
}

TEST_CASE("under never exceeds bar") {
    for (const char* a : {"1", "(1+r)^(-3)", "r/(1+r^3)", "exp(-r)"}) {
        const ProblemSpec spec = linear_spec(a, "1/(1+r)");
        const RadialGrid g = make_grid(5.0, 1e-2);
        for (Pair p : {Pair::P12, Pair::P21}) {
            const auto lo = P_curve(spec, p, Variant::Under, g.nodes);
            const auto hi = P_curve(spec, p, Variant::Bar, g.nodes);
            for (std::size_t i = 0; i < g.size(); ++i) {
                CHECK(lo[i] <= hi[i] + 1e-14);
                if (i > 0) CHECK(hi[i] >= hi[i - 1]);
            }
        }
    }
}

TEST_CASE("bar and under coincide under identical data") {
    ProblemInput in;
    in.m[0] = 0.5;
    in.m[1] = 0.5;
    in.f[0].family = in.f[1].family = "custom";
    in.f[0].expr = in.f[1].expr = "t";
    in.f[0].c_bar = in.f[1].c_bar = 0.5;
    in.f[0].g = in.f[1].g = "t";
    in.f[0].xi_bar = in.f[1].xi_bar = "t";
    in.f[0].c_under = in.f[1].c_under = 0.5;
    in.f[0].xi_under = in.f[1].xi_under = "t";
    in.a[0] = "1/(1+r^2)";
    const ProblemSpec spec = assemble(in);
    const RadialGrid g = make_grid(4.0, 1e-2);
    const auto lo = P_curve(spec, Pair::P12, Variant::Under, g.nodes);
    const auto hi = P_curve(spec, Pair::P12, Variant::Bar, g.nodes);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(lo[i] == doctest::Approx(hi[i]).epsilon(1e-12));
}

TEST_CASE("H for the identity toy is the logarithm") {
    const ProblemSpec spec = linear_spec("1", "1");
    const HFunctional H = make_H(spec, Pair::P12);
    CHECK(H.anchor() == 1.0);
    CHECK(H.value(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(H.value(100.0) == doctest::Approx(std::log(100.0)).epsilon(1e-5));
    for (double r : {1.5, 3.0, 17.0, 250.0}) {
        CHECK(H.derivative(r) > 0.0);
        CHECK(std::abs(H.inverse(H.value(r)) - r) <= 1e-8 * r);
    }
    CHECK(H.limit(ProbeSettings{}).divergent());
}

TEST_CASE("H converges for superlinear nonlinearities") {
    ProblemInput in;
    in.f[1].gamma = 2.0;
    const ProblemSpec spec = assemble(in);
    const HFunctional H = make_H(spec, Pair::P12);
    const LimitVerdict v = H.limit(ProbeSettings{});
    CHECK(v.finite());
    CHECK(v.value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::isinf(H.inverse(2.0)));
}

TEST_CASE("M plus") {
    CHECK(eval_M_plus(linear_spec("1", "1"), 1).divergent());
    const LimitVerdict f = eval_M_plus(linear_spec("1", "(1+r)^(-4)"), 1);
    CHECK(f.finite());
    // A-limit equals the moment int r a dr / (N - 2) = 1/6
    CHECK(f.value == doctest::Approx(1.0 / 6.0).epsilon(1e-4));
    const LimitVerdict z = eval_M_plus(linear_spec("1", "0"), 1);
    CHECK(z.finite());
    CHECK(z.value == 0.0);
}

TEST_CASE("A limit matches the moment formula") {
    for (const char* a : {"(1+r^2)^(-2)", "(1+r)^(-5)", "exp(-r)", "r*exp(-r^2)"}) {
        CAPTURE(a);
        const ProblemSpec spec = linear_spec("1", a);
        const LimitVerdict v = eval_M_plus(spec, 1);
        REQUIRE(v.finite());
        // moment by a long trapezoid on a fine grid
        const RadialGrid g = make_grid(400.0, 1e-3);
        std::vector<double> w;
        for (double r : g.nodes) w.push_back(r * spec.side(2).a(r));
        const double moment = cumulative_integral(w, g.nodes).back();
        CHECK(std::abs(v.value - moment) <= 1e-4 * moment);
    }
}

TEST_CASE("report for zero weights") {
    const CriteriaReport rep = build_report(linear_spec("0", "0"));
    for (const char* name : {"Pbar12", "Pbar21", "Punder12", "Punder21"}) {
        CAPTURE(name);
        const FunctionalEntry* e = rep.find(name);
        REQUIRE(e != nullptr);
        CHECK(e->verdict.finite());
        CHECK(e->verdict.value == 0.0);
    }
    CHECK(rep.find("H12")->verdict.divergent());
    CHECK(rep.a_anchor == 1.0);
    CHECK(rep.b_anchor == 1.0);
}

TEST_CASE("report for the unit-weight linear system") {
    const CriteriaReport rep = build_report(linear_spec("1", "1"));
    CHECK(rep.find("Punder12")->verdict.divergent());
    CHECK(rep.find("Punder21")->verdict.divergent());
    CHECK(rep.find("M1plus")->verdict.divergent());
    CHECK_FALSE(rep.mplus_swap[0]);
    CHECK(rep.find("Pbar12_mplus") == nullptr);
}

TEST_CASE("substituted entries appear when M plus is finite") {
    const CriteriaReport rep = build_report(linear_spec("(1+r)^(-4)", "(1+r)^(-4)"));
    CHECK(rep.mplus_swap[0]);
    CHECK(rep.mplus_swap[1]);
    REQUIRE(rep.find("Pbar12_mplus") != nullptr);
    CHECK(rep.find("Pbar12_mplus")->verdict.finite());
    CHECK(rep.M_prime[0] > 1.0);
}

}
