#include "doctest.h"
#include "rps/classifier.hpp"

#include <string>

using namespace rps;

namespace {
ProblemSpec linear_spec(const std::string& a1, const std::string& a2) {
    ProblemInput in;
    in.a[0] = a1;
    in.a[1] = a2;
    return assemble(in);
}

Classification run(const ProblemSpec& spec) { return classify(spec, build_report(spec), check_hypotheses(spec)); }

// A report with every entry forced to the given kinds.
CriteriaReport synthetic(LimitKind pbar, LimitKind punder, LimitKind h) {
    CriteriaReport rep;
    auto add = [&](const char* name, LimitKind k) {
        FunctionalEntry e;
        e.name = name;
        e.available = true;
        e.verdict.kind = k;
        e.verdict.value = k == LimitKind::Finite ? 1.0 : 1e9;
        rep.entries.push_back(e);
    };
    add("Pbar12", pbar);
    add("Pbar21", pbar);
    add("Punder12", punder);
    add("Punder21", punder);
    add("H12", h);
    add("H21", h);
    add("M1plus", LimitKind::Divergent);
    add("M2plus", LimitKind::Divergent);
    return rep;
}
}  // namespace

TEST_SUITE("classifier") {

TEST_CASE("Kleene connectives") {
    CHECK(tri_and(Tri::True, Tri::Unknown) == Tri::Unknown);
    CHECK(tri_and(Tri::False, Tri::Unknown) == Tri::False);
    CHECK(tri_or(Tri::True, Tri::Unknown) == Tri::True);
    CHECK(tri_or(Tri::False, Tri::Unknown) == Tri::Unknown);
}

TEST_CASE("unit weights are both large") {
    const Classification c = run(linear_spec("1", "1"));
    CHECK(c.verdict == Verdict::BothLarge);
    CHECK(c.matched_rule == "th1");
    CHECK_FALSE(c.evidence.empty());
}

TEST_CASE("integrable weights are both bounded") {
    const Classification c = run(linear_spec("(1+r)^(-4)", "(1+r)^(-4)"));
    CHECK(c.verdict == Verdict::BothBounded);
    CHECK(c.matched_rule == "th12");
}

TEST_CASE("mixed weights") {
    const Classification c = run(linear_spec("(1+r)^(-6)", "1"));
    CHECK(c.verdict == Verdict::UBoundedVLarge);
    CHECK(c.matched_rule == "th13-1");
    const Classification d = run(linear_spec("1", "(1+r)^(-6)"));
    CHECK(d.verdict == Verdict::ULargeVBounded);
    CHECK(d.matched_rule == "th13-2");
}

TEST_CASE("an Indeterminate probe is propagated") {
    const ProblemSpec spec = linear_spec("1", "1");
    const HypothesisReport hyp = check_hypotheses(spec);
    const Classification c =
        classify(spec, synthetic(LimitKind::Indeterminate, LimitKind::Indeterminate, LimitKind::Divergent), hyp);
    CHECK(c.verdict == Verdict::Indeterminate);
    CHECK(c.matched_rule != "none");
}

TEST_CASE("bare existence fallback") {
    const ProblemSpec spec = linear_spec("1", "1");
    const HypothesisReport hyp = check_hypotheses(spec);
    // Pbar divergent, Punder finite: no sharp rule can fire
    const Classification c = classify(spec, synthetic(LimitKind::Divergent, LimitKind::Finite, LimitKind::Divergent), hyp);
    CHECK(c.verdict == Verdict::ExistsUnclassified);
    CHECK(c.matched_rule == "th1-existence");
}

TEST_CASE("finite H with small P selects the bounded-with-bounds rule") {
    ProblemInput in;
    in.f[0].gamma = 2.0;
    in.f[1].gamma = 2.0;
    in.a[0] = in.a[1] = "0.01*(1+r)^(-4)";
    const ProblemSpec spec = assemble(in);
    const Classification c = run(spec);
    CHECK(c.verdict == Verdict::BothBounded);
    CHECK((c.matched_rule == "th2" || c.matched_rule == "th12"));
}

TEST_CASE("determinism") {
    const ProblemSpec spec = linear_spec("(1+r)^(-3)", "1/(1+r^2)");
    const CriteriaReport rep = build_report(spec);
    const HypothesisReport hyp = check_hypotheses(spec);
    const Classification a = classify(spec, rep, hyp);
    const Classification b = classify(spec, rep, hyp);
    CHECK(a.verdict == b.verdict);
    CHECK(a.matched_rule == b.matched_rule);
    REQUIRE(a.evidence.size() == b.evidence.size());
    for (std::size_t i = 0; i < a.evidence.size(); ++i) CHECK(a.evidence[i].detail == b.evidence[i].detail);
}

TEST_CASE("cross check agrees with the solver") {
    const ProblemSpec large = linear_spec("1", "1");
    const Classification cl = run(large);
    const RadialSolution sl = solve(large, make_grid(16.0, 1e-2));
    const ConsistencyReport rl = cross_check(large, cl, sl);
    CHECK(rl.u.expected == "large");
    CHECK(rl.agree());
    CHECK(sl.u.back() > sl.u[800]);

    const ProblemSpec zero = linear_spec("0", "0");
    const Classification cz = run(zero);
    const ConsistencyReport rz = cross_check(zero, cz, solve(zero, make_grid(2.0, 1e-2)));
    CHECK(rz.agree());

    const ProblemSpec bounded = linear_spec("(1+r)^(-5)", "(1+r)^(-5)");
    const Classification cb = run(bounded);
    const ConsistencyReport rb = cross_check(bounded, cb, solve(bounded, make_grid(20.0, 1e-2)));
    CHECK(rb.u.expected == "bounded");
    CHECK(rb.agree());
}

TEST_CASE("converse advisory on coincident data") {
    const Classification c = run(linear_spec("1", "1"));
    CHECK(c.converse.status != "inconsistent");
}

}
