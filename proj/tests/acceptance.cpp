// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "rps/classifier.hpp"
#include "rps/commands.hpp"
#include "rps/oracle.hpp"

using namespace rps;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const std::vector<OperatorSpec>& catalog_specs() {
    static const std::vector<OperatorSpec> ops{
        {"laplacian", 0, 0, ""},  {"p_laplacian", 3, 0, ""}, {"p_laplacian", 1.5, 0, ""}, {"plasma", 2, 3, ""},
        {"elasticity", 1, 0, ""}, {"plasticity", 2, 1, ""},  {"newtonian", 0.5, 1, ""},
    };
    return ops;
}

// 25 seeded instances drawn from operators x weights x power nonlinearities.
std::vector<ProblemInput> random_instances() {
    const std::vector<std::string> weights{"1", "(1+r)^(-2)", "2/(1+r^2)", "exp(-r)", "r/(1+r)", "0.5*(1+r)^(-4)"};
    std::mt19937 rng(20240611);
    std::uniform_int_distribution<std::size_t> pick_op(0, catalog_specs().size() - 1);
    std::uniform_int_distribution<std::size_t> pick_w(0, weights.size() - 1);
    std::uniform_real_distribution<double> gamma(0.3, 1.5);
    std::uniform_real_distribution<double> start(0.5, 2.0);
    std::vector<ProblemInput> out;
    for (int k = 0; k < 25; ++k) {
        ProblemInput in;
        in.alpha = start(rng);
        in.beta = start(rng);
        for (int s = 0; s < 2; ++s) {
            in.op[s] = catalog_specs()[pick_op(rng)];
            in.a[s] = weights[pick_w(rng)];
            in.f[s].family = "power";
            in.f[s].gamma = gamma(rng);
        }
        out.push_back(in);
    }
    return out;
}

Outcome criterion_monotone() {
    const auto t0 = std::chrono::steady_clock::now();
    const RadialGrid grid = make_grid(2.0, 1e-3);
    double worst = 0.0;
    int steps = 0;
    for (const ProblemInput& in : random_instances()) {
        const ProblemSpec spec = assemble(in);
        IterationState prev = init_state(spec, grid);
        solve(spec, grid, {}, [&](const IterationState& s) {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                worst = std::max({worst, prev.u[i] - s.u[i], prev.v[i] - s.v[i]});
            }
            prev = s;
            ++steps;
        });
    }
    const double t = seconds_since(t0);
    return {worst <= 1e-12 && t < 60.0,
            fmt("25 instances, %.0f iterates, max decrease %.3e, %.2fs", steps, worst, t)};
}

Outcome criterion_sandwich() {
    const RadialGrid grid = make_grid(2.0, 1e-3);
    double worst_upper = -HUGE_VAL, worst_lower = -HUGE_VAL;
    for (const ProblemInput& in : random_instances()) {
        const ProblemSpec spec = assemble(in);
        const auto up1 = upper_bound_curve(spec, Pair::P12, grid.nodes);
        const auto up2 = upper_bound_curve(spec, Pair::P21, grid.nodes);
        const auto lo1 = lower_bound_curve(spec, Pair::P12, grid.nodes);
        const auto lo2 = lower_bound_curve(spec, Pair::P21, grid.nodes);
        auto check_upper = [&](const IterationState& s) {
            for (std::size_t i = 0; i < grid.size(); ++i)
                worst_upper = std::max({worst_upper, s.u[i] - up1[i], s.v[i] - up2[i]});
        };
        const RadialSolution sol = solve(spec, grid, {}, check_upper);
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst_lower = std::max({worst_lower, lo1[i] - sol.u[i], lo2[i] - sol.v[i]});
    }
    return {worst_upper <= 1e-6 && worst_lower <= 1e-6,
            fmt("max(u - upper) = %.3e, max(lower - u) = %.3e", worst_upper, worst_lower)};
}

Outcome criterion_manufactured() {
    const Expr star = Expr::parse("1 + r^2");
    const RadialGrid grid = make_grid(2.0, 1e-3);
    std::string detail;
    bool pass = true;
    for (const PhiOperator& op : {PhiOperator::laplacian(), PhiOperator::p_laplacian(3.0)}) {
        const auto t0 = std::chrono::steady_clock::now();
        ManufacturedSide side;
        side.op = op;
        const ProblemSpec spec = manufactured_problem(star, star, side, side, 3, 2.0, 1e-3);
        if (op.family() == OperatorFamily::Laplacian) {
            // the computed weight must be 6/(1+r^2)
            for (double r : {0.0, 1.0, 2.0}) pass = pass && std::abs(spec.side(1).a(r) - 6.0 / (1 + r * r)) <= 1e-5;
        }
        const RadialSolution sol = solve(spec, grid, SolveOptions{1e-12, 200});
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double exact = star(grid.nodes[i]);
            err = std::max({err, std::abs(sol.u[i] - exact), std::abs(sol.v[i] - exact)});
        }
        const double t = seconds_since(t0);
        const double res = std::max(sol.residual_u, sol.residual_v);
        pass = pass && sol.converged && err <= 1e-4 && res <= 1e-5 && t < 10.0;
        detail += op.describe() + fmt(": err %.3e res %.3e %.2fs; ", err, res, t);
    }
    return {pass, detail};
}

Outcome criterion_yang() {
    const Weight a = Weight::from_expr(Expr::parse("(1+r^2)^(-2)"));
    const YangResult y = yang_check([](double t) { return t; }, a, 3);
    const double rel = std::abs(y.A_limit.value - 0.5) / 0.5;
    return {y.A_limit.finite() && rel <= 1e-4,
            "A limit " + to_string(y.A_limit.kind) + fmt(" %.10f, relative error %.3e", y.A_limit.value, rel)};
}

Outcome criterion_envelopes() {
    bool pass = true;
    std::string detail;
    for (const PhiOperator& op : {PhiOperator::plasma(2, 3), PhiOperator::elasticity(1), PhiOperator::plasticity(2, 1),
                                  PhiOperator::newtonian(0.5, 1)}) {
        const DerivedEnvelopes d = derive_envelopes(op);
        const IneqCheck ic = check_envelope_inequality(op, d.envelopes, 1e3, 64);
        pass = pass && ic.violations == 0 && ic.samples == 64 * 64;
        detail += op.describe() + ": " + std::to_string(ic.violations) + "/" + std::to_string(ic.samples) + "; ";
    }
    return {pass, detail};
}

Verdict verdict_of(const ProblemInput& in) {
    const ProblemSpec spec = assemble(in);
    return classify(spec, build_report(spec), check_hypotheses(spec)).verdict;
}

Outcome criterion_dichotomy() {
    bool pass = true;
    std::string detail = "sigma:";
    for (int sigma = 0; sigma <= 5; ++sigma) {
        ProblemInput in;
        in.params["sigma"] = sigma;
        in.a[0] = in.a[1] = "(1+r)^(-sigma)";
        const Verdict v = verdict_of(in);
        pass = pass && v == (sigma <= 2 ? Verdict::BothLarge : Verdict::BothBounded);
        detail += " " + std::to_string(sigma) + "=" + to_string(v);
    }
    for (const char* decay : {"(1+r)^(-6)", "exp(-r)"}) {
        ProblemInput in;
        in.a[0] = decay;
        in.a[1] = "1";
        const Verdict v = verdict_of(in);
        pass = pass && v == Verdict::UBoundedVLarge;
        detail += std::string("; a1=") + decay + ", a2=1: " + to_string(v);
    }
    return {pass, detail};
}

Outcome criterion_lair() {
    struct Case {
        double p, q;
        const char *a1, *a2;
    };
    const std::vector<Case> cases{
        {1.0, 1.0, "1", "1"},
        {0.5, 1.0, "1", "(1+r)^(-1)"},
        {0.5, 0.5, "(1+r)^(-2)", "(1+r)^(-2)"},
        {1.0, 1.0, "(1+r)^(-4)", "(1+r)^(-4)"},
        {1.0, 0.5, "(1+r)^(-4)", "1"},
        {0.8, 1.25, "1", "(1+r)^(-6)"},
        {0.25, 1.0, "(1+r)^(-3)", "(1+r)^(-5)"},
        {0.5, 2.0, "exp(-r)", "exp(-r)"},
        {1.0, 1.0, "1/(1+r^2)", "1"},
        {0.5, 0.5, "(1+r)^(-6)", "(1+r)^(-6)"},
    };
    int agree = 0, abstain = 0, disagree = 0;
    std::string detail;
    for (const Case& c : cases) {
        LairInstance inst;
        inst.alpha_exp = c.p;
        inst.beta_exp = c.q;
        inst.a1 = Weight::from_expr(Expr::parse(c.a1));
        inst.a2 = Weight::from_expr(Expr::parse(c.a2));
        const LairVerdicts lv = lair_criteria(inst);
        const ProblemSpec spec = lair_problem(inst);
        const Verdict v = classify(spec, build_report(spec), check_hypotheses(spec)).verdict;
        switch (lair_agrees(lv, v)) {
            case Tri::True: ++agree; break;
            case Tri::Unknown: ++abstain; break;
            case Tri::False:
                ++disagree;
                detail += std::string(" mismatch on a1=") + c.a1 + " a2=" + c.a2 + " (" + to_string(v) + ")";
                break;
        }
    }
    return {disagree == 0 && abstain <= 2,
            std::to_string(agree) + " agree, " + std::to_string(abstain) + " abstain, " + std::to_string(disagree) +
                " disagree" + detail};
}

Outcome criterion_round_trip() {
    double worst = 0.0;
    for (const OperatorSpec& s : catalog_specs()) {
        const PhiOperator op = make_operator(s);
        for (int k = 0; k < 1000; ++k) {
            const double t = std::pow(10.0, -6.0 + 12.0 * k / 999.0);
            worst = std::max(worst, std::abs(op.h_inverse(op.h(t)) - t) / t);
        }
    }
    return {worst <= 1e-10, fmt("%.0f operators x 1000 points, worst relative error %.3e",
                                static_cast<double>(catalog_specs().size()), worst)};
}

Outcome criterion_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("rps_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path cfg = dir / "config.json";
    const fs::path out = dir / "report.json";
    {
        std::ofstream f(cfg);
        f << R"J({"problem": {"params": {"sigma": 3}, "a1": "(1+r)^(-sigma)", "a2": "1/(1+r^2)^2"},)J"
          << R"J( "outputs": {"report_json": ")J" << out.string() << R"J("}})J";
    }
    auto read = [&] {
        std::ifstream f(out, std::ios::binary);
        std::ostringstream os;
        os << f.rdbuf();
        return os.str();
    };
    const int c1 = run_command("classify", cfg.string());
    const std::string first = read();
    const int c2 = run_command("classify", cfg.string());
    const std::string second = read();
    fs::remove_all(dir);
    return {c1 == 0 && c2 == 0 && !first.empty() && first == second,
            std::to_string(first.size()) + " bytes, " + (first == second ? "identical" : "different")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"monotone iteration", criterion_monotone},
        {"sandwich bounds", criterion_sandwich},
        {"manufactured solution", criterion_manufactured},
        {"Yang limit identity", criterion_yang},
        {"envelope inequality", criterion_envelopes},
        {"classifier dichotomy", criterion_dichotomy},
        {"Lair oracle agreement", criterion_lair},
        {"h inversion round trip", criterion_round_trip},
        {"determinism", criterion_determinism},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
