#include "rps/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rps/errors.hpp"

namespace rps {

namespace {

constexpr double kThresholdFloor = 1e-300;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

ScalarFn from_expr(const Expr& e) {
    return [e](double x) { return e(x); };
}

ScalarFn power_fn(double gamma) {
    return [gamma](double t) { return std::pow(t, gamma); };
}

std::vector<double> log_points(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) out.push_back(std::exp(a + (b - a) * i / std::max(1, n - 1)));
    return out;
}

// Evaluates fn, mapping domain errors and overflow to NaN.
double safe(const ScalarFn& fn, double x) {
    try {
        const double y = fn(x);
        return std::isfinite(y) ? y : std::nan("");
    } catch (const DomainError&) {
        return std::nan("");
    } catch (const NumericError&) {
        return std::nan("");
    }
}

}  // namespace

Weight Weight::from_expr(const Expr& e) {
    Weight w;
    w.a = rps::from_expr(e);
    w.label = e.to_string();
    w.identically_zero = e.is_constant() && e(0.0) == 0.0;
    return w;
}

Weight Weight::zero() {
    Weight w;
    w.a = [](double) { return 0.0; };
    w.label = "0";
    w.identically_zero = true;
    return w;
}

Nonlinearity make_nonlinearity(const NonlinearitySpec& spec, double m_small, const ParamMap& params) {
    Nonlinearity nl;
    nl.m_small = m_small;
    const std::string& fam = spec.family;

    if (fam == "power") {
        const double gamma = spec.gamma;
        if (!(gamma > 0.0)) throw ConfigError("power nonlinearity needs gamma > 0");
        nl.label = "t^" + fmt(gamma);
        nl.f = power_fn(gamma);
        nl.has_upper = true;
        nl.c_bar = 1.0;
        nl.g = power_fn(gamma);
        nl.xi_bar = power_fn(gamma);
        nl.has_lower = true;
        nl.c_under = std::pow(m_small, gamma);
        nl.xi_under = power_fn(gamma);
    } else if (fam == "power_sum") {
        if (spec.terms.empty()) throw ConfigError("power_sum nonlinearity needs at least one term");
        double gmax = 0.0;
        std::ostringstream label;
        for (std::size_t k = 0; k < spec.terms.size(); ++k) {
            const auto [c, g] = spec.terms[k];
            if (!(c > 0.0) || !(g > 0.0)) throw ConfigError("power_sum terms need c_k > 0 and gamma_k > 0");
            gmax = std::max(gmax, g);
            label << (k ? " + " : "") << fmt(c) << "*t^" + fmt(g);
        }
        const auto terms = spec.terms;
        nl.label = label.str();
        nl.f = [terms](double t) {
            double sum = 0.0;
            for (const auto& [c, g] : terms) sum += c * std::pow(t, g);
            return sum;
        };
        // f(tw) = sum c_k t^g_k w^g_k <= w^gmax f(t) for w >= 1
        nl.has_upper = true;
        nl.c_bar = 1.0;
        nl.g = nl.f;
        nl.xi_bar = power_fn(gmax);
        nl.has_lower = true;
        nl.c_under = 1.0;
        const ScalarFn f = nl.f;
        nl.xi_under = [f, m_small](double w) { return f(m_small * w); };
    } else if (fam == "exp_minus_one") {
        nl.label = "exp(t)-1";
        nl.f = [](double t) { return std::expm1(t); };
        nl.has_lower = true;
        nl.c_under = 1.0;
        nl.xi_under = [m_small](double w) { return std::expm1(m_small * w); };
    } else if (fam == "log1p") {
        nl.label = "ln(1+t)";
        nl.f = [](double t) { return std::log1p(t); };
        // (1+t)^w >= 1 + t w for w >= 1
        nl.has_upper = true;
        nl.c_bar = 1.0;
        nl.g = nl.f;
        nl.xi_bar = [](double w) { return w; };
        nl.has_lower = true;
        nl.c_under = 1.0;
        nl.xi_under = [m_small](double w) { return std::log1p(m_small * w); };
    } else if (fam == "custom") {
        if (spec.expr.empty()) throw ConfigError("custom nonlinearity needs expr");
        const Expr e = Expr::parse(spec.expr, params);
        nl.label = e.to_string();
        nl.f = from_expr(e);
    } else {
        throw ConfigError("unknown nonlinearity family '" + fam + "'");
    }

    if (spec.c_bar || spec.g || spec.xi_bar) {
        if (!(spec.c_bar && spec.g && spec.xi_bar)) {
            throw ConfigError("(C2) data for '" + nl.label + "' needs c_bar, g and xi_bar together");
        }
        if (!(*spec.c_bar > 0.0)) throw ConfigError("c_bar must be positive");
        nl.has_upper = true;
        nl.c_bar = *spec.c_bar;
        nl.g = from_expr(Expr::parse(*spec.g, params));
        nl.xi_bar = from_expr(Expr::parse(*spec.xi_bar, params));
    }
    if (spec.c_under || spec.xi_under) {
        if (!(spec.c_under && spec.xi_under)) {
            throw ConfigError("(C3) data for '" + nl.label + "' needs c_under and xi_under together");
        }
        if (!(*spec.c_under > 0.0)) throw ConfigError("c_under must be positive");
        nl.has_lower = true;
        nl.c_under = *spec.c_under;
        nl.xi_under = from_expr(Expr::parse(*spec.xi_under, params));
    } else if (m_small >= 1.0) {
        // f(m w) >= f(w) once m >= 1
        nl.has_lower = true;
        nl.c_under = 1.0;
        nl.xi_under = nl.f;
    }
    return nl;
}

EnvelopeSet make_envelopes(const PhiOperator& op, const EnvelopeOverride& ov,
                           std::optional<GrowthExponents>* growth_out, const ParamMap& params) {
    const bool complete = ov.k_under && ov.k_bar && ov.theta_under && ov.theta_bar && ov.psi_under && ov.psi_bar;
    EnvelopeSet env;
    if (!complete) {
        DerivedEnvelopes derived = derive_envelopes(op);
        env = std::move(derived.envelopes);
        if (growth_out) *growth_out = derived.growth;
    }
    if (ov.empty()) return env;

    auto fn = [&](const std::optional<std::string>& src, ScalarFn& slot) {
        if (src) slot = from_expr(Expr::parse(*src, params));
    };
    if (ov.k_under) env.k_under = *ov.k_under;
    if (ov.k_bar) env.k_bar = *ov.k_bar;
    fn(ov.theta_under, env.theta_under);
    fn(ov.theta_bar, env.theta_bar);
    fn(ov.psi_under, env.psi_under);
    fn(ov.psi_bar, env.psi_bar);
    if (ov.psi_bar) env.psi_bar_is_h_inverse = false;
    if (!(env.k_under > 0.0) || !(env.k_bar > 0.0)) throw ConfigError("envelope constants k must be positive");
    env.description = complete ? std::string("user envelopes") : env.description + ", with user overrides";
    return env;
}

ConstantBounds constant_bounds(int i, double alpha, double beta, const EnvelopeSet& env_other,
                               const ScalarFn& f_other, std::vector<std::string>* warnings) {
    const double own_start = i == 1 ? alpha : beta;
    const double other_start = i == 1 ? beta : alpha;
    const double x = f_other(own_start);
    ConstantBounds b;
    b.theta_bar_other = env_other.theta_bar(x);
    b.theta_under_other = env_other.theta_under(x);
    if (!(b.theta_bar_other >= kThresholdFloor)) {
        if (warnings) {
            warnings->push_back("side " + std::to_string(i) + ": theta_bar(f(start)) = " + fmt(b.theta_bar_other) +
                                " floored at 1e-300");
        }
        b.theta_bar_other = kThresholdFloor;
    }
    if (!(b.theta_under_other >= kThresholdFloor)) {
        if (warnings) {
            warnings->push_back("side " + std::to_string(i) + ": theta_under(f(start)) = " +
                                fmt(b.theta_under_other) + " floored at 1e-300");
        }
        b.theta_under_other = kThresholdFloor;
    }
    b.M_min = std::max(1.0, other_start / b.theta_bar_other);
    b.m_max = std::min(other_start, b.theta_under_other);
    return b;
}

namespace {

// (C1) on a log grid: finite, nonnegative, nondecreasing, positive for s > 0.
HypothesisEntry check_c1(const ScalarFn& f, const std::string& which) {
    HypothesisEntry e;
    e.name = "C1";
    const double f0 = safe(f, 0.0);
    if (!(f0 >= 0.0)) {
        e.passed = false;
        e.worst_violation = std::isnan(f0) ? HUGE_VAL : -f0;
        e.detail = which + "(0) = " + fmt(f0) + " is not a nonnegative number";
        return e;
    }
    double prev = f0, prev_s = 0.0;
    for (double s : log_points(1e-6, 1e6, 257)) {
        const double y = safe(f, s);
        if (std::isnan(y)) {
            // overflow far out is not a (C1) failure, but everything below it was checked
            if (s > 1.0) break;
            e.passed = false;
            e.worst_violation = HUGE_VAL;
            e.detail = which + " undefined at " + fmt(s);
            return e;
        }
        if (!(y > 0.0)) {
            e.passed = false;
            e.worst_violation = std::max(e.worst_violation, -y);
            e.detail = which + "(" + fmt(s) + ") = " + fmt(y) + " is not positive";
        }
        const double drop = prev - y;
        if (drop > 1e-12 * std::max(1.0, std::abs(prev))) {
            e.passed = false;
            e.worst_violation = std::max(e.worst_violation, drop);
            e.detail = which + " decreases: " + which + "(" + fmt(prev_s) + ") = " + fmt(prev) + " > " + which +
                       "(" + fmt(s) + ") = " + fmt(y);
        }
        prev = y;
        prev_s = s;
    }
    return e;
}

}  // namespace

ProblemSpec assemble(int N, double alpha, double beta, SideInput s1, SideInput s2, const ParamMap& params,
                     bool require_c1) {
    if (N < 3) throw ConfigError("dimension N must be at least 3 (got " + std::to_string(N) + ")");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw ConfigError("alpha and beta must be positive");

    ProblemSpec spec;
    spec.N = N;
    spec.alpha = alpha;
    spec.beta = beta;
    spec.params = params;

    SideInput* in[2] = {&s1, &s2};
    for (int k = 0; k < 2; ++k) {
        Side& side = spec.sides[k];
        side.op = in[k]->op;
        if (in[k]->env) {
            side.env = *in[k]->env;
        } else {
            try {
                side.env = make_envelopes(side.op, in[k]->env_override, &side.growth, params);
            } catch (const ConfigError& e) {
                throw ConfigError("operator " + std::to_string(k + 1) + " (" + side.op.describe() + "): " + e.what());
            }
        }
        side.a = in[k]->a;
        if (!side.a.a) throw ConfigError("weight a" + std::to_string(k + 1) + " missing");
    }

    // f_j without envelope data, for the threshold of side i
    ScalarFn f_plain[2];
    for (int k = 0; k < 2; ++k) {
        f_plain[k] = make_nonlinearity(in[k]->f, 0.5, params).f;
        HypothesisEntry c1 = check_c1(f_plain[k], "f" + std::to_string(k + 1));
        if (!c1.passed && require_c1) throw ConfigError("(C1) violated: " + c1.detail);
    }

    for (int k = 0; k < 2; ++k) {
        const int i = k + 1;
        const int j = 1 - k;
        const ConstantBounds b = constant_bounds(i, alpha, beta, spec.sides[j].env, f_plain[j], &spec.warnings);
        const std::string si = std::to_string(i);

        double M = b.M_min;
        if (in[k]->M) {
            M = *in[k]->M;
            if (!(M >= b.M_min)) {
                throw ConfigError("(C2) constant violated: M" + si + " = " + fmt(M) + " < max{1, start/theta_bar(f(start))} = " +
                                  fmt(b.M_min));
            }
        }
        if (!(b.m_max > 0.0)) throw ConfigError("(C3) range for m" + si + " is empty");
        double m = 0.5 * b.m_max;
        if (in[k]->m) {
            m = *in[k]->m;
            if (!(m > 0.0 && m < b.m_max)) {
                throw ConfigError("(C3) constant violated: m" + si + " = " + fmt(m) + " not in (0, " + fmt(b.m_max) + ")");
            }
        }
        Nonlinearity nl = make_nonlinearity(in[k]->f, m, params);
        nl.M_big = M;
        nl.m_small = m;
        spec.sides[k].f = std::move(nl);
    }
    return spec;
}

ProblemSpec assemble(const ProblemInput& input, bool require_c1) {
    SideInput sides[2];
    for (int k = 0; k < 2; ++k) {
        sides[k].op = make_operator(input.op[k], input.params);
        sides[k].env_override = input.env[k];
        sides[k].a = Weight::from_expr(Expr::parse(input.a[k], input.params));
        sides[k].f = input.f[k];
        sides[k].M = input.M[k];
        sides[k].m = input.m[k];
    }
    return assemble(input.N, input.alpha, input.beta, std::move(sides[0]), std::move(sides[1]), input.params, require_c1);
}

const HypothesisEntry* HypothesisReport::find(const std::string& name) const {
    for (const auto& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

bool HypothesisReport::holds(const std::string& name) const {
    const HypothesisEntry* e = find(name);
    return e && e->available && e->passed;
}

HypothesisReport check_hypotheses(const ProblemSpec& spec, const SampleBudget& budget) {
    HypothesisReport report;

    {
        HypothesisEntry e;
        e.name = "A";
        std::vector<double> rs{0.0};
        for (double r : log_points(1e-4, budget.r_max, budget.weight_points)) rs.push_back(r);
        for (int k = 0; k < 2; ++k) {
            for (double r : rs) {
                const double a = safe(spec.sides[k].a.a, r);
                if (std::isnan(a) || a < 0.0) {
                    e.passed = false;
                    const double v = std::isnan(a) ? HUGE_VAL : -a;
                    if (v > e.worst_violation || e.detail.empty()) {
                        e.worst_violation = std::max(e.worst_violation, v);
                        e.detail = "a" + std::to_string(k + 1) + "(" + fmt(r) + ") = " + fmt(a);
                    }
                }
            }
        }
        report.entries.push_back(e);
    }

    {
        HypothesisEntry e;
        e.name = "C1";
        for (int k = 0; k < 2; ++k) {
            HypothesisEntry one = check_c1(spec.sides[k].f.f, "f" + std::to_string(k + 1));
            if (!one.passed && e.passed) {
                e.passed = false;
                e.detail = one.detail;
            }
            e.worst_violation = std::max(e.worst_violation, one.worst_violation);
        }
        report.entries.push_back(e);
    }

    std::vector<double> ws;
    for (int d = 0; d <= budget.w_doublings; ++d) ws.push_back(std::ldexp(1.0, d));

    for (int k = 0; k < 2; ++k) {
        const Nonlinearity& nl = spec.sides[k].f;
        const std::string si = std::to_string(k + 1);
        HypothesisEntry e;
        e.name = "C2." + si;
        if (!nl.has_upper) {
            e.available = false;
            e.passed = false;
            e.detail = "no (C2) data for f" + si;
        } else {
            const ConstantBounds b =
                constant_bounds(k + 1, spec.alpha, spec.beta, spec.sides[1 - k].env, spec.sides[1 - k].f.f);
            const double T = nl.M_big * b.theta_bar_other;
            for (double t : log_points(T, T * budget.t_span, budget.t_points)) {
                for (double w : ws) {
                    const double lhs = safe(nl.f, t * w);
                    const double rhs = nl.c_bar * safe(nl.g, t) * safe(nl.xi_bar, w);
                    if (std::isnan(lhs) && std::isnan(rhs)) continue;
                    const bool bad = std::isnan(lhs) ? true : (std::isnan(rhs) ? false : lhs > rhs * (1.0 + 1e-12));
                    if (bad) {
                        const double v = std::isnan(lhs) ? HUGE_VAL : lhs - rhs;
                        if (e.passed || v > e.worst_violation) {
                            e.detail = "f" + si + "(" + fmt(t) + "*" + fmt(w) + ") = " + fmt(lhs) + " > " + fmt(rhs);
                        }
                        e.passed = false;
                        e.worst_violation = std::max(e.worst_violation, v);
                    }
                }
            }
        }
        report.entries.push_back(e);
    }

    for (int k = 0; k < 2; ++k) {
        const Nonlinearity& nl = spec.sides[k].f;
        const std::string si = std::to_string(k + 1);
        HypothesisEntry e;
        e.name = "C3." + si;
        if (!nl.has_lower) {
            e.available = false;
            e.passed = false;
            e.detail = "no (C3) data for f" + si;
        } else {
            for (double w : ws) {
                const double lhs = safe(nl.f, nl.m_small * w);
                const double rhs = nl.c_under * safe(nl.xi_under, w);
                if (std::isnan(lhs) && !std::isnan(rhs)) continue;  // f overflowed, holds in the limit
                const bool bad = std::isnan(rhs) || lhs < rhs * (1.0 - 1e-12);
                if (bad) {
                    const double v = std::isnan(rhs) ? HUGE_VAL : rhs - lhs;
                    if (e.passed || v > e.worst_violation) {
                        e.detail = "f" + si + "(m*" + fmt(w) + ") = " + fmt(lhs) + " < " + fmt(rhs);
                    }
                    e.passed = false;
                    e.worst_violation = std::max(e.worst_violation, v);
                }
            }
        }
        report.entries.push_back(e);
    }

    for (int k = 0; k < 2; ++k) {
        const std::string si = std::to_string(k + 1);
        const OperatorCheck check = validate_operator(spec.sides[k].op);
        HypothesisEntry e;
        e.name = "O1O2." + si;
        e.passed = check.ok();
        e.detail = check.detail;
        report.entries.push_back(e);
    }

    for (int k = 0; k < 2; ++k) {
        const std::string si = std::to_string(k + 1);
        HypothesisEntry e;
        e.name = "ineq." + si;
        try {
            const IneqCheck check = check_envelope_inequality(spec.sides[k].op, spec.sides[k].env);
            e.passed = check.violations == 0;
            e.worst_violation = check.worst_relative;
            e.detail = std::to_string(check.violations) + " of " + std::to_string(check.samples) + " samples violated";
        } catch (const std::exception& ex) {
            e.passed = false;
            e.worst_violation = HUGE_VAL;
            e.detail = ex.what();
        }
        report.entries.push_back(e);
    }
    return report;
}

}  // namespace rps
