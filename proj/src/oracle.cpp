#include "rps/oracle.hpp"

#include <cmath>

#include "rps/criteria.hpp"
#include "rps/errors.hpp"

namespace rps {

namespace {

LimitVerdict probe(const std::vector<double>& curve, const ProbeMesh& mesh, const ProbeSettings& settings) {
    std::vector<std::pair<double, double>> trace;
    for (std::size_t k = 0; k < mesh.probe_index.size(); ++k) {
        const double F = curve[mesh.probe_index[k]];
        trace.emplace_back(settings.schedule.radius(static_cast<int>(k)), F);
        if (!std::isfinite(F)) break;
    }
    return classify_probe_trace(std::move(trace), settings.tail_tol, settings.blowup_threshold);
}

Tri is_divergent(const LimitVerdict& v) {
    if (v.divergent()) return Tri::True;
    if (v.finite()) return Tri::False;
    return Tri::Unknown;
}

Tri is_finite(const LimitVerdict& v) {
    if (v.finite()) return Tri::True;
    if (v.divergent()) return Tri::False;
    return Tri::Unknown;
}

// int_0^r tau a(tau) dtau
std::vector<double> moment_curve(const std::vector<double>& a, const std::vector<double>& nodes) {
    std::vector<double> ra(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) ra[i] = nodes[i] * a[i];
    return cumulative_integral(ra, nodes);
}

// int_0^inf t a_i(t) (t^{2-N} int_0^t s^{N-3} M(s) ds)^e dt, M the moment of the other weight
std::vector<double> lair_curve(const std::vector<double>& a_own, const std::vector<double>& M_other, double e, int N,
                               const std::vector<double>& nodes) {
    const std::vector<double> mean = weighted_mean_prefix(M_other, N - 3, nodes);
    std::vector<double> integrand(nodes.size(), 0.0);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double t = nodes[i];
        const double inner = mean[i] / t;
        integrand[i] = a_own[i] == 0.0 ? 0.0 : t * a_own[i] * std::pow(inner, e);
    }
    return cumulative_integral(integrand, nodes);
}

}  // namespace

Tri LairVerdicts::c1l() const { return is_divergent(I1); }
Tri LairVerdicts::c2l() const { return is_divergent(I2); }
Tri LairVerdicts::c3l() const { return is_finite(I1); }
Tri LairVerdicts::c4l() const { return is_finite(I2); }
Tri LairVerdicts::l7() const { return tri_and(is_divergent(moment1), is_divergent(moment2)); }
Tri LairVerdicts::l8() const { return tri_and(is_finite(moment1), is_finite(moment2)); }

LairVerdicts lair_criteria(const LairInstance& inst, const ProbeSettings& settings) {
    if (!(inst.alpha_exp > 0.0) || !(inst.beta_exp > 0.0)) throw ConfigError("Lair exponents must be positive");
    if (inst.N < 3) throw ConfigError("Lair instance needs N >= 3");
    const ProbeMesh mesh = make_probe_mesh(settings.schedule, settings.nodes_per_block);
    const auto a1 = sample_weight(inst.a1, mesh.nodes);
    const auto a2 = sample_weight(inst.a2, mesh.nodes);
    const auto P = moment_curve(a1, mesh.nodes);
    const auto Q = moment_curve(a2, mesh.nodes);

    LairVerdicts out;
    out.I1 = probe(lair_curve(a1, Q, inst.alpha_exp, inst.N, mesh.nodes), mesh, settings);
    out.I2 = probe(lair_curve(a2, P, inst.beta_exp, inst.N, mesh.nodes), mesh, settings);
    out.moment1 = probe(P, mesh, settings);
    out.moment2 = probe(Q, mesh, settings);

    if (inst.alpha_exp * inst.beta_exp <= 1.0) {
        out.exists_large = tri_and(out.c1l(), out.c2l());
        out.statement = "alpha*beta <= 1: large solution iff both integrals diverge";
    } else {
        const Tri suff = tri_or(out.c3l(), out.c4l());
        out.exists_large = suff == Tri::True ? Tri::True : Tri::Unknown;
        out.statement = "alpha*beta > 1: a finite integral is sufficient, nothing follows otherwise";
    }
    return out;
}

Tri lair_agrees(const LairVerdicts& lair, Verdict verdict) {
    if (lair.exists_large == Tri::Unknown || verdict == Verdict::Indeterminate) return Tri::Unknown;
    return ((lair.exists_large == Tri::True) == (verdict == Verdict::BothLarge)) ? Tri::True : Tri::False;
}

ProblemSpec lair_problem(const LairInstance& inst, double u0, double v0) {
    SideInput s1, s2;
    s1.a = inst.a1;
    s2.a = inst.a2;
    s1.f.family = s2.f.family = "power";
    s1.f.gamma = inst.alpha_exp;
    s2.f.gamma = inst.beta_exp;
    return assemble(inst.N, u0, v0, std::move(s1), std::move(s2));
}

std::string to_string(Solvability s) {
    switch (s) {
        case Solvability::Yes: return "yes";
        case Solvability::No: return "no";
        case Solvability::Unknown: return "unknown";
        case Solvability::NotApplicable: return "not-applicable";
    }
    return "unknown";
}

YangResult yang_check(const ScalarFn& f, const Weight& a, int N, const ProbeSettings& settings) {
    if (N < 3) throw ConfigError("Yang check needs N >= 3");
    YangResult out;

    const ProbeMesh shifted = make_probe_mesh(settings.schedule, settings.nodes_per_block, 1.0);
    std::vector<double> inv_f(shifted.nodes.size());
    for (std::size_t i = 0; i < shifted.nodes.size(); ++i) {
        const double y = f(shifted.nodes[i]);
        if (!(y > 0.0)) throw ConfigError("Yang check needs f > 0 on [1, inf)");
        inv_f[i] = 1.0 / y;
    }
    out.dy = probe(cumulative_integral(inv_f, shifted.nodes), shifted, settings);
    out.dy_holds = is_divergent(out.dy);

    const ProbeMesh mesh = make_probe_mesh(settings.schedule, settings.nodes_per_block);
    const auto w = sample_weight(a, mesh.nodes);
    out.A_limit = probe(cumulative_integral(radial_kernel(w, N, mesh.nodes), mesh.nodes), mesh, settings);
    std::vector<double> moment = moment_curve(w, mesh.nodes);
    for (double& m : moment) m /= (N - 2);
    out.moment = probe(moment, mesh, settings);

    if (out.A_limit.finite() && out.moment.finite()) {
        const double scale = std::max(std::abs(out.moment.value), 1e-300);
        out.relative_gap = std::abs(out.A_limit.value - out.moment.value) / scale;
        out.identity_holds = out.relative_gap <= 1e-4 ? Tri::True : Tri::False;
    } else if (out.A_limit.divergent() && out.moment.divergent()) {
        out.identity_holds = Tri::True;
    } else if (out.A_limit.indeterminate() || out.moment.indeterminate()) {
        out.identity_holds = Tri::Unknown;
    } else {
        out.identity_holds = Tri::False;
    }

    switch (out.dy_holds) {
        case Tri::True:
            out.dye_solvable = out.A_limit.divergent() ? Solvability::Yes
                               : out.A_limit.finite()  ? Solvability::No
                                                       : Solvability::Unknown;
            break;
        case Tri::False: out.dye_solvable = Solvability::NotApplicable; break;
        case Tri::Unknown: out.dye_solvable = Solvability::Unknown; break;
    }
    return out;
}

ScalarFn manufactured_weight(const Expr& own, const Expr& other, const PhiOperator& op, const ScalarFn& f, int N,
                             double step) {
    const double d = step;
    // h(w'(r)) with w evaluated at |r| so the stencil may cross the origin
    auto flux = [own, op, d](double r) {
        const double slope = (own(std::abs(r + d)) - own(std::abs(r - d))) / (2.0 * d);
        return slope >= 0.0 ? op.h(slope) : -op.h(-slope);
    };
    auto interior = [=](double r) {
        const double H = flux(r);
        const double dH = (flux(r + d) - flux(r - d)) / (2.0 * d);
        const double denom = f(other(r));
        if (!(denom > 0.0)) throw DomainError("manufactured weight: f vanishes at r=" + std::to_string(r));
        return ((N - 1) * H / r + dH) / denom;
    };
    return [=](double r) {
        // quadratic extrapolation to the origin; its O(step^3) error may dip below zero
        if (r < d) return std::max(0.0, 3.0 * interior(d) - 3.0 * interior(2.0 * d) + interior(3.0 * d));
        const double a = interior(r);
        if (a < -1e-8) throw DomainError("manufactured weight negative (" + std::to_string(a) + ") at r=" + std::to_string(r));
        return std::max(a, 0.0);
    };
}

ProblemSpec manufactured_problem(const Expr& u_star, const Expr& v_star, const ManufacturedSide& side1,
                                 const ManufacturedSide& side2, int N, double r_max, double step,
                                 const ParamMap& params) {
    const double alpha = u_star(0.0);
    const double beta = v_star(0.0);
    SideInput s[2];
    const ManufacturedSide* in[2] = {&side1, &side2};
    const Expr* star[2] = {&u_star, &v_star};
    for (int k = 0; k < 2; ++k) {
        const ScalarFn f = make_nonlinearity(in[k]->f, 0.5, params).f;
        const ScalarFn a = manufactured_weight(*star[k], *star[1 - k], in[k]->op, f, N, step);
        const RadialGrid grid = make_grid(r_max, step);
        for (double r : grid.nodes) {
            try {
                a(r);
            } catch (const DomainError& e) {
                throw ConfigError(std::string("inadmissible manufactured pair: ") + e.what());
            }
        }
        s[k].op = in[k]->op;
        s[k].a.a = a;
        s[k].a.label = "manufactured from " + star[k]->to_string();
        s[k].f = in[k]->f;
    }
    return assemble(N, alpha, beta, std::move(s[0]), std::move(s[1]), params);
}

}  // namespace rps
