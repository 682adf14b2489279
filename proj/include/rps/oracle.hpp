#pragma once

#include <string>

#include "rps/classifier.hpp"
#include "rps/model.hpp"
#include "rps/quadrature.hpp"

namespace rps {

/// Delta u = a1 v^alpha_exp, Delta v = a2 u^beta_exp.
struct LairInstance {
    double alpha_exp = 1.0;
    double beta_exp = 1.0;
    Weight a1;
    Weight a2;
    int N = 3;
};

/// I1 = int_0^inf t a1(t) (t^{2-N} int_0^t s^{N-3} Q(s) ds)^alpha dt with
/// Q(r) = int_0^r tau a2, I2 the mirror with P(r) = int_0^r tau a1, and the
/// moments int_0^inf r a_i(r) dr.
struct LairVerdicts {
    LimitVerdict I1;
    LimitVerdict I2;
    LimitVerdict moment1;
    LimitVerdict moment2;

    Tri c1l() const;  // I1 = inf
    Tri c2l() const;  // I2 = inf
    Tri c3l() const;  // I1 < inf
    Tri c4l() const;  // I2 < inf
    Tri l7() const;   // both moments infinite
    Tri l8() const;   // both moments finite
    /// Entire large solution exists: c1l and c2l when alpha*beta <= 1 (iff);
    /// c3l or c4l when alpha*beta > 1 (sufficient only, otherwise Unknown).
    Tri exists_large = Tri::Unknown;
    std::string statement;
};

LairVerdicts lair_criteria(const LairInstance& inst, const ProbeSettings& settings = {});

/// Lair existence verdict against a classifier verdict: True when they say the
/// same about BothLarge, Unknown when either side abstains.
Tri lair_agrees(const LairVerdicts& lair, Verdict verdict);

/// The same data as a system instance: Laplacian operators, f1 = t^alpha_exp,
/// f2 = t^beta_exp, central values (u0, v0).
ProblemSpec lair_problem(const LairInstance& inst, double u0 = 1.0, double v0 = 1.0);

enum class Solvability { Yes, No, Unknown, NotApplicable };
std::string to_string(Solvability s);

struct YangResult {
    LimitVerdict dy;          // int_1^inf dt / f(t)
    Tri dy_holds = Tri::Unknown;
    LimitVerdict A_limit;     // lim A_a(t), A_a(t) = int_0^t s^{1-N} int_0^s z^{N-1} a(z) dz ds
    LimitVerdict moment;      // (1/(N-2)) int_0^inf r a(r) dr
    Tri identity_holds = Tri::Unknown;  // both finite and within 1e-4 relative
    double relative_gap = 0.0;
    Solvability dye_solvable = Solvability::NotApplicable;
};

YangResult yang_check(const ScalarFn& f, const Weight& a, int N, const ProbeSettings& settings = {});

/// Side data of a manufactured instance.
struct ManufacturedSide {
    PhiOperator op = PhiOperator::laplacian();
    NonlinearitySpec f;
};

/// a_i(r) = (r^{N-1} h_i(w_i'(r)))' / (r^{N-1} f_i(w_j(r))) with (u*, v*) = (w_1, w_2),
/// derivatives by central differences of width `step`, the divergence
/// expanded as (N-1) h/r + h'. Below `step`, a is extrapolated
/// quadratically from step, 2 step, 3 step and floored at 0. Values in
/// [-1e-8, 0) are clamped to 0.
ScalarFn manufactured_weight(const Expr& own, const Expr& other, const PhiOperator& op, const ScalarFn& f, int N,
                             double step);

/// A spec whose exact radial solution is (u*, v*), with alpha = u*(0), beta = v*(0).
/// Throws ConfigError on vanishing f or a weight below -1e-8 anywhere on [0, r_max].
ProblemSpec manufactured_problem(const Expr& u_star, const Expr& v_star, const ManufacturedSide& side1,
                                 const ManufacturedSide& side2, int N, double r_max, double step,
                                 const ParamMap& params = {});

}  // namespace rps
