#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rps/expr.hpp"
#include "rps/operators.hpp"

namespace rps {

using ParamMap = std::map<std::string, double>;

/// Radial weight a_i(r).
struct Weight {
    ScalarFn a;
    std::string label;
    bool identically_zero = false;

    double operator()(double r) const { return a(r); }

    static Weight from_expr(const Expr& e);
    static Weight zero();
};

/// Nonlinearity as written in a configuration. Families:
///   power       f = t^gamma                   gamma > 0
///   power_sum   f = sum c_k t^{gamma_k}       c_k > 0, gamma_k > 0
///   exp_minus_one  f = e^t - 1
///   log1p       f = ln(1 + t)
///   custom      f = expr, envelopes from the optional fields
/// The optional envelope fields override the family defaults.
struct NonlinearitySpec {
    std::string family = "power";
    double gamma = 1.0;
    std::vector<std::pair<double, double>> terms;  // (c_k, gamma_k)
    std::string expr;
    std::optional<double> c_bar;
    std::optional<std::string> g;
    std::optional<std::string> xi_bar;
    std::optional<double> c_under;
    std::optional<std::string> xi_under;
};

/// f_i with its (C2) upper data (c_bar, g, xi_bar) and (C3) lower data
/// (c_under, xi_under), plus the constants M_i and m_i.
struct Nonlinearity {
    std::string label;
    ScalarFn f;

    bool has_upper = false;
    double c_bar = 1.0;
    ScalarFn g;
    ScalarFn xi_bar;

    bool has_lower = false;
    double c_under = 1.0;
    ScalarFn xi_under;

    double M_big = 1.0;
    double m_small = 0.5;
};

/// User-supplied replacements for the derived envelope data.
struct EnvelopeOverride {
    std::optional<double> k_under;
    std::optional<double> k_bar;
    std::optional<std::string> theta_under;
    std::optional<std::string> theta_bar;
    std::optional<std::string> psi_under;
    std::optional<std::string> psi_bar;

    bool empty() const {
        return !k_under && !k_bar && !theta_under && !theta_bar && !psi_under && !psi_bar;
    }
};

/// One equation of the system: Delta_phi u_i = a_i f_i(other component).
struct Side {
    PhiOperator op = PhiOperator::laplacian();
    EnvelopeSet env;
    std::optional<GrowthExponents> growth;
    Weight a;
    Nonlinearity f;
};

/// Input for one side before the constants are fixed.
struct SideInput {
    PhiOperator op = PhiOperator::laplacian();
    EnvelopeOverride env_override;
    std::optional<EnvelopeSet> env;  // used verbatim when set
    Weight a;
    NonlinearitySpec f;
    std::optional<double> M;
    std::optional<double> m;
};

struct ProblemSpec {
    int N = 3;
    double alpha = 1.0;
    double beta = 1.0;
    Side sides[2];
    ParamMap params;
    std::vector<std::string> warnings;

    const Side& side(int i) const { return sides[i - 1]; }
    double M1() const { return sides[0].f.M_big; }
    double M2() const { return sides[1].f.M_big; }
    double m1() const { return sides[0].f.m_small; }
    double m2() const { return sides[1].f.m_small; }
    /// Central value of component i: alpha for u, beta for v.
    double start(int i) const { return i == 1 ? alpha : beta; }
};

struct ConstantBounds {
    double theta_bar_other = 0.0;   // theta_bar_j(f_j(start_i))
    double theta_under_other = 0.0; // theta_under_j(f_j(start_i))
    double M_min = 1.0;             // M_i >= M_min
    double m_max = 0.0;             // m_i < m_max
};

/// Bounds on M_i and m_i implied by the other side's data.
ConstantBounds constant_bounds(int i, double alpha, double beta, const EnvelopeSet& env_other,
                               const ScalarFn& f_other, std::vector<std::string>* warnings = nullptr);

/// Builds f_i and its envelope data. Family envelopes that depend on m use `m_small`.
Nonlinearity make_nonlinearity(const NonlinearitySpec& spec, double m_small, const ParamMap& params = {});

/// Envelope data of an operator: the derived construction with any overrides applied.
EnvelopeSet make_envelopes(const PhiOperator& op, const EnvelopeOverride& override_data,
                           std::optional<GrowthExponents>* growth_out = nullptr, const ParamMap& params = {});

/// Fixes M_i, m_i (checked when given, otherwise set to the bound and half the
/// bound) and validates (C1) unless `require_c1` is false. Throws ConfigError
/// naming the violated condition.
ProblemSpec assemble(int N, double alpha, double beta, SideInput side1, SideInput side2,
                     const ParamMap& params = {}, bool require_c1 = true);

/// Configuration-level input, everything as text.
struct ProblemInput {
    int N = 3;
    double alpha = 1.0;
    double beta = 1.0;
    OperatorSpec op[2];
    EnvelopeOverride env[2];
    std::string a[2] = {"1", "1"};
    NonlinearitySpec f[2];
    std::optional<double> M[2];
    std::optional<double> m[2];
    ParamMap params;
};

ProblemSpec assemble(const ProblemInput& input, bool require_c1 = true);

struct HypothesisEntry {
    std::string name;
    bool available = true;  // false when the data the check needs is absent
    bool passed = true;
    double worst_violation = 0.0;
    std::string detail;
};

struct HypothesisReport {
    std::vector<HypothesisEntry> entries;

    const HypothesisEntry* find(const std::string& name) const;
    /// True when the entry exists, is available and passed.
    bool holds(const std::string& name) const;
};

struct SampleBudget {
    double r_max = 1e4;      // (A) sampled on [0, r_max]
    int weight_points = 512;
    int t_points = 64;       // (C2): t log-spaced above the threshold
    int w_doublings = 10;    // w in {1, 2, ..., 2^w_doublings}
    double t_span = 1e6;     // t ranges over [T, T * t_span]
};

/// Sampled checks of (A), (C1), (C2), (C3), (O1)/(O2) and the envelope inequality.
/// Entries: A, C1, C2.1, C2.2, C3.1, C3.2, O1O2.1, O1O2.2, ineq.1, ineq.2.
HypothesisReport check_hypotheses(const ProblemSpec& spec, const SampleBudget& budget = {});

}  // namespace rps
