#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rps/expr.hpp"

namespace rps {

using ScalarFn = std::function<double(double)>;

enum class OperatorFamily { Laplacian, PLaplacian, Plasma, Elasticity, Plasticity, Newtonian, Custom };

std::string to_string(OperatorFamily family);
OperatorFamily operator_family_from_string(const std::string& name);

/// phi in div(phi(|grad u|) grad u), together with the flux map h(t) = t phi(t)
/// and its inverse.
///
/// Catalog:
///   laplacian          phi = 1
///   p_laplacian{p}     phi = t^(p-2)                         p > 1
///   plasma{p,q}        phi = t^(p-2) + t^(q-2)               1 < p < q
///   elasticity{p}      phi = 2p (1+t^2)^(p-1)                p > 1/2
///   plasticity{p,q}    phi = Phi'(t)/t, Phi = t^p ln(1+t)^q  p > 1, q > 0
///   newtonian{p,q}     phi = t^(-p) asinh(t)^q               0 <= p <= 1, q > 0
///   custom{expr}       phi given as an expression in t
class PhiOperator {
public:
    static PhiOperator laplacian();
    static PhiOperator p_laplacian(double p);
    static PhiOperator plasma(double p, double q);
    static PhiOperator elasticity(double p);
    static PhiOperator plasticity(double p, double q);
    static PhiOperator newtonian(double p, double q);
    /// Validates (O1)/(O2) on the default grid; throws ConfigError on failure.
    static PhiOperator custom(Expr phi);

    OperatorFamily family() const { return family_; }
    double p() const { return p_; }
    double q() const { return q_; }
    const std::optional<Expr>& expression() const { return expr_; }
    bool has_analytic_inverse() const;
    std::string describe() const;

    double phi(double t) const;
    /// h(t) = t phi(t), h(0) = 0. Throws NumericError when phi(t) is not finite.
    double h(double t) const;
    /// Unique t >= 0 with h(t) = s. Throws NumericError when the bracket
    /// passes 1e300 (h bounded on the needed range).
    double h_inverse(double s) const;

private:
    PhiOperator(OperatorFamily family, double p, double q, std::optional<Expr> expr)
        : family_(family), p_(p), q_(q), expr_(std::move(expr)) {}

    double analytic_inverse(double s) const;
    double bisect_inverse(double s) const;

    OperatorFamily family_;
    double p_ = 0.0;
    double q_ = 0.0;
    std::optional<Expr> expr_;
};

/// Family name plus parameters, as written in configuration files.
struct OperatorSpec {
    std::string family = "laplacian";
    double p = 0.0;
    double q = 0.0;
    std::string expr;  // custom only
};

PhiOperator make_operator(const OperatorSpec& spec, const std::map<std::string, double>& params = {});

/// 512 log-spaced points on [1e-8, 1e8].
std::vector<double> validation_grid();

struct OperatorCheck {
    bool o1 = true;          // phi finite and positive, h -> 0 at the origin
    bool o2 = true;          // h strictly increasing
    bool unbounded = true;   // h still growing at the top of the grid
    std::string detail;

    bool ok() const { return o1 && o2 && unbounded; }
};

OperatorCheck validate_operator(const PhiOperator& op, const std::vector<double>& grid = validation_grid());

/// Functions (k, theta, psi) with
///   k_under theta_under(s1) psi_under(s2) <= h^{-1}(s1 s2) <= k_bar theta_bar(s1) psi_bar(s2).
struct EnvelopeSet {
    double k_under = 1.0;
    double k_bar = 1.0;
    ScalarFn theta_under;
    ScalarFn theta_bar;
    ScalarFn psi_under;
    ScalarFn psi_bar;
    std::string description;
    bool psi_bar_is_h_inverse = false;
};

/// Growth bounds l <= t Phi'/Phi <= m and a0 <= t Phi''/Phi' <= a1.
struct GrowthExponents {
    double l = 0.0;
    double m = 0.0;
    double a0 = 0.0;
    double a1 = 0.0;
};

struct DerivedEnvelopes {
    EnvelopeSet envelopes;
    GrowthExponents growth;
};

struct EnvelopeScan {
    double t_min = 1e-10;
    double t_max = 1e12;
    int points = 4096;
};

/// Estimates the growth exponents on a log grid and builds
///   psi = h^{-1}, k = 1, theta_under = min(t^{1/a1}, t^{1/a0}), theta_bar = max(t^{1/a1}, t^{1/a0}).
/// a0, a1 are widened outward by a relative 1e-6. Throws ConfigError when the
/// Phi-ratio drops to 1 or below, or when the sampled sandwich fails.
DerivedEnvelopes derive_envelopes(const PhiOperator& op, const EnvelopeScan& scan = {});

struct IneqCheck {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double worst_relative = 0.0;
};

/// Sandwich check on an n x n log grid of (s1, s2) in [S*1e-6, S]^2.
IneqCheck check_envelope_inequality(const PhiOperator& op, const EnvelopeSet& env, double S = 1e3, int n = 64);

}  // namespace rps
