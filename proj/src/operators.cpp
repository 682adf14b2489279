#include "rps/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rps/errors.hpp"

namespace rps {

namespace {

constexpr double kBracketCap = 1e300;

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

void require(bool condition, const std::string& message) {
    if (!condition) throw ConfigError(message);
}

}  // namespace

std::string to_string(OperatorFamily family) {
    switch (family) {
        case OperatorFamily::Laplacian: return "laplacian";
        case OperatorFamily::PLaplacian: return "p_laplacian";
        case OperatorFamily::Plasma: return "plasma";
        case OperatorFamily::Elasticity: return "elasticity";
        case OperatorFamily::Plasticity: return "plasticity";
        case OperatorFamily::Newtonian: return "newtonian";
        case OperatorFamily::Custom: return "custom";
    }
    return "custom";
}

OperatorFamily operator_family_from_string(const std::string& name) {
    for (auto f : {OperatorFamily::Laplacian, OperatorFamily::PLaplacian, OperatorFamily::Plasma,
                   OperatorFamily::Elasticity, OperatorFamily::Plasticity, OperatorFamily::Newtonian,
                   OperatorFamily::Custom}) {
        if (to_string(f) == name) return f;
    }
    throw ConfigError("unknown operator family '" + name + "'");
}

PhiOperator PhiOperator::laplacian() { return {OperatorFamily::Laplacian, 0.0, 0.0, std::nullopt}; }

PhiOperator PhiOperator::p_laplacian(double p) {
    require(p > 1.0, "p_laplacian needs p > 1");
    return {OperatorFamily::PLaplacian, p, 0.0, std::nullopt};
}

PhiOperator PhiOperator::plasma(double p, double q) {
    require(p > 1.0 && q > p, "plasma needs 1 < p < q");
    return {OperatorFamily::Plasma, p, q, std::nullopt};
}

PhiOperator PhiOperator::elasticity(double p) {
    require(p > 0.5, "elasticity needs p > 1/2");
    return {OperatorFamily::Elasticity, p, 0.0, std::nullopt};
}

PhiOperator PhiOperator::plasticity(double p, double q) {
    require(p > 1.0 && q > 0.0, "plasticity needs p > 1 and q > 0");
    return {OperatorFamily::Plasticity, p, q, std::nullopt};
}

PhiOperator PhiOperator::newtonian(double p, double q) {
    require(p >= 0.0 && p <= 1.0 && q > 0.0, "newtonian needs 0 <= p <= 1 and q > 0");
    return {OperatorFamily::Newtonian, p, q, std::nullopt};
}

PhiOperator PhiOperator::custom(Expr phi) {
    PhiOperator op{OperatorFamily::Custom, 0.0, 0.0, std::move(phi)};
    const OperatorCheck check = validate_operator(op);
    if (!check.ok()) throw ConfigError("custom operator rejected: " + check.detail);
    return op;
}

std::string PhiOperator::describe() const {
    std::ostringstream os;
    os << to_string(family_);
    switch (family_) {
        case OperatorFamily::Laplacian: break;
        case OperatorFamily::PLaplacian:
        case OperatorFamily::Elasticity: os << "(p=" << p_ << ")"; break;
        case OperatorFamily::Custom: os << "(" << expr_->to_string() << ")"; break;
        default: os << "(p=" << p_ << ", q=" << q_ << ")"; break;
    }
    return os.str();
}

double PhiOperator::phi(double t) const {
    switch (family_) {
        case OperatorFamily::Laplacian: return 1.0;
        case OperatorFamily::PLaplacian: return std::pow(t, p_ - 2.0);
        case OperatorFamily::Plasma: return std::pow(t, p_ - 2.0) + std::pow(t, q_ - 2.0);
        case OperatorFamily::Elasticity: return 2.0 * p_ * std::pow(1.0 + t * t, p_ - 1.0);
        case OperatorFamily::Newtonian: return std::pow(t, -p_) * std::pow(std::asinh(t), q_);
        case OperatorFamily::Plasticity: return h(t) / t;
        case OperatorFamily::Custom: return (*expr_)(t);
    }
    return 0.0;
}

double PhiOperator::h(double t) const {
    if (t == 0.0) return 0.0;
    double value = 0.0;
    switch (family_) {
        case OperatorFamily::Laplacian: value = t; break;
        case OperatorFamily::PLaplacian: value = std::pow(t, p_ - 1.0); break;
        case OperatorFamily::Plasma: value = std::pow(t, p_ - 1.0) + std::pow(t, q_ - 1.0); break;
        case OperatorFamily::Elasticity: value = 2.0 * p_ * t * std::pow(1.0 + t * t, p_ - 1.0); break;
        case OperatorFamily::Plasticity: {
            const double L = std::log1p(t);
            value = p_ * std::pow(t, p_ - 1.0) * std::pow(L, q_) + q_ * std::pow(t, p_) * std::pow(L, q_ - 1.0) / (1.0 + t);
            break;
        }
        case OperatorFamily::Newtonian: value = std::pow(t, 1.0 - p_) * std::pow(std::asinh(t), q_); break;
        case OperatorFamily::Custom:
            try {
                value = t * (*expr_)(t);
            } catch (const DomainError& e) {
                throw NumericError("h_eval", t, e.what());
            }
            break;
    }
    if (!std::isfinite(value)) throw NumericError("h_eval", t, "non-finite flux for " + describe());
    return value;
}

bool PhiOperator::has_analytic_inverse() const {
    switch (family_) {
        case OperatorFamily::Laplacian:
        case OperatorFamily::PLaplacian: return true;
        case OperatorFamily::Plasma: return q_ - 1.0 == 2.0 * (p_ - 1.0);
        case OperatorFamily::Elasticity: return p_ == 1.0;
        case OperatorFamily::Newtonian: return p_ == 1.0;
        default: return false;
    }
}

double PhiOperator::h_inverse(double s) const {
    if (!(s >= 0.0)) throw NumericError("h_inverse", s, "negative or NaN argument");
    if (s == 0.0) return 0.0;
    if (!std::isfinite(s)) throw NumericError("h_inverse", s, "non-finite argument");
    if (has_analytic_inverse()) {
        const double t = analytic_inverse(s);
        if (!std::isfinite(t)) {
            throw NumericError("h_inverse", s, describe() + " has no representable preimage (operator unsuitable)");
        }
        return t;
    }
    return bisect_inverse(s);
}

double PhiOperator::analytic_inverse(double s) const {
    switch (family_) {
        case OperatorFamily::Laplacian: return s;
        case OperatorFamily::PLaplacian: return std::pow(s, 1.0 / (p_ - 1.0));
        case OperatorFamily::Plasma: {
            // y = t^(p-1) solves y + y^2 = s
            const double y = 2.0 * s / (1.0 + std::sqrt(1.0 + 4.0 * s));
            return std::pow(y, 1.0 / (p_ - 1.0));
        }
        case OperatorFamily::Elasticity: return 0.5 * s;
        case OperatorFamily::Newtonian: return std::sinh(std::pow(s, 1.0 / q_));
        default: return bisect_inverse(s);
    }
}

double PhiOperator::bisect_inverse(double s) const {
    double lo = 0.0, hi = 1.0;
    if (h(1.0) >= s) {
        lo = 0.5;
        while (h(lo) >= s) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-300) return lo;
        }
    } else {
        lo = 1.0;
        hi = 2.0;
        while (h(hi) < s) {
            lo = hi;
            hi *= 2.0;
            if (hi > kBracketCap) {
                throw NumericError("h_inverse", s, describe() + " is not surjective on the needed range (operator unsuitable)");
            }
        }
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (h(mid) < s) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

PhiOperator make_operator(const OperatorSpec& spec, const std::map<std::string, double>& params) {
    switch (operator_family_from_string(spec.family)) {
        case OperatorFamily::Laplacian: return PhiOperator::laplacian();
        case OperatorFamily::PLaplacian: return PhiOperator::p_laplacian(spec.p);
        case OperatorFamily::Plasma: return PhiOperator::plasma(spec.p, spec.q);
        case OperatorFamily::Elasticity: return PhiOperator::elasticity(spec.p);
        case OperatorFamily::Plasticity: return PhiOperator::plasticity(spec.p, spec.q);
        case OperatorFamily::Newtonian: return PhiOperator::newtonian(spec.p, spec.q);
        case OperatorFamily::Custom: return PhiOperator::custom(Expr::parse(spec.expr, params));
    }
    throw ConfigError("unknown operator family");
}

std::vector<double> validation_grid() { return log_grid(1e-8, 1e8, 512); }

OperatorCheck validate_operator(const PhiOperator& op, const std::vector<double>& grid) {
    OperatorCheck check;
    std::vector<double> hv(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        double phi = 0.0;
        try {
            phi = op.phi(t);
            hv[i] = op.h(t);
        } catch (const std::exception& e) {
            check.o1 = false;
            check.detail = std::string("phi undefined at t=") + std::to_string(t) + ": " + e.what();
            return check;
        }
        if (!(phi > 0.0) || !std::isfinite(phi)) {
            check.o1 = false;
            check.detail = "phi not positive and finite at t=" + std::to_string(t);
            return check;
        }
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(hv[i] > hv[i - 1])) {
            if (grid[i] <= 1e-6) {
                check.o1 = false;
                check.detail = "t*phi(t) does not decrease toward 0 near t=" + std::to_string(grid[i]);
            } else {
                check.o2 = false;
                check.detail = "t*phi(t) not strictly increasing near t=" + std::to_string(grid[i]);
            }
            return check;
        }
    }
    // Log-log slope of h at the top of the grid; a bounded flux has slope -> 0.
    const std::size_t n = grid.size();
    const double slope = std::log(hv[n - 1] / hv[n - 2]) / std::log(grid[n - 1] / grid[n - 2]);
    if (!(slope >= 1e-3)) {
        check.unbounded = false;
        check.detail = "h appears bounded (log-log slope " + std::to_string(slope) + " at t=1e8)";
    }
    return check;
}

DerivedEnvelopes derive_envelopes(const PhiOperator& op, const EnvelopeScan& scan) {
    const OperatorCheck check = validate_operator(op);
    if (!check.ok()) throw ConfigError("operator fails (O1)/(O2): " + check.detail);

    const std::vector<double> t = log_grid(scan.t_min, scan.t_max, scan.points);
    const double delta = 1e-4;
    auto log_slope = [&](double x) {
        return (std::log(op.h(x * std::exp(delta))) - std::log(op.h(x * std::exp(-delta)))) / (2.0 * delta);
    };

    // Phi(t) = int_0^t h, by Simpson in x = ln t, started from the local power law at t_min.
    auto integrand = [&](double x) {
        const double e = std::exp(x);
        return op.h(e) * e;
    };
    std::vector<double> Phi(t.size());
    Phi[0] = t[0] * op.h(t[0]) / (1.0 + log_slope(t[0]));
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double x0 = std::log(t[i - 1]), x1 = std::log(t[i]);
        Phi[i] = Phi[i - 1] + (x1 - x0) / 6.0 * (integrand(x0) + 4.0 * integrand(0.5 * (x0 + x1)) + integrand(x1));
    }

    GrowthExponents g{HUGE_VAL, 0.0, HUGE_VAL, 0.0};
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double ratio_phi = t[i] * op.h(t[i]) / Phi[i];
        const double ratio_h = log_slope(t[i]);
        g.l = std::min(g.l, ratio_phi);
        g.m = std::max(g.m, ratio_phi);
        g.a0 = std::min(g.a0, ratio_h);
        g.a1 = std::max(g.a1, ratio_h);
    }
    if (!(g.l > 1.0)) {
        throw ConfigError(op.describe() + ": t Phi'(t)/Phi(t) reaches " + std::to_string(g.l) +
                          " <= 1, (O4) fails; no envelope construction");
    }
    if (!(g.a0 > 0.0)) throw ConfigError(op.describe() + ": t h'(t)/h(t) not positive; (O5) fails");

    const double a0 = g.a0 * (1.0 - 1e-6);
    const double a1 = g.a1 * (1.0 + 1e-6);
    EnvelopeSet env;
    env.k_under = 1.0;
    env.k_bar = 1.0;
    env.theta_under = [a0, a1](double s) { return std::min(std::pow(s, 1.0 / a1), std::pow(s, 1.0 / a0)); };
    env.theta_bar = [a0, a1](double s) { return std::max(std::pow(s, 1.0 / a1), std::pow(s, 1.0 / a0)); };
    env.psi_under = [op](double s) { return op.h_inverse(s); };
    env.psi_bar = env.psi_under;
    env.psi_bar_is_h_inverse = true;
    std::ostringstream os;
    os << "psi = h^-1, k = 1, theta = min/max(t^(1/" << a1 << "), t^(1/" << a0 << "))";
    env.description = os.str();

    const IneqCheck ineq = check_envelope_inequality(op, env);
    if (ineq.violations > 0) {
        throw ConfigError(op.describe() + ": derived envelopes violate the h^-1 sandwich at " +
                          std::to_string(ineq.violations) + " sampled points");
    }
    return {env, g};
}

IneqCheck check_envelope_inequality(const PhiOperator& op, const EnvelopeSet& env, double S, int n) {
    IneqCheck result;
    const std::vector<double> s = log_grid(S * 1e-6, S, n);
    for (double s1 : s) {
        for (double s2 : s) {
            const double mid = op.h_inverse(s1 * s2);
            const double lower = env.k_under * env.theta_under(s1) * env.psi_under(s2);
            const double upper = env.k_bar * env.theta_bar(s1) * env.psi_bar(s2);
            const double tol = 1e-9 * mid;
            ++result.samples;
            const double excess = std::max(lower - mid, mid - upper);
            if (excess > tol) {
                ++result.violations;
                result.worst_relative = std::max(result.worst_relative, excess / mid);
            }
        }
    }
    return result;
}

}  // namespace rps
