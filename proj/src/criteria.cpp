#include "rps/criteria.hpp"

#include <algorithm>
#include <cmath>

#include "rps/errors.hpp"

namespace rps {

namespace {

constexpr double kInf = HUGE_VAL;
constexpr double kHCap = 1e300;
constexpr int kMaxHBlocks = 1000;

std::size_t first_nonfinite(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) return i;
    }
    return v.size();
}

// Prefix transforms that tolerate an overflow: everything from the first
// non-finite sample on is +inf.
std::vector<double> kernel_finite(const std::vector<double>& w, int N, const std::vector<double>& nodes) {
    const std::size_t n = first_nonfinite(w);
    if (n == w.size()) return radial_kernel(w, N, nodes);
    std::vector<double> out(w.size(), kInf);
    if (n > 0) {
        const auto head = radial_kernel(std::span(w).first(n), N, std::span(nodes).first(n));
        std::copy(head.begin(), head.end(), out.begin());
    }
    return out;
}

std::vector<double> cumulative_finite(const std::vector<double>& v, const std::vector<double>& nodes) {
    const std::size_t n = first_nonfinite(v);
    if (n == v.size()) return cumulative_integral(v, nodes);
    std::vector<double> out(v.size(), kInf);
    if (n > 0) {
        const auto head = cumulative_integral(std::span(v).first(n), std::span(nodes).first(n));
        std::copy(head.begin(), head.end(), out.begin());
    }
    return out;
}

// Applies fn; +inf stays +inf, and an inversion bracket overflow counts as +inf.
double apply(const ScalarFn& fn, double x) {
    if (!std::isfinite(x)) return kInf;
    try {
        const double y = fn(x);
        return std::isnan(y) ? kInf : y;
    } catch (const NumericError&) {
        return kInf;
    }
}

std::vector<double> uniform_nodes(double t, int intervals) {
    std::vector<double> nodes(static_cast<std::size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i) nodes[static_cast<std::size_t>(i)] = t * i / intervals;
    nodes.back() = t;
    return nodes;
}

LimitVerdict probe_curve(const std::vector<double>& curve, const ProbeMesh& mesh, const ProbeSettings& settings) {
    std::vector<std::pair<double, double>> trace;
    for (std::size_t k = 0; k < mesh.probe_index.size(); ++k) {
        const double F = curve[mesh.probe_index[k]];
        trace.emplace_back(settings.schedule.radius(static_cast<int>(k)), F);
        if (!std::isfinite(F)) break;
    }
    return classify_probe_trace(std::move(trace), settings.tail_tol, settings.blowup_threshold);
}

}  // namespace

std::string to_string(Variant v) { return v == Variant::Bar ? "bar" : "under"; }
std::string to_string(Pair p) { return p == Pair::P12 ? "12" : "21"; }

std::vector<double> sample_weight(const Weight& a, const std::vector<double>& nodes) {
    std::vector<double> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        try {
            out[i] = a(nodes[i]);
        } catch (const DomainError&) {
            out[i] = kInf;
        }
        if (std::isnan(out[i])) out[i] = kInf;
    }
    return out;
}

std::vector<double> A_curve(const ProblemSpec& spec, int side, Variant variant, const std::vector<double>& nodes) {
    const Side& sd = spec.side(side);
    const ScalarFn& psi = variant == Variant::Bar ? sd.env.psi_bar : sd.env.psi_under;
    const double k = variant == Variant::Bar ? sd.env.k_bar : sd.env.k_under;
    const std::vector<double> K = kernel_finite(sample_weight(sd.a, nodes), spec.N, nodes);
    std::vector<double> integrand(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) integrand[i] = k * apply(psi, K[i]);
    return cumulative_finite(integrand, nodes);
}

std::vector<double> P_curve(const ProblemSpec& spec, Pair pair, Variant variant, const std::vector<double>& nodes,
                            bool simplified) {
    const int i = own_side(pair);
    const int j = other_side(pair);
    const Side& sd = spec.side(i);
    const std::string name = "P" + to_string(variant) + to_string(pair);
    if (variant == Variant::Bar && !simplified && !sd.f.has_upper) {
        throw ConfigError(name + " needs (C2) data for f" + std::to_string(i));
    }
    if (variant == Variant::Under && !sd.f.has_lower) {
        throw ConfigError(name + " needs (C3) data for f" + std::to_string(i));
    }

    std::vector<double> w = sample_weight(sd.a, nodes);
    if (!simplified) {
        const std::vector<double> A = A_curve(spec, j, variant, nodes);
        const ScalarFn& xi = variant == Variant::Bar ? sd.f.xi_bar : sd.f.xi_under;
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            // a zero weight needs no envelope value
            if (w[n] != 0.0) w[n] *= apply(xi, 1.0 + A[n]);
        }
    }
    const std::vector<double> K = kernel_finite(w, spec.N, nodes);

    std::vector<double> integrand(nodes.size());
    if (variant == Variant::Bar) {
        const double c = simplified ? 1.0 : sd.f.c_bar;
        for (std::size_t n = 0; n < nodes.size(); ++n) integrand[n] = apply(sd.env.psi_bar, c * K[n]);
    } else {
        const double c = sd.f.c_under;
        const PhiOperator& op = sd.op;
        const ScalarFn inv = [&op](double s) { return op.h_inverse(s); };
        for (std::size_t n = 0; n < nodes.size(); ++n) integrand[n] = apply(inv, c * K[n]);
    }
    return cumulative_finite(integrand, nodes);
}

double eval_A(const ProblemSpec& spec, int side, Variant variant, double t, int intervals) {
    if (!(t > 0.0)) return 0.0;
    return A_curve(spec, side, variant, uniform_nodes(t, intervals)).back();
}

double eval_P(const ProblemSpec& spec, Pair pair, Variant variant, double r, bool simplified, int intervals) {
    if (!(r > 0.0)) return 0.0;
    return P_curve(spec, pair, variant, uniform_nodes(r, intervals), simplified).back();
}

HFunctional::HFunctional(ScalarFn integrand, double anchor, std::string label, int nodes_per_block, double R0)
    : integrand_(std::move(integrand)), anchor_(anchor), label_(std::move(label)),
      nodes_per_block_(nodes_per_block), R0_(R0) {
    if (nodes_per_block < 1 || !(R0 > 0.0)) throw ConfigError("invalid H table resolution");
    const double g0 = integrand_(anchor_);
    if (!std::isfinite(g0) || !(g0 > 0.0)) {
        throw NumericError(label_ + " integrand", anchor_, "not finite and positive at the anchor");
    }
    x_.push_back(anchor_);
    g_.push_back(g0);
    H_.push_back(0.0);
}

bool HFunctional::extend() const {
    if (capped_) return false;
    const double lo = blocks_ == 0 ? 0.0 : R0_ * std::ldexp(1.0, blocks_ - 1);
    const double hi = R0_ * std::ldexp(1.0, blocks_);
    if (blocks_ >= kMaxHBlocks || anchor_ + hi > kHCap) {
        capped_ = true;
        return false;
    }
    int added = 0;
    for (int k = 1; k <= nodes_per_block_; ++k) {
        const double x = anchor_ + (k == nodes_per_block_ ? hi : lo + (hi - lo) * k / nodes_per_block_);
        double g = 0.0;
        try {
            g = integrand_(x);
        } catch (const std::exception&) {
            g = std::nan("");
        }
        if (std::isnan(g) || g < 0.0 || std::isinf(g)) {
            capped_ = true;
            return added > 0;
        }
        H_.push_back(H_.back() + 0.5 * (x - x_.back()) * (g + g_.back()));
        x_.push_back(x);
        g_.push_back(g);
        ++added;
    }
    ++blocks_;
    return true;
}

std::size_t HFunctional::cover(double x) const {
    while (x_.back() < x && extend()) {
    }
    return static_cast<std::size_t>(std::lower_bound(x_.begin(), x_.end(), x) - x_.begin());
}

double HFunctional::value(double x) const {
    if (!(x > anchor_)) return 0.0;
    const std::size_t i = cover(x);
    if (i >= x_.size()) return H_.back();
    if (x_[i] == x) return H_[i];
    double gx = 0.0;
    try {
        gx = integrand_(x);
    } catch (const std::exception&) {
        gx = std::nan("");
    }
    if (!std::isfinite(gx)) {
        const double t = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
        gx = g_[i - 1] + t * (g_[i] - g_[i - 1]);
    }
    return H_[i - 1] + 0.5 * (x - x_[i - 1]) * (g_[i - 1] + gx);
}

double HFunctional::inverse(double y) const {
    if (!(y > 0.0)) return anchor_;
    if (std::isinf(y)) return kInf;
    while (H_.back() < y) {
        if (!extend()) return kInf;
    }
    const std::size_t i = static_cast<std::size_t>(std::lower_bound(H_.begin(), H_.end(), y) - H_.begin());
    if (H_[i] == y) return x_[i];
    double lo = x_[i - 1], hi = x_[i];
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (value(mid) < y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

LimitVerdict HFunctional::limit(const ProbeSettings& settings) const {
    std::vector<std::pair<double, double>> trace;
    for (int k = 0; k < settings.schedule.count; ++k) {
        const double R = settings.schedule.radius(k);
        trace.emplace_back(R, value(anchor_ + R));
    }
    LimitVerdict v = classify_probe_trace(std::move(trace), settings.tail_tol, settings.blowup_threshold);
    if (capped_ && v.note.empty()) v.note = "table capped";
    return v;
}

HFunctional make_H(const ProblemSpec& spec, Pair pair, bool mplus_swap, double M_override, int nodes_per_block) {
    const int i = own_side(pair);
    const int j = other_side(pair);
    const Side& own = spec.side(i);
    const Side& other = spec.side(j);
    if (!mplus_swap && !own.f.has_upper) {
        throw ConfigError("H" + to_string(pair) + " needs (C2) data for f" + std::to_string(i));
    }
    const ScalarFn G = mplus_swap ? own.f.f : own.f.g;
    const double M = mplus_swap ? M_override : own.f.M_big;
    const ScalarFn theta_i = own.env.theta_bar;
    const ScalarFn theta_j = other.env.theta_bar;
    const ScalarFn f_j = other.f.f;
    ScalarFn integrand = [=](double t) { return 1.0 / theta_i(G(M * theta_j(f_j(t)))); };
    return HFunctional(std::move(integrand), spec.start(i), "H" + to_string(pair) + (mplus_swap ? "_mplus" : ""),
                       nodes_per_block);
}

LimitVerdict eval_M_plus(const ProblemSpec& spec, int side, const ProbeSettings& settings) {
    const ProbeMesh mesh = make_probe_mesh(settings.schedule, settings.nodes_per_block);
    return probe_curve(A_curve(spec, side == 1 ? 2 : 1, Variant::Bar, mesh.nodes), mesh, settings);
}

const FunctionalEntry* CriteriaReport::find(const std::string& name) const {
    for (const auto& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

double mplus_M(const ProblemSpec& spec, int side, double M_plus) {
    const int j = side == 1 ? 2 : 1;
    const ConstantBounds b = constant_bounds(side, spec.alpha, spec.beta, spec.side(j).env, spec.side(j).f.f);
    return b.M_min * (1.0 + M_plus);
}

CriteriaReport build_report(const ProblemSpec& spec, const ProbeSettings& settings) {
    CriteriaReport report;
    report.a_anchor = spec.alpha;
    report.b_anchor = spec.beta;
    report.settings = settings;
    const ProbeMesh mesh = make_probe_mesh(settings.schedule, settings.nodes_per_block);

    auto run = [&](const std::string& name, auto&& compute) {
        FunctionalEntry e;
        e.name = name;
        try {
            e.verdict = compute();
            e.available = true;
        } catch (const std::exception& ex) {
            e.available = false;
            e.error = ex.what();
            e.verdict.note = ex.what();
        }
        report.entries.push_back(std::move(e));
    };

    for (Variant variant : {Variant::Bar, Variant::Under}) {
        for (Pair pair : {Pair::P12, Pair::P21}) {
            run("P" + to_string(variant) + to_string(pair),
                [&] { return probe_curve(P_curve(spec, pair, variant, mesh.nodes), mesh, settings); });
        }
    }
    for (Pair pair : {Pair::P12, Pair::P21}) {
        run("H" + to_string(pair), [&] { return make_H(spec, pair).limit(settings); });
    }
    for (int side : {1, 2}) {
        run("M" + std::to_string(side) + "plus", [&] {
            return probe_curve(A_curve(spec, side == 1 ? 2 : 1, Variant::Bar, mesh.nodes), mesh, settings);
        });
    }
    for (int side : {1, 2}) {
        const FunctionalEntry* mp = report.find("M" + std::to_string(side) + "plus");
        if (!mp || !mp->available || !mp->verdict.finite() || !(mp->verdict.value > 0.0)) continue;
        const Pair pair = side == 1 ? Pair::P12 : Pair::P21;
        const double Mp = mplus_M(spec, side, mp->verdict.value + mp->verdict.error_estimate);
        report.mplus_swap[side - 1] = true;
        report.M_prime[side - 1] = Mp;
        run("Pbar" + to_string(pair) + "_mplus",
            [&] { return probe_curve(P_curve(spec, pair, Variant::Bar, mesh.nodes, true), mesh, settings); });
        run("H" + to_string(pair) + "_mplus", [&] { return make_H(spec, pair, true, Mp).limit(settings); });
    }
    return report;
}

std::vector<double> upper_bound_curve(const ProblemSpec& spec, Pair pair, const std::vector<double>& nodes,
                                      bool mplus_swap, double M_override) {
    const std::vector<double> P = P_curve(spec, pair, Variant::Bar, nodes, mplus_swap);
    const HFunctional H = make_H(spec, pair, mplus_swap, M_override);
    const double k = spec.side(own_side(pair)).env.k_bar;
    std::vector<double> out(nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) out[n] = H.inverse(k * P[n]);
    return out;
}

std::vector<double> lower_bound_curve(const ProblemSpec& spec, Pair pair, const std::vector<double>& nodes) {
    std::vector<double> P = P_curve(spec, pair, Variant::Under, nodes);
    const double start = spec.start(own_side(pair));
    for (double& p : P) p += start;
    return P;
}

}  // namespace rps
