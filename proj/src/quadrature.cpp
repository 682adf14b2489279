#include "rps/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "rps/errors.hpp"

namespace rps {

namespace {

struct GaussRule {
    std::vector<double> x;  // on [0, 1]
    std::vector<double> w;
};

GaussRule compute_gauss_legendre(int n) {
    GaussRule rule;
    rule.x.resize(static_cast<std::size_t>(n));
    rule.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        rule.x[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
        rule.w[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    return rule;
}

const GaussRule& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::vector<std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mutex);
    if (cache.size() <= static_cast<std::size_t>(n)) cache.resize(static_cast<std::size_t>(n) + 1);
    auto& slot = cache[static_cast<std::size_t>(n)];
    if (!slot) slot = std::make_unique<GaussRule>(compute_gauss_legendre(n));
    return *slot;
}

void require_finite(std::span<const double> values, std::span<const double> nodes, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw DomainError(std::string(what) + ": non-finite sample at r=" + std::to_string(nodes[i]));
        }
    }
}

}  // namespace

RadialGrid make_grid(double r_max, double step) {
    if (!(r_max > 0.0) || !(step > 0.0)) throw ConfigError("grid needs positive r_max and step");
    const auto intervals = static_cast<std::size_t>(std::llround(r_max / step));
    if (intervals == 0) throw ConfigError("grid step larger than r_max");
    RadialGrid grid;
    grid.step = step;
    grid.nodes.resize(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) grid.nodes[i] = static_cast<double>(i) * step;
    grid.r_max = grid.nodes.back();
    return grid;
}

std::vector<double> cumulative_integral(std::span<const double> values, std::span<const double> nodes) {
    require_finite(values, nodes, "cumulative_integral");
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t i = 1; i < values.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * (nodes[i] - nodes[i - 1]) * (values[i - 1] + values[i]);
    }
    return out;
}

std::vector<double> weighted_mean_prefix(std::span<const double> w, int k, std::span<const double> nodes) {
    require_finite(w, nodes, "weighted_mean_prefix");
    if (k == 0) return cumulative_integral(w, nodes);

    // Per interval [a, b] with s = a + h*tau:
    //   int_a^b (s/b)^k w(s) ds = h * int_0^1 ((a + h tau)/b)^k ((1-tau) w_a + tau w_b) dtau,
    // a polynomial of degree k+1 in tau, integrated exactly by Gauss-Legendre.
    const GaussRule& rule = gauss_legendre(k / 2 + 1);
    std::vector<double> out(w.size(), 0.0);
    for (std::size_t i = 1; i < w.size(); ++i) {
        const double a = nodes[i - 1];
        const double b = nodes[i];
        const double h = b - a;
        double left = 0.0, right = 0.0;
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
            const double tau = rule.x[q];
            const double weight = rule.w[q] * std::pow((a + h * tau) / b, k);
            left += weight * (1.0 - tau);
            right += weight * tau;
        }
        const double shrink = std::pow(a / b, k);
        out[i] = out[i - 1] * shrink + h * (left * w[i - 1] + right * w[i]);
    }
    return out;
}

std::vector<double> radial_kernel(std::span<const double> w, int N, std::span<const double> nodes) {
    if (N < 1) throw ConfigError("radial_kernel needs N >= 1");
    return weighted_mean_prefix(w, N - 1, nodes);
}

double interpolate(std::span<const double> nodes, std::span<const double> values, double x) {
    if (x <= nodes.front()) return values.front();
    if (x >= nodes.back()) return values.back();
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    const auto i = static_cast<std::size_t>(it - nodes.begin());
    const double t = (x - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
    return values[i - 1] + t * (values[i] - values[i - 1]);
}

double ProbeSchedule::radius(int k) const { return R0 * std::pow(factor, k); }

ProbeMesh make_probe_mesh(const ProbeSchedule& schedule, int nodes_per_block, double origin) {
    if (!(schedule.R0 > 0.0) || !(schedule.factor > 1.0) || schedule.count < 1 || nodes_per_block < 1) {
        throw ConfigError("invalid probe schedule");
    }
    ProbeMesh mesh;
    mesh.nodes.reserve(static_cast<std::size_t>(schedule.count * nodes_per_block + 1));
    mesh.nodes.push_back(origin);
    double lo = 0.0;
    for (int k = 0; k < schedule.count; ++k) {
        const double hi = schedule.radius(k);
        for (int j = 1; j <= nodes_per_block; ++j) {
            const double x = j == nodes_per_block ? hi : lo + (hi - lo) * j / nodes_per_block;
            mesh.nodes.push_back(origin + x);
        }
        mesh.probe_index.push_back(mesh.nodes.size() - 1);
        lo = hi;
    }
    return mesh;
}

std::string to_string(LimitKind kind) {
    switch (kind) {
        case LimitKind::Finite: return "finite";
        case LimitKind::Divergent: return "divergent";
        case LimitKind::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

LimitVerdict classify_probe_trace(std::vector<std::pair<double, double>> trace, double tail_tol,
                                  double blowup_threshold) {
    LimitVerdict verdict;
    verdict.probe_values = std::move(trace);
    const auto& pv = verdict.probe_values;
    if (pv.empty()) {
        verdict.note = "empty probe schedule";
        return verdict;
    }
    for (const auto& [R, F] : pv) {
        if (!std::isfinite(F)) {
            verdict.kind = LimitKind::Divergent;
            verdict.value = F;
            verdict.note = "non-finite value at R=" + std::to_string(R);
            return verdict;
        }
    }
    const double last = pv.back().second;
    verdict.value = last;
    if (last > blowup_threshold) {
        verdict.kind = LimitKind::Divergent;
        verdict.note = "exceeds blow-up threshold";
        return verdict;
    }
    if (pv.size() < 4) {
        verdict.note = "fewer than 4 probes";
        return verdict;
    }

    const std::size_t n = pv.size();
    const double scale = std::max(1.0, std::abs(last));
    const double negligible = 1e-13 * scale;
    auto increment = [&](std::size_t i) { return std::max(0.0, pv[i].second - pv[i - 1].second); };
    const double d1 = increment(n - 3);
    const double d2 = increment(n - 2);
    const double d3 = increment(n - 1);

    if (d2 <= negligible && d3 <= negligible) {
        verdict.kind = LimitKind::Finite;
        verdict.error_estimate = d3;
        verdict.note = "stationary";
        return verdict;
    }
    const double q1 = d1 > negligible ? d2 / d1 : HUGE_VAL;
    const double q2 = d2 > negligible ? d3 / d2 : HUGE_VAL;
    if (q1 >= 0.9 && q2 >= 0.9) {
        verdict.kind = LimitKind::Divergent;
        verdict.note = "increments not decaying (ratios " + std::to_string(q1) + ", " + std::to_string(q2) + ")";
        return verdict;
    }
    if (q1 < 0.9 && q2 < 0.9) {
        const double q = std::max(q1, q2);
        const double tail = d3 * q / (1.0 - q);
        if (tail <= tail_tol * scale) {
            verdict.kind = LimitKind::Finite;
            verdict.value = last + tail;
            verdict.error_estimate = tail;
            verdict.note = "geometric decay, ratio " + std::to_string(q);
            return verdict;
        }
        verdict.note = "decaying increments but tail bound " + std::to_string(tail) + " above tolerance";
        return verdict;
    }
    verdict.note = "irregular increments (ratios " + std::to_string(q1) + ", " + std::to_string(q2) + ")";
    return verdict;
}

LimitVerdict improper_limit_probe(const std::function<double(double)>& F, const ProbeSchedule& schedule,
                                  double tail_tol, double blowup_threshold) {
    std::vector<std::pair<double, double>> trace;
    for (int k = 0; k < schedule.count; ++k) {
        const double R = schedule.radius(k);
        double value = 0.0;
        try {
            value = F(R);
        } catch (const DomainError&) {
            value = HUGE_VAL;
        }
        trace.emplace_back(R, value);
        if (!std::isfinite(value)) break;
    }
    return classify_probe_trace(std::move(trace), tail_tol, blowup_threshold);
}

}  // namespace rps
