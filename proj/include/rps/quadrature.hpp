#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rps {

/// Uniform radial grid 0 = r_0 < r_1 < ... < r_n = r_max.
struct RadialGrid {
    double r_max = 0.0;
    double step = 0.0;
    std::vector<double> nodes;

    std::size_t size() const { return nodes.size(); }
};

/// Builds a uniform grid; r_max is rounded to a whole number of steps.
RadialGrid make_grid(double r_max, double step);

/// Composite-trapezoid prefix integral. out[0] = 0. Throws DomainError on
/// non-finite samples.
std::vector<double> cumulative_integral(std::span<const double> values, std::span<const double> nodes);

/// t^{-k} * int_0^t s^k w(s) ds at every node, with w interpolated linearly
/// between nodes and the power s^k integrated exactly. The value at t = 0 is 0.
/// k = 0 reduces to the trapezoid rule.
std::vector<double> weighted_mean_prefix(std::span<const double> w, int k, std::span<const double> nodes);

/// K[w](t) = t^{1-N} int_0^t s^{N-1} w(s) ds, the kernel of the radial
/// integral equations. K[c](t) = c t / N exactly.
std::vector<double> radial_kernel(std::span<const double> w, int N, std::span<const double> nodes);

/// Linear interpolation of nodal values; clamps to the end values outside the mesh.
double interpolate(std::span<const double> nodes, std::span<const double> values, double x);

/// Probe radii R_k = R0 * factor^k, k = 0 .. count-1.
struct ProbeSchedule {
    double R0 = 1.0;
    double factor = 2.0;
    int count = 15;

    double radius(int k) const;
    double last_radius() const { return radius(count - 1); }
};

/// Piecewise-uniform mesh on [origin, origin + R_last]: `nodes_per_block`
/// intervals on [0, R0] and on every [R_k, R_{k+1}]. Relative resolution is
/// the same in every block, so functionals can be carried out to large radii
/// at fixed cost.
struct ProbeMesh {
    std::vector<double> nodes;
    std::vector<std::size_t> probe_index;  // node index of origin + R_k
};

ProbeMesh make_probe_mesh(const ProbeSchedule& schedule, int nodes_per_block, double origin = 0.0);

enum class LimitKind { Finite, Divergent, Indeterminate };

std::string to_string(LimitKind kind);

/// Outcome of probing lim_{R -> inf} F(R) for a nondecreasing F.
struct LimitVerdict {
    LimitKind kind = LimitKind::Indeterminate;
    double value = 0.0;           // extrapolated limit when Finite, else F(R_last)
    double error_estimate = 0.0;  // geometric tail bound when Finite
    std::string note;
    std::vector<std::pair<double, double>> probe_values;  // (R, F(R))

    bool finite() const { return kind == LimitKind::Finite; }
    bool divergent() const { return kind == LimitKind::Divergent; }
    bool indeterminate() const { return kind == LimitKind::Indeterminate; }
};

struct ProbeSettings {
    ProbeSchedule schedule;
    double tail_tol = 1e-3;
    double blowup_threshold = 1e8;
    int nodes_per_block = 2048;
};

/// Decides convergence of F at the schedule radii.
///
/// Divergent when F(R_last) exceeds the blow-up threshold, F turns non-finite,
/// or the last three increments fail to shrink (both successive ratios
/// >= 0.9). Finite when the last three increments are nonincreasing with both
/// ratios < 0.9 and the geometric tail bound d*q/(1-q) is within
/// tail_tol * max(1, |F(R_last)|); the reported value adds that tail.
/// Everything else is Indeterminate.
LimitVerdict improper_limit_probe(const std::function<double(double)>& F, const ProbeSchedule& schedule,
                                  double tail_tol, double blowup_threshold);

/// Same decision rule applied to precomputed samples (R_k, F(R_k)).
LimitVerdict classify_probe_trace(std::vector<std::pair<double, double>> trace, double tail_tol,
                                  double blowup_threshold);

}  // namespace rps
