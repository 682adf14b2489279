#include "rps/iteration.hpp"

#include <algorithm>
#include <cmath>

#include "rps/errors.hpp"

namespace rps {

namespace {

double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double sup(const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::abs(x));
    return s;
}

}  // namespace

SolverContext make_context(const ProblemSpec& spec, const RadialGrid& grid) {
    SolverContext ctx;
    ctx.spec = &spec;
    ctx.grid = grid;
    for (int k = 0; k < 2; ++k) {
        auto& out = k == 0 ? ctx.a1 : ctx.a2;
        out.resize(grid.size());
        const Weight& w = spec.sides[k].a;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double a = 0.0;
            try {
                a = w(grid.nodes[i]);
            } catch (const DomainError& e) {
                throw NumericError("weight a" + std::to_string(k + 1), grid.nodes[i], e.what());
            }
            if (!std::isfinite(a)) throw NumericError("weight a" + std::to_string(k + 1), grid.nodes[i], "not finite");
            out[i] = a;
        }
    }
    return ctx;
}

IterationState init_state(const ProblemSpec& spec, const RadialGrid& grid) {
    IterationState s;
    s.u.assign(grid.size(), spec.alpha);
    s.v.assign(grid.size(), spec.beta);
    return s;
}

std::vector<double> integral_map(const SolverContext& ctx, int side, const std::vector<double>& other,
                                 std::vector<double>* slope) {
    const ProblemSpec& spec = *ctx.spec;
    const Side& sd = spec.side(side);
    const auto& a = side == 1 ? ctx.a1 : ctx.a2;
    const auto& nodes = ctx.grid.nodes;
    const std::string name = side == 1 ? "u" : "v";
    const std::size_t n = nodes.size();

    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        double fv = 0.0;
        try {
            fv = sd.f.f(other[i]);
        } catch (const DomainError& e) {
            throw NumericError(name + "-sweep f", nodes[i], e.what());
        }
        w[i] = a[i] * fv;
        if (!std::isfinite(w[i])) throw NumericError(name + "-sweep a*f", nodes[i], "non-finite source term");
    }
    const std::vector<double> K = radial_kernel(w, spec.N, nodes);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(K[i])) throw NumericError(name + "-sweep kernel", nodes[i], "non-finite kernel value");
        try {
            d[i] = sd.op.h_inverse(std::max(0.0, K[i]));
        } catch (const NumericError& e) {
            throw NumericError(name + "-sweep h_inverse", nodes[i], e.what());
        }
    }
    std::vector<double> out = cumulative_integral(d, nodes);
    const double start = spec.start(side);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] += start;
        if (!std::isfinite(out[i])) throw NumericError(name + "-sweep integral", nodes[i], "iterate blew up");
    }
    if (slope) *slope = std::move(d);
    return out;
}

IterationState step(const IterationState& state, const SolverContext& ctx) {
    IterationState next;
    next.m = state.m + 1;
    next.u = integral_map(ctx, 1, state.v);
    next.v = integral_map(ctx, 2, next.u);
    next.history = state.history;
    next.history.push_back({next.m, sup_abs_diff(next.u, state.u), sup_abs_diff(next.v, state.v)});
    return next;
}

IterationState step(const IterationState& state, const ProblemSpec& spec, const RadialGrid& grid) {
    return step(state, make_context(spec, grid));
}

RadialSolution solve(const ProblemSpec& spec, const RadialGrid& grid, const SolveOptions& options,
                     const StepObserver& observer) {
    if (!(options.conv_tol > 0.0) || options.max_iter < 1) throw ConfigError("conv_tol > 0 and max_iter >= 1 required");
    const SolverContext ctx = make_context(spec, grid);
    IterationState state = init_state(spec, grid);
    bool converged = false;
    while (state.m < options.max_iter) {
        state = step(state, ctx);
        if (observer) observer(state);
        const SupDiff& last = state.history.back();
        if (last.du <= options.conv_tol * (1.0 + sup(state.u)) && last.dv <= options.conv_tol * (1.0 + sup(state.v))) {
            converged = true;
            break;
        }
    }

    RadialSolution sol;
    sol.grid = grid;
    sol.iterations = state.m;
    sol.converged = converged;
    sol.history = std::move(state.history);
    sol.u = std::move(state.u);
    sol.v = std::move(state.v);
    const Residual res = residual(spec, sol);
    sol.residual_u = res.u;
    sol.residual_v = res.v;
    return sol;
}

Residual residual(const ProblemSpec& spec, const RadialSolution& solution) {
    const SolverContext ctx = make_context(spec, solution.grid);
    Residual r;
    r.u = sup_abs_diff(solution.u, integral_map(ctx, 1, solution.v));
    r.v = sup_abs_diff(solution.v, integral_map(ctx, 2, solution.u));
    return r;
}

std::vector<double> central_difference(const std::vector<double>& values, double step) {
    const std::size_t n = values.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    d.front() = (values[1] - values[0]) / step;
    d.back() = (values[n - 1] - values[n - 2]) / step;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (values[i + 1] - values[i - 1]) / (2.0 * step);
    return d;
}

}  // namespace rps
