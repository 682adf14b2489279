#pragma once

#include <functional>
#include <vector>

#include "rps/model.hpp"
#include "rps/quadrature.hpp"

namespace rps {

struct SupDiff {
    int m = 0;
    double du = 0.0;
    double dv = 0.0;
};

/// Iterate (u_m, v_m) on the grid nodes.
struct IterationState {
    int m = 0;
    std::vector<double> u;
    std::vector<double> v;
    std::vector<SupDiff> history;
};

/// Grid plus the weights sampled on it, shared by every sweep of one solve.
struct SolverContext {
    const ProblemSpec* spec = nullptr;
    RadialGrid grid;
    std::vector<double> a1;
    std::vector<double> a2;
};

/// Throws NumericError when a weight is not finite on the grid.
SolverContext make_context(const ProblemSpec& spec, const RadialGrid& grid);

IterationState init_state(const ProblemSpec& spec, const RadialGrid& grid);

/// One application of the integral map of side i to the other component:
///   start + int_0^r h_i^{-1}(K[a_i f_i(other)](t)) dt.
/// `slope` (optional) receives the integrand h_i^{-1}(K[...]).
std::vector<double> integral_map(const SolverContext& ctx, int side, const std::vector<double>& other,
                                 std::vector<double>* slope = nullptr);

/// u_{m+1} from v_m, then v_{m+1} from the new u_{m+1}.
IterationState step(const IterationState& state, const SolverContext& ctx);
IterationState step(const IterationState& state, const ProblemSpec& spec, const RadialGrid& grid);

struct SolveOptions {
    double conv_tol = 1e-8;
    int max_iter = 200;
};

struct RadialSolution {
    RadialGrid grid;
    std::vector<double> u;
    std::vector<double> v;
    int iterations = 0;
    bool converged = false;
    double residual_u = 0.0;
    double residual_v = 0.0;
    std::vector<SupDiff> history;
};

/// Called after every step with the new state; used by the property tests.
using StepObserver = std::function<void(const IterationState&)>;

/// Iterates until sup|u_m - u_{m-1}| <= conv_tol (1 + sup u_m) and the same
/// for v, or max_iter steps. Residuals come from one further application of
/// the integral maps.
RadialSolution solve(const ProblemSpec& spec, const RadialGrid& grid, const SolveOptions& options = {},
                     const StepObserver& observer = {});

struct Residual {
    double u = 0.0;
    double v = 0.0;
};

Residual residual(const ProblemSpec& spec, const RadialSolution& solution);

/// Central differences in the interior, one-sided at the ends.
std::vector<double> central_difference(const std::vector<double>& values, double step);

}  // namespace rps
