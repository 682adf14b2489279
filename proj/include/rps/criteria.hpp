#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rps/model.hpp"
#include "rps/quadrature.hpp"

namespace rps {

enum class Variant { Bar, Under };
/// P12 / H12 belong to the u-equation (side 1), P21 / H21 to the v-equation.
enum class Pair { P12, P21 };

std::string to_string(Variant v);
std::string to_string(Pair p);
inline int own_side(Pair p) { return p == Pair::P12 ? 1 : 2; }
inline int other_side(Pair p) { return p == Pair::P12 ? 2 : 1; }

/// Samples of a weight on arbitrary nodes; DomainError or non-finite values become +inf.
std::vector<double> sample_weight(const Weight& a, const std::vector<double>& nodes);

/// A_{a_i}(t) = int_0^t k psi(K[a_i](s)) ds at every node; Bar uses (k_bar, psi_bar),
/// Under uses (k_under, psi_under).
std::vector<double> A_curve(const ProblemSpec& spec, int side, Variant variant, const std::vector<double>& nodes);

/// P_{i,j} at every node.
///   Bar:   int_0^r psi_bar_i(c_bar_i K[a_i xi_bar_i(1 + A_bar_{a_j})](y)) dy
///   Under: int_0^r h_i^{-1}(c_under_i K[a_i xi_under_i(1 + A_under_{a_j})](y)) dy
/// `simplified` (Bar only) drops the inner factor: int_0^r psi_bar_i(K[a_i](y)) dy.
/// Nodes past an overflow carry +inf. Throws ConfigError when the envelope data is missing.
std::vector<double> P_curve(const ProblemSpec& spec, Pair pair, Variant variant, const std::vector<double>& nodes,
                            bool simplified = false);

/// Point evaluations on a uniform mesh of `intervals` cells over [0, t].
double eval_A(const ProblemSpec& spec, int side, Variant variant, double t, int intervals = 4096);
double eval_P(const ProblemSpec& spec, Pair pair, Variant variant, double r, bool simplified = false,
              int intervals = 4096);

/// H(x) = int_anchor^x integrand(t) dt with a positive integrand, tabulated on
/// geometric blocks [anchor, anchor + R0], [anchor + R0 * 2^k, anchor + R0 * 2^(k+1)]
/// and extended on demand. Not safe for concurrent use (the table grows).
class HFunctional {
public:
    HFunctional(ScalarFn integrand, double anchor, std::string label, int nodes_per_block = 512, double R0 = 1.0);

    double anchor() const { return anchor_; }
    const std::string& label() const { return label_; }
    double derivative(double x) const { return integrand_(x); }

    /// H(x) for x >= anchor (0 below).
    double value(double x) const;
    /// Smallest x >= anchor with H(x) = y; +inf when y is at or above the
    /// supremum reachable before the table cap.
    double inverse(double y) const;
    /// Probe of H(infinity) at anchor + R_k.
    LimitVerdict limit(const ProbeSettings& settings) const;

private:
    bool extend() const;  // adds one block; false once capped
    std::size_t cover(double x) const;  // index of the first node >= x, extending as needed

    ScalarFn integrand_;
    double anchor_;
    std::string label_;
    int nodes_per_block_;
    double R0_;
    mutable std::vector<double> x_;
    mutable std::vector<double> g_;
    mutable std::vector<double> H_;
    mutable int blocks_ = 0;
    mutable bool capped_ = false;
};

/// H_{i,j} with integrand 1/theta_bar_i(G(M theta_bar_j(f_j(t)))), anchored at
/// the own central value. G = g_i and M = M_i normally; with `mplus_swap` set,
/// G = f_i and M = `M_override`.
HFunctional make_H(const ProblemSpec& spec, Pair pair, bool mplus_swap = false, double M_override = 0.0,
                   int nodes_per_block = 512);

/// M_1^+ = A_bar_{a_2}(infinity), M_2^+ = A_bar_{a_1}(infinity).
LimitVerdict eval_M_plus(const ProblemSpec& spec, int side, const ProbeSettings& settings = {});

struct FunctionalEntry {
    std::string name;
    bool available = false;
    LimitVerdict verdict;
    std::string error;
};

struct CriteriaReport {
    double a_anchor = 0.0;
    double b_anchor = 0.0;
    ProbeSettings settings;
    /// Pbar12 Pbar21 Punder12 Punder21 H12 H21 M1plus M2plus, then the
    /// substituted Pbar12_mplus Pbar21_mplus H12_mplus H21_mplus when M_i^+ is finite.
    std::vector<FunctionalEntry> entries;
    bool mplus_swap[2] = {false, false};
    double M_prime[2] = {0.0, 0.0};

    const FunctionalEntry* find(const std::string& name) const;
};

/// M_i' = max{1, start_j / theta_bar_j(f_j(start_i))} (1 + M_i^+).
double mplus_M(const ProblemSpec& spec, int side, double M_plus);

CriteriaReport build_report(const ProblemSpec& spec, const ProbeSettings& settings = {});

/// H_{i,j}^{-1}(k_bar_i P_bar_{i,j}(r)) at each node, standard or substituted form.
std::vector<double> upper_bound_curve(const ProblemSpec& spec, Pair pair, const std::vector<double>& nodes,
                                      bool mplus_swap = false, double M_override = 0.0);
/// start_i + P_under_{i,j}(r) at each node.
std::vector<double> lower_bound_curve(const ProblemSpec& spec, Pair pair, const std::vector<double>& nodes);

}  // namespace rps
