#pragma once

#include <string>
#include <vector>

#include "rps/criteria.hpp"
#include "rps/iteration.hpp"
#include "rps/model.hpp"

namespace rps {

enum class Verdict { BothLarge, BothBounded, UBoundedVLarge, ULargeVBounded, ExistsUnclassified, Indeterminate };

std::string to_string(Verdict v);

/// Three-valued truth for predicates read from probe verdicts.
enum class Tri { True, False, Unknown };

std::string to_string(Tri t);
Tri tri_and(Tri a, Tri b);
Tri tri_or(Tri a, Tri b);

struct Evidence {
    std::string predicate;
    Tri value = Tri::Unknown;
    std::string detail;
};

/// Data needed to rebuild the solution bounds of the bounded-solution theorem.
struct SandwichData {
    bool attached = false;
    bool mplus_swap[2] = {false, false};
    double M_prime[2] = {0.0, 0.0};
};

/// Necessity check of the large-solution theorem: when the lower and upper
/// data coincide, a large solution forces Pbar12 and Pbar21 to diverge.
struct ConverseAdvisory {
    bool enabled = false;
    std::string status = "disabled";  // consistent | inconsistent | unknown | not-applicable | disabled
    std::string detail;
};

struct Classification {
    Verdict verdict = Verdict::Indeterminate;
    std::string matched_rule = "none";
    std::string refinement;  // mplus-u / mplus-v / mplus-both when M_i^+ substitutions were applied
    std::vector<Evidence> evidence;
    std::vector<std::string> warnings;
    SandwichData sandwich;
    ConverseAdvisory converse;
};

/// Decision table, first match wins. A rule fires when all its predicates are
/// True; a rule reached with an Unknown predicate and no False one makes the
/// whole verdict Indeterminate, citing that rule.
///   th1     H12 = H21 = inf, (A)(C1)(C2)(C3), Punder12 = Punder21 = inf   -> BothLarge
///   th12    H12 = H21 = inf, (A)(C1)(C2), Pbar12 < inf, Pbar21 < inf      -> BothBounded
///   th13-1  H both inf, (A)(C1)(C2), (C3) for f2, Pbar12 < inf, Punder21 = inf -> UBoundedVLarge
///   th13-2  mirrored                                                       -> ULargeVBounded
///   th2     (A)(C1)(C2), k Pbar12 < H12 < inf, k Pbar21 < H21 < inf        -> BothBounded + bounds
///   th21    (A)(C1)(C2), (C3) for f1, H12 = inf, Punder12 = inf, Punder21 < H21 < inf -> ULargeVBounded
///   th22    (A)(C1)(C2), (C3) for f2, Punder21 = inf, H21 = inf, k Pbar12 < H12 < inf -> UBoundedVLarge
///   th1-existence  H both inf, (A)(C1)(C2)                                 -> ExistsUnclassified
/// When M_i^+ is finite and positive the substituted Pbar/H of side i are used
/// and (C2) for f_i is not required.
Classification classify(const ProblemSpec& spec, const CriteriaReport& report, const HypothesisReport& hyp);

enum class Agreement { Agree, Disagree, NotApplicable };
std::string to_string(Agreement a);

struct ComponentCheck {
    std::string expected;  // large | bounded | unknown
    Agreement agreement = Agreement::NotApplicable;
    std::string detail;
};

struct ConsistencyReport {
    ComponentCheck u;
    ComponentCheck v;
    bool agree() const { return u.agreement != Agreement::Disagree && v.agreement != Agreement::Disagree; }
};

/// Confronts the verdict with a solution on [0, r_max]: large components must
/// still grow (w(r_max) > w(r_max/2) + growth_margin); bounded components must
/// sit under H^{-1}(k_bar Pbar) and have shrinking increments.
ConsistencyReport cross_check(const ProblemSpec& spec, const Classification& classification,
                              const RadialSolution& solution, double growth_margin = 1e-6);

}  // namespace rps
