#include "rps/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "rps/errors.hpp"

namespace rps {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::BothLarge: return "BothLarge";
        case Verdict::BothBounded: return "BothBounded";
        case Verdict::UBoundedVLarge: return "UBoundedVLarge";
        case Verdict::ULargeVBounded: return "ULargeVBounded";
        case Verdict::ExistsUnclassified: return "ExistsUnclassified";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

std::string to_string(Tri t) {
    switch (t) {
        case Tri::True: return "true";
        case Tri::False: return "false";
        case Tri::Unknown: return "unknown";
    }
    return "unknown";
}

Tri tri_and(Tri a, Tri b) {
    if (a == Tri::False || b == Tri::False) return Tri::False;
    if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
    return Tri::True;
}

Tri tri_or(Tri a, Tri b) {
    if (a == Tri::True || b == Tri::True) return Tri::True;
    if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
    return Tri::False;
}

std::string to_string(Agreement a) {
    switch (a) {
        case Agreement::Agree: return "agree";
        case Agreement::Disagree: return "disagree";
        case Agreement::NotApplicable: return "not-applicable";
    }
    return "not-applicable";
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(8);
    os << x;
    return os.str();
}

Tri from_bool(bool b) { return b ? Tri::True : Tri::False; }

// Predicate table built once per classification; every lookup is recorded.
class Predicates {
public:
    Predicates(const CriteriaReport& report, const HypothesisReport& hyp) : report_(report), hyp_(hyp) {}

    std::string pbar(int side) const {
        return std::string("Pbar") + (side == 1 ? "12" : "21") + (report_.mplus_swap[side - 1] ? "_mplus" : "");
    }
    std::string hname(int side) const {
        return std::string("H") + (side == 1 ? "12" : "21") + (report_.mplus_swap[side - 1] ? "_mplus" : "");
    }
    std::string punder(int side) const { return side == 1 ? "Punder12" : "Punder21"; }

    Tri hypothesis(const std::string& name) {
        const HypothesisEntry* e = hyp_.find(name);
        const Tri t = from_bool(e && e->available && e->passed);
        record("(" + name + ")", t, e ? e->detail : "not checked");
        return t;
    }

    Tri c2(int side) {
        if (report_.mplus_swap[side - 1]) {
            record("(C2." + std::to_string(side) + ") waived", Tri::True,
                   "M" + std::to_string(side) + "+ finite, M' = " + fmt(report_.M_prime[side - 1]));
            return Tri::True;
        }
        return hypothesis("C2." + std::to_string(side));
    }

    Tri divergent(const std::string& name) {
        const FunctionalEntry* e = report_.find(name);
        Tri t = Tri::Unknown;
        if (e && e->available) {
            if (e->verdict.divergent()) t = Tri::True;
            if (e->verdict.finite()) t = Tri::False;
        }
        record(name + "(inf) = inf", t, describe(e));
        return t;
    }

    Tri finite(const std::string& name) {
        const FunctionalEntry* e = report_.find(name);
        Tri t = Tri::Unknown;
        if (e && e->available) {
            if (e->verdict.divergent()) t = Tri::False;
            if (e->verdict.finite()) t = Tri::True;
        }
        record(name + "(inf) < inf", t, describe(e));
        return t;
    }

    // k * P(inf) < H(inf) < inf
    Tri below_H(const std::string& p, const std::string& h, double k) {
        const FunctionalEntry* pe = report_.find(p);
        const FunctionalEntry* he = report_.find(h);
        Tri t = Tri::Unknown;
        std::string detail;
        if (pe && he && pe->available && he->available) {
            const LimitVerdict& pv = pe->verdict;
            const LimitVerdict& hv = he->verdict;
            if (hv.divergent() || pv.divergent()) {
                t = Tri::False;
            } else if (pv.finite() && hv.finite()) {
                const double lhs = k * pv.value, slack = k * pv.error_estimate + hv.error_estimate;
                if (lhs + slack < hv.value) {
                    t = Tri::True;
                } else if (lhs - slack >= hv.value) {
                    t = Tri::False;
                }
                detail = fmt(lhs) + " vs " + fmt(hv.value) + " (slack " + fmt(slack) + ")";
            }
        }
        const std::string ks = k == 1.0 ? "" : fmt(k) + "*";
        record(ks + p + "(inf) < " + h + "(inf) < inf", t, detail);
        return t;
    }

    const std::vector<Evidence>& evidence() const { return evidence_; }
    void clear() { evidence_.clear(); }

private:
    static std::string describe(const FunctionalEntry* e) {
        if (!e) return "not computed";
        if (!e->available) return "unavailable: " + e->error;
        std::string s = to_string(e->verdict.kind);
        if (e->verdict.finite()) s += " " + fmt(e->verdict.value);
        if (!e->verdict.note.empty()) s += " (" + e->verdict.note + ")";
        return s;
    }

    void record(const std::string& predicate, Tri value, const std::string& detail) {
        for (const auto& e : evidence_) {
            if (e.predicate == predicate) return;
        }
        evidence_.push_back({predicate, value, detail});
    }

    const CriteriaReport& report_;
    const HypothesisReport& hyp_;
    std::vector<Evidence> evidence_;
};

struct Rule {
    std::string id;
    Verdict verdict;
    std::function<Tri(Predicates&)> condition;
};

bool sampled_equal(const ScalarFn& a, const ScalarFn& b) {
    if (!a || !b) return false;
    for (int d = 0; d <= 10; ++d) {
        const double w = std::ldexp(1.0, d);
        try {
            const double x = a(w), y = b(w);
            if (!(std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y)))) return false;
        } catch (const std::exception&) {
            return false;
        }
    }
    return true;
}

bool psi_is_h_inverse(const Side& side) {
    if (side.env.psi_bar_is_h_inverse) return true;
    const PhiOperator& op = side.op;
    return sampled_equal(side.env.psi_bar, [&op](double s) { return op.h_inverse(s); });
}

}  // namespace

Classification classify(const ProblemSpec& spec, const CriteriaReport& report, const HypothesisReport& hyp) {
    Classification out;
    for (int k = 0; k < 2; ++k) {
        out.sandwich.mplus_swap[k] = report.mplus_swap[k];
        out.sandwich.M_prime[k] = report.M_prime[k];
    }
    if (report.mplus_swap[0] && report.mplus_swap[1]) {
        out.refinement = "mplus-both";
    } else if (report.mplus_swap[0]) {
        out.refinement = "mplus-u";
    } else if (report.mplus_swap[1]) {
        out.refinement = "mplus-v";
    }

    const double k1 = spec.side(1).env.k_bar;
    const double k2 = spec.side(2).env.k_bar;

    auto base = [](Predicates& p) {
        Tri t = p.hypothesis("A");
        t = tri_and(t, p.hypothesis("C1"));
        t = tri_and(t, p.c2(1));
        return tri_and(t, p.c2(2));
    };
    auto h_both = [](Predicates& p) { return tri_and(p.divergent(p.hname(1)), p.divergent(p.hname(2))); };

    const std::vector<Rule> rules = {
        {"th1", Verdict::BothLarge,
         [&](Predicates& p) {
             Tri t = tri_and(h_both(p), base(p));
             t = tri_and(t, tri_and(p.hypothesis("C3.1"), p.hypothesis("C3.2")));
             return tri_and(t, tri_and(p.divergent("Punder12"), p.divergent("Punder21")));
         }},
        {"th12", Verdict::BothBounded,
         [&](Predicates& p) {
             const Tri t = tri_and(h_both(p), base(p));
             return tri_and(t, tri_and(p.finite(p.pbar(1)), p.finite(p.pbar(2))));
         }},
        {"th13-1", Verdict::UBoundedVLarge,
         [&](Predicates& p) {
             Tri t = tri_and(h_both(p), base(p));
             t = tri_and(t, p.hypothesis("C3.2"));
             return tri_and(t, tri_and(p.finite(p.pbar(1)), p.divergent("Punder21")));
         }},
        {"th13-2", Verdict::ULargeVBounded,
         [&](Predicates& p) {
             Tri t = tri_and(h_both(p), base(p));
             t = tri_and(t, p.hypothesis("C3.1"));
             return tri_and(t, tri_and(p.divergent("Punder12"), p.finite(p.pbar(2))));
         }},
        {"th2", Verdict::BothBounded,
         [&](Predicates& p) {
             const Tri t = base(p);
             return tri_and(t, tri_and(p.below_H(p.pbar(1), p.hname(1), k1), p.below_H(p.pbar(2), p.hname(2), k2)));
         }},
        {"th21", Verdict::ULargeVBounded,
         [&](Predicates& p) {
             Tri t = tri_and(base(p), p.hypothesis("C3.1"));
             t = tri_and(t, tri_and(p.divergent(p.hname(1)), p.divergent("Punder12")));
             return tri_and(t, p.below_H("Punder21", p.hname(2), 1.0));
         }},
        {"th22", Verdict::UBoundedVLarge,
         [&](Predicates& p) {
             Tri t = tri_and(base(p), p.hypothesis("C3.2"));
             t = tri_and(t, tri_and(p.divergent("Punder21"), p.divergent(p.hname(2))));
             return tri_and(t, p.below_H(p.pbar(1), p.hname(1), k1));
         }},
        {"th1-existence", Verdict::ExistsUnclassified, [&](Predicates& p) { return tri_and(h_both(p), base(p)); }},
    };

    Predicates preds(report, hyp);
    std::size_t fired = rules.size();
    for (std::size_t r = 0; r < rules.size(); ++r) {
        const Tri t = rules[r].condition(preds);
        if (t == Tri::False) continue;
        fired = r;
        out.matched_rule = rules[r].id;
        out.verdict = t == Tri::True ? rules[r].verdict : Verdict::Indeterminate;
        break;
    }
    out.evidence = preds.evidence();

    if (fired < rules.size() && out.verdict != Verdict::Indeterminate) {
        if (out.matched_rule == "th2") out.sandwich.attached = true;
        // later sharp rules that also match with a different verdict
        for (std::size_t r = fired + 1; r + 1 < rules.size(); ++r) {
            Predicates other(report, hyp);
            if (rules[r].condition(other) == Tri::True && rules[r].verdict != out.verdict) {
                out.warnings.push_back("rule " + rules[r].id + " also matches with verdict " +
                                       to_string(rules[r].verdict) + "; table order keeps " + out.matched_rule);
            }
        }
    }

    // converse advisory
    bool enabled = hyp.holds("C1") && hyp.holds("C2.1") && hyp.holds("C2.2") && hyp.holds("C3.1") &&
                   hyp.holds("C3.2");
    for (int i = 1; i <= 2 && enabled; ++i) {
        const Side& s = spec.side(i);
        enabled = sampled_equal(s.f.xi_under, s.f.xi_bar) && psi_is_h_inverse(s);
    }
    out.converse.enabled = enabled;
    if (enabled) {
        if (out.verdict != Verdict::BothLarge) {
            out.converse.status = "not-applicable";
            out.converse.detail = "verdict is not BothLarge";
        } else {
            Predicates p(report, hyp);
            const Tri t = tri_and(p.divergent("Pbar12"), p.divergent("Pbar21"));
            out.converse.status = t == Tri::True ? "consistent" : (t == Tri::False ? "inconsistent" : "unknown");
            out.converse.detail = "large solution requires Pbar12(inf) = Pbar21(inf) = inf";
        }
    }
    return out;
}

namespace {

ComponentCheck check_component(const ProblemSpec& spec, const Classification& c, const RadialSolution& sol,
                               int side, const std::string& expected, double growth_margin) {
    ComponentCheck cc;
    cc.expected = expected;
    const auto& w = side == 1 ? sol.u : sol.v;
    const auto& nodes = sol.grid.nodes;
    const std::size_t n = nodes.size() - 1;
    if (n < 4) {
        cc.detail = "grid too small";
        return cc;
    }
    const double w_end = w[n], w_half = w[n / 2], w_quarter = w[n / 4];
    const std::string name = side == 1 ? "u" : "v";

    if (expected == "large") {
        const bool grows = w_end > w_half + growth_margin;
        cc.agreement = grows ? Agreement::Agree : Agreement::Disagree;
        cc.detail = name + "(r_max) - " + name + "(r_max/2) = " + fmt(w_end - w_half);
        return cc;
    }
    if (expected != "bounded") {
        cc.detail = "no expectation";
        return cc;
    }
    const bool flattening = w_end - w_half <= w_half - w_quarter + 1e-12;
    std::ostringstream detail;
    detail << "increments " << fmt(w_half - w_quarter) << " then " << fmt(w_end - w_half);
    bool sandwich_ok = true;
    const Pair pair = side == 1 ? Pair::P12 : Pair::P21;
    const bool swap = c.sandwich.mplus_swap[side - 1];
    try {
        const auto upper = upper_bound_curve(spec, pair, nodes, swap, c.sandwich.M_prime[side - 1]);
        double worst = -HUGE_VAL;
        for (std::size_t i = 0; i < nodes.size(); ++i) worst = std::max(worst, w[i] - upper[i]);
        sandwich_ok = worst <= 1e-6;
        detail << "; max(" << name << " - upper bound) = " << fmt(worst);
    } catch (const std::exception& e) {
        detail << "; upper bound unavailable: " << e.what();
    }
    cc.agreement = flattening && sandwich_ok ? Agreement::Agree : Agreement::Disagree;
    cc.detail = detail.str();
    return cc;
}

}  // namespace

ConsistencyReport cross_check(const ProblemSpec& spec, const Classification& classification,
                              const RadialSolution& solution, double growth_margin) {
    std::string eu = "unknown", ev = "unknown";
    switch (classification.verdict) {
        case Verdict::BothLarge: eu = ev = "large"; break;
        case Verdict::BothBounded: eu = ev = "bounded"; break;
        case Verdict::UBoundedVLarge: eu = "bounded"; ev = "large"; break;
        case Verdict::ULargeVBounded: eu = "large"; ev = "bounded"; break;
        default: break;
    }
    ConsistencyReport r;
    r.u = check_component(spec, classification, solution, 1, eu, growth_margin);
    r.v = check_component(spec, classification, solution, 2, ev, growth_margin);
    return r;
}

}  // namespace rps
