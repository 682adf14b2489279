#include "rps/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "rps/errors.hpp"

namespace rps {

Json json_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

Json to_json(const LimitVerdict& v) {
    Json j;
    j["kind"] = to_string(v.kind);
    j["value"] = json_number(v.value);
    j["error_estimate"] = json_number(v.error_estimate);
    j["note"] = v.note;
    Json probes = Json::array();
    for (const auto& [R, F] : v.probe_values) probes.push_back(Json::array({json_number(R), json_number(F)}));
    j["probes"] = probes;
    return j;
}

Json to_json(const ProblemSpec& spec) {
    Json j;
    j["N"] = spec.N;
    j["alpha"] = json_number(spec.alpha);
    j["beta"] = json_number(spec.beta);
    Json params = Json::object();
    for (const auto& [k, v] : spec.params) params[k] = json_number(v);
    j["params"] = params;
    Json sides = Json::array();
    for (int i = 1; i <= 2; ++i) {
        const Side& s = spec.side(i);
        Json sj;
        sj["operator"] = s.op.describe();
        sj["envelopes"] = s.env.description;
        sj["k_under"] = json_number(s.env.k_under);
        sj["k_bar"] = json_number(s.env.k_bar);
        if (s.growth) {
            sj["growth"] = {{"l", json_number(s.growth->l)},
                            {"m", json_number(s.growth->m)},
                            {"a0", json_number(s.growth->a0)},
                            {"a1", json_number(s.growth->a1)}};
        }
        sj["weight"] = s.a.label;
        sj["nonlinearity"] = s.f.label;
        sj["has_C2_data"] = s.f.has_upper;
        sj["has_C3_data"] = s.f.has_lower;
        sj["M"] = json_number(s.f.M_big);
        sj["m"] = json_number(s.f.m_small);
        sides.push_back(sj);
    }
    j["sides"] = sides;
    j["warnings"] = spec.warnings;
    return j;
}

Json to_json(const HypothesisReport& hyp) {
    Json arr = Json::array();
    for (const auto& e : hyp.entries) {
        arr.push_back({{"name", e.name},
                       {"available", e.available},
                       {"passed", e.passed},
                       {"worst_violation", json_number(e.worst_violation)},
                       {"detail", e.detail}});
    }
    return arr;
}

Json to_json(const CriteriaReport& report) {
    Json j;
    j["a"] = json_number(report.a_anchor);
    j["b"] = json_number(report.b_anchor);
    j["probe"] = {{"R0", json_number(report.settings.schedule.R0)},
                  {"factor", json_number(report.settings.schedule.factor)},
                  {"count", report.settings.schedule.count},
                  {"nodes_per_block", report.settings.nodes_per_block},
                  {"tail_tol", json_number(report.settings.tail_tol)},
                  {"blowup_threshold", json_number(report.settings.blowup_threshold)}};
    Json entries = Json::object();
    for (const auto& e : report.entries) {
        Json ej;
        ej["available"] = e.available;
        if (e.available) ej["limit"] = to_json(e.verdict);
        if (!e.error.empty()) ej["error"] = e.error;
        entries[e.name] = ej;
    }
    j["functionals"] = entries;
    j["mplus_swap"] = Json::array({report.mplus_swap[0], report.mplus_swap[1]});
    j["M_prime"] = Json::array({json_number(report.M_prime[0]), json_number(report.M_prime[1])});
    return j;
}

Json to_json(const Classification& c) {
    Json j;
    j["verdict"] = to_string(c.verdict);
    j["matched_rule"] = c.matched_rule;
    if (!c.refinement.empty()) j["refinement"] = c.refinement;
    Json ev = Json::array();
    for (const auto& e : c.evidence)
        ev.push_back({{"predicate", e.predicate}, {"value", to_string(e.value)}, {"detail", e.detail}});
    j["evidence"] = ev;
    j["warnings"] = c.warnings;
    if (c.sandwich.attached) {
        j["sandwich"] = {{"mplus_swap", Json::array({c.sandwich.mplus_swap[0], c.sandwich.mplus_swap[1]})},
                         {"M_prime", Json::array({json_number(c.sandwich.M_prime[0]),
                                                  json_number(c.sandwich.M_prime[1])})}};
    }
    j["converse"] = {{"enabled", c.converse.enabled}, {"status", c.converse.status}, {"detail", c.converse.detail}};
    return j;
}

Json to_json(const ConsistencyReport& c) {
    auto comp = [](const ComponentCheck& k) {
        return Json{{"expected", k.expected}, {"agreement", to_string(k.agreement)}, {"detail", k.detail}};
    };
    return Json{{"u", comp(c.u)}, {"v", comp(c.v)}, {"agree", c.agree()}};
}

Json to_json(const RadialSolution& sol) {
    Json j;
    j["r_max"] = json_number(sol.grid.r_max);
    j["step"] = json_number(sol.grid.step);
    j["nodes"] = sol.grid.size();
    j["iterations"] = sol.iterations;
    j["converged"] = sol.converged;
    j["residual_u"] = json_number(sol.residual_u);
    j["residual_v"] = json_number(sol.residual_v);
    if (!sol.u.empty()) {
        j["u_end"] = json_number(sol.u.back());
        j["v_end"] = json_number(sol.v.back());
    }
    Json hist = Json::array();
    for (const auto& h : sol.history) hist.push_back(Json::array({h.m, json_number(h.du), json_number(h.dv)}));
    j["history"] = hist;
    return j;
}

Json to_json(const LairVerdicts& v) {
    return Json{{"I1", to_json(v.I1)},
                {"I2", to_json(v.I2)},
                {"moment1", to_json(v.moment1)},
                {"moment2", to_json(v.moment2)},
                {"exists_large", to_string(v.exists_large)},
                {"statement", v.statement}};
}

Json to_json(const YangResult& y) {
    return Json{{"dy", to_json(y.dy)},
                {"dy_holds", to_string(y.dy_holds)},
                {"A_limit", to_json(y.A_limit)},
                {"moment", to_json(y.moment)},
                {"identity_holds", to_string(y.identity_holds)},
                {"relative_gap", json_number(y.relative_gap)},
                {"solvable", to_string(y.dye_solvable)}};
}

void write_solution_csv(std::ostream& os, const RadialSolution& sol) {
    const auto du = central_difference(sol.u, sol.grid.step);
    const auto dv = central_difference(sol.v, sol.grid.step);
    os << "r,u,v,u_prime,v_prime\n";
    char buf[160];
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e,%.12e,%.12e\n", sol.grid.nodes[i], sol.u[i], sol.v[i], du[i],
                      dv[i]);
        os << buf;
    }
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << content;
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace rps
