#include "rps/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "rps/errors.hpp"
#include "rps/expr.hpp"
#include "rps/oracle.hpp"

namespace rps {

namespace {

void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) known = known || it.key() == k;
        if (!known) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

double number(const Json& j, const ParamMap& params, const std::string& field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const Expr e = Expr::parse(j.get<std::string>(), params);
        if (!e.is_constant()) throw ConfigError(field + ": expression must not depend on the variable");
        return e(0.0);
    }
    throw ConfigError(field + " must be a number or a constant expression");
}

double positive(const Json& j, const ParamMap& params, const std::string& field) {
    const double x = number(j, params, field);
    if (!(x > 0.0)) throw ConfigError(field + " must be positive");
    return x;
}

std::string text(const Json& j, const std::string& field) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << j.get<double>();
        return os.str();
    }
    throw ConfigError(field + " must be a string");
}

OperatorSpec parse_operator(const Json& j, const ParamMap& params, const std::string& where) {
    OperatorSpec op;
    if (j.is_string()) {
        op.family = j.get<std::string>();
        return op;
    }
    check_keys(j, {"family", "p", "q", "expr"}, where);
    if (!j.contains("family")) throw ConfigError(where + ".family missing");
    op.family = text(j["family"], where + ".family");
    if (j.contains("p")) op.p = number(j["p"], params, where + ".p");
    if (j.contains("q")) op.q = number(j["q"], params, where + ".q");
    if (j.contains("expr")) op.expr = text(j["expr"], where + ".expr");
    return op;
}

NonlinearitySpec parse_nonlinearity(const Json& j, const ParamMap& params, const std::string& where) {
    NonlinearitySpec f;
    if (j.is_string()) {
        f.family = "custom";
        f.expr = j.get<std::string>();
        return f;
    }
    check_keys(j, {"family", "gamma", "terms", "expr", "c_bar", "g", "xi_bar", "c_under", "xi_under"}, where);
    if (j.contains("family")) f.family = text(j["family"], where + ".family");
    if (j.contains("gamma")) f.gamma = number(j["gamma"], params, where + ".gamma");
    if (j.contains("terms")) {
        if (!j["terms"].is_array()) throw ConfigError(where + ".terms must be an array of [c, gamma] pairs");
        for (const auto& t : j["terms"]) {
            if (!t.is_array() || t.size() != 2) throw ConfigError(where + ".terms entries must be [c, gamma]");
            f.terms.emplace_back(number(t[0], params, where + ".terms"), number(t[1], params, where + ".terms"));
        }
    }
    if (j.contains("expr")) f.expr = text(j["expr"], where + ".expr");
    if (j.contains("c_bar")) f.c_bar = number(j["c_bar"], params, where + ".c_bar");
    if (j.contains("g")) f.g = text(j["g"], where + ".g");
    if (j.contains("xi_bar")) f.xi_bar = text(j["xi_bar"], where + ".xi_bar");
    if (j.contains("c_under")) f.c_under = number(j["c_under"], params, where + ".c_under");
    if (j.contains("xi_under")) f.xi_under = text(j["xi_under"], where + ".xi_under");
    return f;
}

EnvelopeOverride parse_envelope(const Json& j, const ParamMap& params, const std::string& where) {
    check_keys(j, {"k_under", "k_bar", "theta_under", "theta_bar", "psi_under", "psi_bar"}, where);
    EnvelopeOverride e;
    if (j.contains("k_under")) e.k_under = positive(j["k_under"], params, where + ".k_under");
    if (j.contains("k_bar")) e.k_bar = positive(j["k_bar"], params, where + ".k_bar");
    if (j.contains("theta_under")) e.theta_under = text(j["theta_under"], where + ".theta_under");
    if (j.contains("theta_bar")) e.theta_bar = text(j["theta_bar"], where + ".theta_bar");
    if (j.contains("psi_under")) e.psi_under = text(j["psi_under"], where + ".psi_under");
    if (j.contains("psi_bar")) e.psi_bar = text(j["psi_bar"], where + ".psi_bar");
    return e;
}

ParamMap read_params(const Json& problem) {
    ParamMap params;
    if (!problem.contains("params")) return params;
    const Json& p = problem["params"];
    if (!p.is_object()) throw ConfigError("problem.params must be an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
        if (!it.value().is_number()) throw ConfigError("problem.params." + it.key() + " must be a number");
        params[it.key()] = it.value().get<double>();
    }
    return params;
}

NumericsConfig parse_numerics(const Json& j, const ParamMap& params) {
    check_keys(j, {"r_max", "step", "conv_tol", "max_iter", "probe", "tail_tol", "blowup_threshold"}, "numerics");
    NumericsConfig n;
    if (j.contains("r_max")) n.r_max = positive(j["r_max"], params, "numerics.r_max");
    if (j.contains("step")) n.step = positive(j["step"], params, "numerics.step");
    if (n.step > n.r_max) throw ConfigError("numerics.step exceeds numerics.r_max");
    if (j.contains("conv_tol")) n.conv_tol = positive(j["conv_tol"], params, "numerics.conv_tol");
    if (j.contains("max_iter")) {
        const double it = positive(j["max_iter"], params, "numerics.max_iter");
        if (it != static_cast<double>(static_cast<int>(it))) throw ConfigError("numerics.max_iter must be an integer");
        n.max_iter = static_cast<int>(it);
    }
    if (j.contains("probe")) {
        const Json& p = j["probe"];
        check_keys(p, {"R0", "factor", "count", "nodes_per_block"}, "numerics.probe");
        if (p.contains("R0")) n.probe.schedule.R0 = positive(p["R0"], params, "numerics.probe.R0");
        if (p.contains("factor")) n.probe.schedule.factor = positive(p["factor"], params, "numerics.probe.factor");
        if (!(n.probe.schedule.factor > 1.0)) throw ConfigError("numerics.probe.factor must exceed 1");
        if (p.contains("count")) {
            n.probe.schedule.count = static_cast<int>(positive(p["count"], params, "numerics.probe.count"));
            if (n.probe.schedule.count < 4) throw ConfigError("numerics.probe.count must be at least 4");
        }
        if (p.contains("nodes_per_block"))
            n.probe.nodes_per_block =
                static_cast<int>(positive(p["nodes_per_block"], params, "numerics.probe.nodes_per_block"));
    }
    if (j.contains("tail_tol")) n.probe.tail_tol = positive(j["tail_tol"], params, "numerics.tail_tol");
    if (j.contains("blowup_threshold"))
        n.probe.blowup_threshold = positive(j["blowup_threshold"], params, "numerics.blowup_threshold");
    return n;
}

}  // namespace

ProblemInput parse_problem(const Json& j, const ParamMap& overrides) {
    check_keys(j, {"N", "alpha", "beta", "params", "op1", "op2", "a1", "a2", "f1", "f2", "M1", "M2", "m1", "m2",
                   "env1", "env2"},
               "problem");
    ProblemInput in;
    in.params = read_params(j);
    for (const auto& [k, v] : overrides) in.params[k] = v;
    const ParamMap& params = in.params;

    if (j.contains("N")) {
        const double N = number(j["N"], params, "problem.N");
        if (N != static_cast<double>(static_cast<int>(N))) throw ConfigError("problem.N must be an integer");
        in.N = static_cast<int>(N);
    }
    if (j.contains("alpha")) in.alpha = positive(j["alpha"], params, "problem.alpha");
    if (j.contains("beta")) in.beta = positive(j["beta"], params, "problem.beta");
    for (int k = 0; k < 2; ++k) {
        const std::string s = std::to_string(k + 1);
        if (j.contains("op" + s)) in.op[k] = parse_operator(j["op" + s], params, "problem.op" + s);
        if (j.contains("a" + s)) in.a[k] = text(j["a" + s], "problem.a" + s);
        if (j.contains("f" + s)) in.f[k] = parse_nonlinearity(j["f" + s], params, "problem.f" + s);
        if (j.contains("M" + s)) in.M[k] = positive(j["M" + s], params, "problem.M" + s);
        if (j.contains("m" + s)) in.m[k] = positive(j["m" + s], params, "problem.m" + s);
        if (j.contains("env" + s)) in.env[k] = parse_envelope(j["env" + s], params, "problem.env" + s);
    }
    return in;
}

RunConfig parse_config(const Json& doc) {
    check_keys(doc, {"problem", "numerics", "outputs", "manufactured", "sweep", "classify", "validation"}, "config");
    RunConfig cfg;
    cfg.problem_json = doc.contains("problem") ? doc["problem"] : Json::object();
    cfg.problem = parse_problem(cfg.problem_json);
    const ParamMap& params = cfg.problem.params;

    if (doc.contains("numerics")) cfg.numerics = parse_numerics(doc["numerics"], params);

    if (doc.contains("outputs")) {
        const Json& o = doc["outputs"];
        check_keys(o, {"solution_csv", "report_json", "sweep_csv"}, "outputs");
        if (o.contains("solution_csv")) cfg.outputs.solution_csv = text(o["solution_csv"], "outputs.solution_csv");
        if (o.contains("report_json")) cfg.outputs.report_json = text(o["report_json"], "outputs.report_json");
        if (o.contains("sweep_csv")) cfg.outputs.sweep_csv = text(o["sweep_csv"], "outputs.sweep_csv");
    }

    if (doc.contains("manufactured")) {
        const Json& m = doc["manufactured"];
        check_keys(m, {"u_star", "v_star"}, "manufactured");
        if (!m.contains("u_star") || !m.contains("v_star"))
            throw ConfigError("manufactured needs u_star and v_star");
        if (cfg.problem_json.contains("a1") || cfg.problem_json.contains("a2"))
            throw ConfigError("manufactured instances compute a1, a2; remove them from problem");
        if (cfg.problem_json.contains("alpha") || cfg.problem_json.contains("beta"))
            throw ConfigError("manufactured instances take alpha, beta from u_star(0), v_star(0)");
        for (const char* key : {"M1", "M2", "m1", "m2", "env1", "env2"})
            if (cfg.problem_json.contains(key))
                throw ConfigError(std::string("problem.") + key + " is not supported with manufactured instances");
        cfg.manufactured = ManufacturedConfig{text(m["u_star"], "manufactured.u_star"),
                                              text(m["v_star"], "manufactured.v_star")};
    }

    if (doc.contains("sweep")) {
        const Json& s = doc["sweep"];
        check_keys(s, {"parameters"}, "sweep");
        SweepConfig sweep;
        if (s.contains("parameters")) {
            const Json& p = s["parameters"];
            if (!p.is_object()) throw ConfigError("sweep.parameters must be an object of arrays");
            for (auto it = p.begin(); it != p.end(); ++it) {
                if (!it.value().is_array()) throw ConfigError("sweep.parameters." + it.key() + " must be an array");
                std::vector<double> values;
                for (const auto& v : it.value()) values.push_back(number(v, params, "sweep.parameters." + it.key()));
                sweep.parameters.emplace_back(it.key(), std::move(values));
            }
        }
        cfg.sweep = std::move(sweep);
    }

    if (doc.contains("classify")) {
        const Json& c = doc["classify"];
        check_keys(c, {"cross_check"}, "classify");
        if (c.contains("cross_check")) {
            if (!c["cross_check"].is_boolean()) throw ConfigError("classify.cross_check must be a boolean");
            cfg.cross_check = c["cross_check"].get<bool>();
        }
    }

    if (doc.contains("validation")) {
        const Json& v = doc["validation"];
        check_keys(v, {"lair", "yang"}, "validation");
        if (v.contains("lair")) {
            const Json& l = v["lair"];
            check_keys(l, {"alpha_exp", "beta_exp", "a1", "a2"}, "validation.lair");
            LairConfig lc;
            if (l.contains("alpha_exp")) lc.alpha_exp = positive(l["alpha_exp"], params, "validation.lair.alpha_exp");
            if (l.contains("beta_exp")) lc.beta_exp = positive(l["beta_exp"], params, "validation.lair.beta_exp");
            if (l.contains("a1")) lc.a1 = text(l["a1"], "validation.lair.a1");
            if (l.contains("a2")) lc.a2 = text(l["a2"], "validation.lair.a2");
            cfg.lair = lc;
        }
        if (v.contains("yang")) {
            const Json& y = v["yang"];
            check_keys(y, {"f", "a"}, "validation.yang");
            if (!y.contains("a")) throw ConfigError("validation.yang.a missing");
            YangConfig yc;
            if (y.contains("f")) yc.f = text(y["f"], "validation.yang.f");
            yc.a = text(y["a"], "validation.yang.a");
            cfg.yang = yc;
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

ProblemSpec build_problem(const RunConfig& config, const ParamMap& overrides, bool require_c1) {
    const ProblemInput in = overrides.empty() ? config.problem : parse_problem(config.problem_json, overrides);
    if (!config.manufactured) return assemble(in, require_c1);

    ManufacturedSide s1, s2;
    s1.op = make_operator(in.op[0], in.params);
    s2.op = make_operator(in.op[1], in.params);
    s1.f = in.f[0];
    s2.f = in.f[1];
    const Expr u = Expr::parse(config.manufactured->u_star, in.params);
    const Expr v = Expr::parse(config.manufactured->v_star, in.params);
    return manufactured_problem(u, v, s1, s2, in.N, config.numerics.r_max, config.numerics.step, in.params);
}

}  // namespace rps
