#include "rps/commands.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include "rps/classifier.hpp"
#include "rps/errors.hpp"
#include "rps/oracle.hpp"
#include "rps/report.hpp"

namespace rps {

namespace {

// Domain errors while reading the problem are bad data, not numeric failures.
ProblemSpec load_problem(const RunConfig& cfg, const ParamMap& overrides = {}, bool require_c1 = true) {
    try {
        return build_problem(cfg, overrides, require_c1);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

SolveOptions solve_options(const RunConfig& cfg) {
    return SolveOptions{cfg.numerics.conv_tol, cfg.numerics.max_iter};
}

RadialSolution run_solve(const RunConfig& cfg, const ProblemSpec& spec) {
    return solve(spec, make_grid(cfg.numerics.r_max, cfg.numerics.step), solve_options(cfg));
}

void write_csv_if_requested(const RunConfig& cfg, const RadialSolution& sol) {
    if (cfg.outputs.solution_csv.empty()) return;
    std::ostringstream os;
    write_solution_csv(os, sol);
    write_text(cfg.outputs.solution_csv, os.str());
}

struct ClassifyRun {
    HypothesisReport hyp;
    CriteriaReport report;
    Classification classification;
};

ClassifyRun run_classify(const RunConfig& cfg, const ProblemSpec& spec) {
    ClassifyRun run;
    run.hyp = check_hypotheses(spec);
    run.report = build_report(spec, cfg.numerics.probe);
    run.classification = classify(spec, run.report, run.hyp);
    return run;
}

std::string format_value(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

}  // namespace

int cmd_solve(const RunConfig& cfg) {
    const ProblemSpec spec = load_problem(cfg);
    const RadialSolution sol = run_solve(cfg, spec);
    write_csv_if_requested(cfg, sol);

    Json out;
    out["command"] = "solve";
    out["status"] = "ok";
    out["problem"] = to_json(spec);
    out["solution"] = to_json(sol);
    if (!sol.converged) out["warnings"] = Json::array({"iteration stopped at max_iter before reaching conv_tol"});
    write_text(cfg.outputs.report_json, dump(out));
    return kExitOk;
}

int cmd_classify(const RunConfig& cfg) {
    const ProblemSpec spec = load_problem(cfg);
    const ClassifyRun run = run_classify(cfg, spec);

    Json out;
    out["command"] = "classify";
    out["status"] = "ok";
    out["problem"] = to_json(spec);
    out["hypotheses"] = to_json(run.hyp);
    out["criteria"] = to_json(run.report);
    out["classification"] = to_json(run.classification);
    if (cfg.cross_check) {
        const RadialSolution sol = run_solve(cfg, spec);
        write_csv_if_requested(cfg, sol);
        out["solution"] = to_json(sol);
        out["consistency"] = to_json(cross_check(spec, run.classification, sol));
    }
    write_text(cfg.outputs.report_json, dump(out));
    return kExitOk;
}

int cmd_validate(const RunConfig& cfg) {
    const ProblemSpec spec = load_problem(cfg, {}, false);
    const HypothesisReport hyp = check_hypotheses(spec);
    bool all_passed = true;
    for (const auto& e : hyp.entries) all_passed = all_passed && (!e.available || e.passed);

    Json ops = Json::array();
    for (int i = 1; i <= 2; ++i) {
        const Side& s = spec.side(i);
        const OperatorCheck oc = validate_operator(s.op);
        const IneqCheck ic = check_envelope_inequality(s.op, s.env);
        all_passed = all_passed && oc.ok() && ic.violations == 0;
        Json j;
        j["side"] = i;
        j["operator"] = s.op.describe();
        j["O1"] = oc.o1;
        j["O2"] = oc.o2;
        j["unbounded"] = oc.unbounded;
        j["detail"] = oc.detail;
        Json env;
        env["description"] = s.env.description;
        if (s.growth) {
            env["l"] = json_number(s.growth->l);
            env["m"] = json_number(s.growth->m);
            env["a0"] = json_number(s.growth->a0);
            env["a1"] = json_number(s.growth->a1);
        }
        env["ineq"] = {{"samples", ic.samples},
                       {"violations", ic.violations},
                       {"worst_relative", json_number(ic.worst_relative)}};
        j["envelopes"] = env;
        ops.push_back(j);
    }

    Json validation = Json::object();
    if (cfg.lair) {
        LairInstance inst;
        inst.alpha_exp = cfg.lair->alpha_exp;
        inst.beta_exp = cfg.lair->beta_exp;
        inst.a1 = Weight::from_expr(Expr::parse(cfg.lair->a1, spec.params));
        inst.a2 = Weight::from_expr(Expr::parse(cfg.lair->a2, spec.params));
        inst.N = spec.N;
        const LairVerdicts lv = lair_criteria(inst, cfg.numerics.probe);
        const ProblemSpec lp = lair_problem(inst);
        const Classification c = classify(lp, build_report(lp, cfg.numerics.probe), check_hypotheses(lp));
        const Tri agree = lair_agrees(lv, c.verdict);
        all_passed = all_passed && agree != Tri::False;
        Json j = to_json(lv);
        j["classifier_verdict"] = to_string(c.verdict);
        j["classifier_rule"] = c.matched_rule;
        j["agreement"] = to_string(agree);
        validation["lair"] = j;
    }
    if (cfg.yang) {
        const Expr f = Expr::parse(cfg.yang->f, spec.params);
        const Weight a = Weight::from_expr(Expr::parse(cfg.yang->a, spec.params));
        const YangResult y = yang_check([f](double t) { return f(t); }, a, spec.N, cfg.numerics.probe);
        all_passed = all_passed && y.identity_holds != Tri::False;
        validation["yang"] = to_json(y);
    }

    Json out;
    out["command"] = "validate";
    out["status"] = "ok";
    out["problem"] = to_json(spec);
    out["hypotheses"] = to_json(hyp);
    out["operators"] = ops;
    out["validation"] = validation;
    out["all_passed"] = all_passed;
    write_text(cfg.outputs.report_json, dump(out));
    return kExitOk;
}

unsigned sweep_threads() {
    if (const char* env = std::getenv("RPS_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

int cmd_sweep(const RunConfig& cfg) {
    if (!cfg.sweep) throw ConfigError("sweep command needs a sweep section");
    const auto& axes = cfg.sweep->parameters;

    std::string csv;
    for (const auto& [name, values] : axes) csv += name + ",";
    csv += "verdict,matched_rule\n";

    std::size_t total = axes.empty() ? 0 : 1;
    for (const auto& [name, values] : axes) total *= values.size();

    std::vector<std::string> rows(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            ParamMap point;
            std::string row;
            std::size_t rest = idx;
            // last axis varies fastest
            std::vector<double> coords(axes.size());
            for (std::size_t k = axes.size(); k-- > 0;) {
                const auto& values = axes[k].second;
                coords[k] = values[rest % values.size()];
                rest /= values.size();
            }
            for (std::size_t k = 0; k < axes.size(); ++k) {
                point[axes[k].first] = coords[k];
                row += format_value(coords[k]) + ",";
            }
            try {
                const ProblemSpec spec = load_problem(cfg, point);
                const ClassifyRun run = run_classify(cfg, spec);
                row += to_string(run.classification.verdict) + "," + run.classification.matched_rule;
            } catch (const std::exception&) {
                row += "error,none";
            }
            rows[idx] = row + "\n";
        }
    };

    const unsigned n = std::min<std::size_t>(sweep_threads(), std::max<std::size_t>(total, 1));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& r : rows) csv += r;
    write_text(cfg.outputs.sweep_csv, csv);
    return kExitOk;
}

int run_command(const std::string& name, const std::string& config_path) {
    std::optional<RunConfig> cfg;
    auto fail = [&](int code, const std::string& kind, const std::string& message, const Json& extra) {
        std::cerr << "rps " << name << ": " << message << "\n";
        Json out;
        out["command"] = name;
        out["status"] = "error";
        out["error"] = {{"kind", kind}, {"message", message}};
        for (auto it = extra.begin(); it != extra.end(); ++it) out["error"][it.key()] = it.value();
        try {
            write_text(cfg ? cfg->outputs.report_json : std::string(), dump(out));
        } catch (const std::exception&) {
        }
        return code;
    };

    try {
        cfg = load_config(config_path);
        if (name == "solve") return cmd_solve(*cfg);
        if (name == "classify") return cmd_classify(*cfg);
        if (name == "validate") return cmd_validate(*cfg);
        if (name == "sweep") return cmd_sweep(*cfg);
        return fail(kExitConfig, "config", "unknown command '" + name + "'", Json::object());
    } catch (const ParseError& e) {
        return fail(kExitConfig, "parse", e.what(), Json{{"offset", e.offset()}});
    } catch (const ConfigError& e) {
        return fail(kExitConfig, "config", e.what(), Json::object());
    } catch (const NumericError& e) {
        return fail(kExitNumeric, "numeric", e.what(), Json{{"stage", e.stage()}, {"radius", json_number(e.radius())}});
    } catch (const DomainError& e) {
        return fail(kExitNumeric, "numeric", e.what(), Json::object());
    } catch (const nlohmann::json::exception& e) {
        return fail(kExitConfig, "config", e.what(), Json::object());
    }
}

}  // namespace rps
