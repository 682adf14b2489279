#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rps/model.hpp"
#include "rps/quadrature.hpp"

namespace rps {

using Json = nlohmann::ordered_json;

struct NumericsConfig {
    double r_max = 2.0;
    double step = 1e-3;
    double conv_tol = 1e-8;
    int max_iter = 200;
    ProbeSettings probe;
};

struct OutputsConfig {
    std::string solution_csv;
    std::string report_json;  // empty: stdout
    std::string sweep_csv;    // empty: stdout
};

/// Exact pair (u*, v*); the weights are computed from it.
struct ManufacturedConfig {
    std::string u_star;
    std::string v_star;
};

struct SweepConfig {
    std::vector<std::pair<std::string, std::vector<double>>> parameters;  // in file order
};

struct LairConfig {
    double alpha_exp = 1.0;
    double beta_exp = 1.0;
    std::string a1 = "1";
    std::string a2 = "1";
};

struct YangConfig {
    std::string f = "t";
    std::string a;
};

/// Parsed configuration. The raw problem section is kept so sweeps can
/// re-read it with other parameter values.
struct RunConfig {
    Json problem_json;
    ProblemInput problem;
    std::optional<ManufacturedConfig> manufactured;
    NumericsConfig numerics;
    OutputsConfig outputs;
    std::optional<SweepConfig> sweep;
    bool cross_check = false;
    std::optional<LairConfig> lair;
    std::optional<YangConfig> yang;
};

/// Throws ConfigError (unknown key, wrong type, nonpositive numeric field) or
/// ParseError (malformed expression inside a numeric field).
RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::string& path);

/// Reads the problem section with `params` (file params overridden by the given ones).
ProblemInput parse_problem(const Json& problem, const ParamMap& overrides = {});

/// The ProblemSpec of a run: the manufactured instance when that section is
/// present, otherwise the problem section as written.
ProblemSpec build_problem(const RunConfig& config, const ParamMap& overrides = {}, bool require_c1 = true);

}  // namespace rps
