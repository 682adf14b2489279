#pragma once

#include <ostream>
#include <string>

#include "rps/classifier.hpp"
#include "rps/config.hpp"
#include "rps/oracle.hpp"

namespace rps {

/// Finite doubles as numbers; inf, -inf and nan as strings (JSON has no literal for them).
Json json_number(double x);

Json to_json(const LimitVerdict& v);
Json to_json(const ProblemSpec& spec);
Json to_json(const HypothesisReport& hyp);
Json to_json(const CriteriaReport& report);
Json to_json(const Classification& c);
Json to_json(const ConsistencyReport& c);
/// Summary only: iterations, convergence, residuals and the sup-difference history.
Json to_json(const RadialSolution& sol);
Json to_json(const LairVerdicts& v);
Json to_json(const YangResult& y);

/// Columns r,u,v,u_prime,v_prime, every value as %.12e.
void write_solution_csv(std::ostream& os, const RadialSolution& sol);

/// `path` empty writes to stdout. Throws ConfigError when the file cannot be opened.
void write_text(const std::string& path, const std::string& content);
std::string dump(const Json& j);

}  // namespace rps
