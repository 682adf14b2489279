#pragma once

#include <string>

#include "rps/config.hpp"

namespace rps {

enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitNumeric = 2 };

/// Each command writes its artifacts and returns the exit code. Errors
/// propagate as exceptions; run_command maps them to exit codes.
int cmd_solve(const RunConfig& config);
int cmd_classify(const RunConfig& config);
int cmd_validate(const RunConfig& config);
int cmd_sweep(const RunConfig& config);

/// Loads the config, runs the named command (solve | classify | validate |
/// sweep) and maps failures to exit codes 1 (config) and 2 (numeric). On
/// failure the message goes to stderr and a JSON error document to the
/// report path when the config could be read.
int run_command(const std::string& name, const std::string& config_path);

/// Worker count for sweeps: RPS_THREADS when set and positive, else the hardware concurrency.
unsigned sweep_threads();

}  // namespace rps
