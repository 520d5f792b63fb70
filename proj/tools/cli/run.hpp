#pragma once

#include "config.hpp"

#include <iosfwd>
#include <string>

namespace wolffpot::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitSchema = 2,
  kExitAdmissibility = 3,
  kExitDivergence = 4,
  kExitNonconvergence = 5,
};

struct RunResult {
  int exit_code = kExitOk;
  json report;      // null when no report is due (schema or admissibility failure)
  std::string csv;  // empty when the task has no field output
  std::vector<std::string> errors;
};

/// Runs a validated config in memory. Deterministic for a fixed config.
RunResult execute(const Validation& validation);

/// `run <config>`: validates, executes, writes report and CSV under output_dir.
int run_command(const std::string& config_path, const std::string& output_dir, std::ostream& out, std::ostream& err);

/// `validate <config>`: prints the diagnostics as JSON; never executes.
int validate_command(const std::string& config_path, std::ostream& out, std::ostream& err);

/// Parses the file; schema issues describe unreadable or malformed JSON.
Validation load_and_validate(const std::string& config_path);

json issues_json(const std::vector<Issue>& issues);

}  // namespace wolffpot::cli
