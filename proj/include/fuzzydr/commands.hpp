#pragma once

// Command-line front end: embed, eval, posetlab, filtration and synth.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzydr/error.hpp"
#include "fuzzydr/eval.hpp"

namespace fuzzydr {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumeric = 3,
  kExitLawFailure = 4,
};

int exit_code_for(ErrorCode code) noexcept;

nlohmann::json to_json(const MetricReport& r);

/// Library and toolchain versions recorded in run manifests.
nlohmann::json version_info();

/// Worker count: hardware concurrency, capped by FUZZYDR_THREADS when set.
int worker_threads();

/// Runs one command line; args[0] is the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fuzzydr
