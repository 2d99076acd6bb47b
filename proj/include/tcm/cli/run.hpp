// run.hpp: executes one configured command and writes its artifacts:
//   <out>.csv or <out>.json   data
//   <out>.manifest.json       run manifest
//   <out>.svg                 plot (with plot = true)
//   <out>.oracle.csv|json     dense-oracle series (oracle command)
#pragma once

#include "tcm/cli/output.hpp"
#include "tcm/cli/run_config.hpp"

#include <iosfwd>

namespace tcm::cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitIo = 4 };

// Throws the library's error types on failure.
RunStats run(const RunConfig& config);

// run() with errors reported on err and mapped to exit codes.
int run_main(const RunConfig& config, std::ostream& err);

// Exit code for the exception currently being handled.
int exit_code_for_current_exception(std::ostream& err);

}  // namespace tcm::cli
