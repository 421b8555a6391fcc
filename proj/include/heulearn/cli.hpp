#pragma once

#include <string>
#include <vector>

namespace heulearn {

// Entry point behind the `heulearn` binary. Subcommands: gen-task,
// learn, emit, bench, report, pipeline. Returns 0 on success, 1 on
// usage errors, 2 on pipeline errors; diagnostics go to stderr.
int run_cli(const std::vector<std::string>& args);

} // namespace heulearn
