#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace heulearn {

struct ProcessLimits {
    double timeout_s = 0;        // 0: unlimited
    std::uint64_t memory_bytes = 0; // 0: unlimited; enforced via RLIMIT_AS
};

struct ProcessResult {
    int exit_code = -1;
    int term_signal = 0; // nonzero when the process died from a signal
    bool timed_out = false;
    bool spawn_failed = false;
    std::string output; // captured standard output
    std::string error;  // captured standard error
    double wall_time_s = 0;

    bool crashed() const { return term_signal != 0 && !timed_out; }
};

// Runs argv[0] with the given arguments, captures stdout/stderr and
// enforces the limits by terminating the process on breach.
ProcessResult run_process(const std::vector<std::string>& argv, const ProcessLimits& limits = {});

} // namespace heulearn
