#pragma once

#include "heulearn/ast.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace heulearn {

struct SolverConfig {
    std::string label; // plain | learned-hard | learned-soft | built-in | human-made | custom
    std::vector<std::string> extra_files;
    std::vector<std::string> extra_flags;
};

// Column heading used in reports ("learned-hard" -> "learned (hard)").
std::string config_display_name(const std::string& label);

// Canonical column order; custom labels sort after the known ones.
bool config_order_less(const std::string& a, const std::string& b);

enum class RunStatus { OptimumFound, Satisfiable, NoAnswer, Error };

std::string to_string(RunStatus status);

struct RunResult {
    std::string instance;
    std::string config;
    RunStatus status = RunStatus::NoAnswer;
    std::optional<long long> value;
    double wall_time_s = 0;
    bool timed_out = false;
    std::string detail; // captured diagnostics for errors

    bool solved() const { return value.has_value(); }
};

struct ImprovementCell {
    enum class Kind { Percentage, OnlyWithHeuristic, OnlyWithoutHeuristic, BothUnsolved };
    Kind kind = Kind::BothUnsolved;
    double percentage = 0;

    // "25%", "100%", "-inf" or "" for both-unsolved.
    std::string render() const;
};

// Relative change of the optimisation value against the plain run;
// costs are minimized, so a positive percentage is an improvement.
ImprovementCell improvement(const RunResult& plain, const RunResult& other);

struct BenchSettings {
    std::string solver_executable;
    double time_limit_s = 600;
    std::uint64_t memory_limit_bytes = 20ull * 1024 * 1024 * 1024;
    int workers = 4;
    std::string progress_regex; // empty: solver default ("Optimization: N")
    std::string encoding;
    std::vector<std::string> instances;
    std::vector<SolverConfig> configs;
};

// TOML-like key/value configuration; paths resolve relative to base_dir.
BenchSettings parse_bench_config(const std::string& text, const std::string& base_dir);

// Instance identifier: the file name without its extension.
std::string instance_id(const std::string& path);

// Launches the solver on encoding + instance + config files/flags under
// the wall-clock and memory limits and parses the captured output.
RunResult run_config(const std::string& encoding, const SolverConfig& config,
                     const std::string& instance_path, const BenchSettings& settings);

std::pair<RunStatus, std::optional<long long>> parse_solver_output(const std::string& text,
                                                                   const std::string& progress_regex = "");

// All (instance, config) runs on a bounded worker pool, aggregated in
// deterministic order.
std::vector<RunResult> run_benchmarks(const BenchSettings& settings,
                                      std::vector<Diagnostic>* diagnostics = nullptr);

struct Report {
    std::string csv;
    std::string table;
    std::vector<Diagnostic> diagnostics;
};

// One row per instance solved in at least one configuration; non-plain
// cells carry the parenthesized improvement; metadata keys become
// trailing '#' comment lines of the CSV.
Report report(const std::vector<RunResult>& records,
              const std::vector<std::pair<std::string, std::string>>& metadata = {});

// Re-renders the aligned table (with the improved/deteriorated footer)
// from a previously written CSV.
std::string format_table(const std::string& csv);

} // namespace heulearn
