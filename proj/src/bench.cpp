#include "heulearn/bench.hpp"

#include "heulearn/subprocess.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace heulearn {

namespace fs = std::filesystem;

namespace {

const char* kDefaultProgressRegex = R"(^Optimization\s*:\s*(-?[0-9]+)\s*$)";

struct KnownLabel {
    const char* label;
    const char* display;
};

const KnownLabel kKnownLabels[] = {
    {"plain", "plain"},
    {"learned-hard", "learned (hard)"},
    {"learned-soft", "learned (soft)"},
    {"built-in", "built-in"},
    {"human-made", "human-made"},
};

int label_rank(const std::string& label) {
    for (std::size_t i = 0; i < std::size(kKnownLabels); ++i) {
        if (label == kKnownLabels[i].label) {
            return static_cast<int>(i);
        }
    }
    return static_cast<int>(std::size(kKnownLabels));
}

// Digit-aware ordering so ec9 sorts before ec10.
bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (std::isdigit(static_cast<unsigned char>(a[i])) &&
            std::isdigit(static_cast<unsigned char>(b[j]))) {
            std::size_t ei = i;
            std::size_t ej = j;
            while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) {
                ++ei;
            }
            while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) {
                ++ej;
            }
            std::string da = a.substr(i, ei - i);
            std::string db = b.substr(j, ej - j);
            da.erase(0, std::min(da.find_first_not_of('0'), da.size() - 1));
            db.erase(0, std::min(db.find_first_not_of('0'), db.size() - 1));
            if (da.size() != db.size()) {
                return da.size() < db.size();
            }
            if (da != db) {
                return da < db;
            }
            i = ei;
            j = ej;
        }
        else {
            if (a[i] != b[j]) {
                return a[i] < b[j];
            }
            ++i;
            ++j;
        }
    }
    return a.size() < b.size();
}

std::string format_percentage(double p) {
    double rounded = std::round(p);
    std::ostringstream os;
    if (std::abs(p - rounded) < 1e-9) {
        os << static_cast<long long>(rounded) << "%";
    }
    else {
        os.precision(1);
        os << std::fixed << p << "%";
    }
    return os.str();
}

} // namespace

std::string config_display_name(const std::string& label) {
    for (const KnownLabel& k : kKnownLabels) {
        if (label == k.label) {
            return k.display;
        }
    }
    return label;
}

bool config_order_less(const std::string& a, const std::string& b) {
    int ra = label_rank(a);
    int rb = label_rank(b);
    if (ra != rb) {
        return ra < rb;
    }
    return a < b;
}

std::string to_string(RunStatus status) {
    switch (status) {
    case RunStatus::OptimumFound: return "optimum-found";
    case RunStatus::Satisfiable: return "satisfiable";
    case RunStatus::NoAnswer: return "no-answer-within-limit";
    case RunStatus::Error: return "error";
    }
    return "error";
}

std::string ImprovementCell::render() const {
    switch (kind) {
    case Kind::Percentage: return format_percentage(percentage);
    case Kind::OnlyWithHeuristic: return "100%";
    case Kind::OnlyWithoutHeuristic: return "-inf";
    case Kind::BothUnsolved: return "";
    }
    return "";
}

ImprovementCell improvement(const RunResult& plain, const RunResult& other) {
    if (plain.instance != other.instance) {
        throw std::invalid_argument("improvement: mismatched instances '" + plain.instance +
                                    "' and '" + other.instance + "'");
    }
    if (plain.solved() && other.solved()) {
        long long vp = *plain.value;
        long long vo = *other.value;
        if (vp == 0 && vo == 0) {
            return {ImprovementCell::Kind::Percentage, 0};
        }
        if (vp == 0) {
            return {ImprovementCell::Kind::OnlyWithoutHeuristic, 0};
        }
        return {ImprovementCell::Kind::Percentage,
                100.0 * static_cast<double>(vp - vo) / static_cast<double>(vp)};
    }
    if (other.solved()) {
        return {ImprovementCell::Kind::OnlyWithHeuristic, 0};
    }
    if (plain.solved()) {
        return {ImprovementCell::Kind::OnlyWithoutHeuristic, 0};
    }
    return {ImprovementCell::Kind::BothUnsolved, 0};
}

// ---------------------------------------------------------------------------
// configuration file
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& value, int line_no) {
    std::string v = trim(value);
    if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
        throw std::runtime_error("bench config line " + std::to_string(line_no) +
                                 ": expected a quoted string, got '" + v + "'");
    }
    return v.substr(1, v.size() - 2);
}

std::vector<std::string> parse_string_array(const std::string& value, int line_no) {
    std::string v = trim(value);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
        throw std::runtime_error("bench config line " + std::to_string(line_no) +
                                 ": expected an array of strings");
    }
    std::vector<std::string> out;
    std::string inner = trim(v.substr(1, v.size() - 2));
    if (inner.empty()) {
        return out;
    }
    std::string current;
    bool in_string = false;
    for (char c : inner) {
        if (c == '"') {
            in_string = !in_string;
            current += c;
        }
        else if (c == ',' && !in_string) {
            out.push_back(unquote(current, line_no));
            current.clear();
        }
        else {
            current += c;
        }
    }
    if (!trim(current).empty()) {
        out.push_back(unquote(current, line_no));
    }
    return out;
}

std::string resolve(const std::string& path, const std::string& base_dir) {
    fs::path p(path);
    if (p.is_absolute() || base_dir.empty()) {
        return path;
    }
    return (fs::path(base_dir) / p).string();
}

void validate_config(const SolverConfig& config) {
    if (config.label == "plain" && (!config.extra_files.empty() || !config.extra_flags.empty())) {
        throw std::runtime_error("bench config: the plain configuration takes no extra files "
                                 "or flags");
    }
    if ((config.label == "learned-hard" || config.label == "learned-soft") &&
        config.extra_files.size() != 1) {
        throw std::runtime_error("bench config: " + config.label +
                                 " must carry exactly one heuristics file");
    }
    if (config.label == "built-in" && !config.extra_files.empty()) {
        throw std::runtime_error("bench config: built-in takes flags only");
    }
}

} // namespace

BenchSettings parse_bench_config(const std::string& text, const std::string& base_dir) {
    BenchSettings settings;
    std::map<std::string, SolverConfig> configs;
    std::vector<std::string> config_order;
    std::string instance_dir;

    std::istringstream lines(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::size_t comment = line.find('#');
        if (comment != std::string::npos) {
            // keep '#' inside quoted strings
            bool in_string = false;
            for (std::size_t i = 0; i < line.size(); ++i) {
                if (line[i] == '"') {
                    in_string = !in_string;
                }
                if (line[i] == '#' && !in_string) {
                    line = line.substr(0, i);
                    break;
                }
            }
        }
        std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw std::runtime_error("bench config line " + std::to_string(line_no) +
                                         ": malformed section header");
            }
            section = trim(t.substr(1, t.size() - 2));
            if (section.rfind("config.", 0) == 0) {
                std::string label = section.substr(7);
                if (!configs.count(label)) {
                    configs[label] = SolverConfig{label, {}, {}};
                    config_order.push_back(label);
                }
            }
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("bench config line " + std::to_string(line_no) +
                                     ": expected key = value");
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));

        if (section == "solver") {
            if (key == "executable") {
                settings.solver_executable = unquote(value, line_no);
            }
            else if (key == "time_limit_s") {
                settings.time_limit_s = std::stod(value);
            }
            else if (key == "memory_limit_bytes") {
                settings.memory_limit_bytes = std::stoull(value);
            }
            else if (key == "workers") {
                settings.workers = std::stoi(value);
            }
            else if (key == "progress_regex") {
                settings.progress_regex = unquote(value, line_no);
            }
            else {
                throw std::runtime_error("bench config line " + std::to_string(line_no) +
                                         ": unknown solver key '" + key + "'");
            }
        }
        else if (section == "corpus") {
            if (key == "encoding") {
                settings.encoding = resolve(unquote(value, line_no), base_dir);
            }
            else if (key == "instances") {
                for (const std::string& p : parse_string_array(value, line_no)) {
                    settings.instances.push_back(resolve(p, base_dir));
                }
            }
            else if (key == "instance_dir") {
                instance_dir = resolve(unquote(value, line_no), base_dir);
            }
            else {
                throw std::runtime_error("bench config line " + std::to_string(line_no) +
                                         ": unknown corpus key '" + key + "'");
            }
        }
        else if (section.rfind("config.", 0) == 0) {
            SolverConfig& config = configs[section.substr(7)];
            if (key == "files") {
                for (const std::string& p : parse_string_array(value, line_no)) {
                    config.extra_files.push_back(resolve(p, base_dir));
                }
            }
            else if (key == "flags") {
                config.extra_flags = parse_string_array(value, line_no);
            }
            else {
                throw std::runtime_error("bench config line " + std::to_string(line_no) +
                                         ": unknown config key '" + key + "'");
            }
        }
        else {
            throw std::runtime_error("bench config line " + std::to_string(line_no) +
                                     ": key outside of a known section");
        }
    }

    if (!instance_dir.empty()) {
        std::vector<std::string> found;
        for (const auto& entry : fs::directory_iterator(instance_dir)) {
            if (entry.is_regular_file() &&
                (entry.path().extension() == ".lp" || entry.path().extension() == ".asp")) {
                found.push_back(entry.path().string());
            }
        }
        std::sort(found.begin(), found.end(), natural_less);
        settings.instances.insert(settings.instances.end(), found.begin(), found.end());
    }
    if (settings.solver_executable.empty()) {
        throw std::runtime_error("bench config: solver executable not set");
    }
    if (settings.encoding.empty()) {
        throw std::runtime_error("bench config: corpus encoding not set");
    }
    if (settings.instances.empty()) {
        throw std::runtime_error("bench config: no instances configured");
    }
    if (settings.workers < 1) {
        throw std::runtime_error("bench config: workers must be at least 1");
    }

    std::sort(config_order.begin(), config_order.end(), config_order_less);
    for (const std::string& label : config_order) {
        SolverConfig& config = configs[label];
        if (label == "built-in" && config.extra_flags.empty()) {
            config.extra_flags = {"--dom-mod=false,opt"};
        }
        validate_config(config);
        settings.configs.push_back(config);
    }
    if (settings.configs.empty()) {
        throw std::runtime_error("bench config: no solver configurations given");
    }
    return settings;
}

// ---------------------------------------------------------------------------
// solver runs
// ---------------------------------------------------------------------------

std::pair<RunStatus, std::optional<long long>> parse_solver_output(
    const std::string& text, const std::string& progress_regex) {
    std::regex progress(progress_regex.empty() ? kDefaultProgressRegex : progress_regex);
    std::optional<long long> value;
    bool optimum = false;
    bool unsat = false;

    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::smatch match;
        if (std::regex_search(line, match, progress) && match.size() > 1) {
            value = std::stoll(match[1].str());
            continue;
        }
        if (line.rfind("OPTIMUM FOUND", 0) == 0) {
            optimum = true;
        }
        else if (line.rfind("UNSATISFIABLE", 0) == 0) {
            unsat = true;
        }
    }
    if (unsat) {
        return {RunStatus::Error, std::nullopt};
    }
    if (optimum) {
        return value ? std::make_pair(RunStatus::OptimumFound, value)
                     : std::make_pair(RunStatus::Error, std::nullopt);
    }
    if (value) {
        return {RunStatus::Satisfiable, value};
    }
    return {RunStatus::NoAnswer, std::nullopt};
}

std::string instance_id(const std::string& path) { return fs::path(path).stem().string(); }

RunResult run_config(const std::string& encoding, const SolverConfig& config,
                     const std::string& instance_path, const BenchSettings& settings) {
    RunResult result;
    result.instance = instance_id(instance_path);
    result.config = config.label;

    std::vector<std::string> inputs{encoding, instance_path};
    inputs.insert(inputs.end(), config.extra_files.begin(), config.extra_files.end());
    for (const std::string& path : inputs) {
        if (!fs::exists(path)) {
            result.status = RunStatus::Error;
            result.detail = "missing input file: " + path;
            return result;
        }
    }

    std::vector<std::string> argv{settings.solver_executable};
    argv.insert(argv.end(), inputs.begin(), inputs.end());
    argv.insert(argv.end(), config.extra_flags.begin(), config.extra_flags.end());

    ProcessLimits limits;
    limits.timeout_s = settings.time_limit_s;
    limits.memory_bytes = settings.memory_limit_bytes;
    ProcessResult proc = run_process(argv, limits);

    result.wall_time_s = proc.wall_time_s;
    result.timed_out = proc.timed_out;
    if (proc.spawn_failed) {
        result.status = RunStatus::Error;
        result.detail = "failed to launch solver: " + proc.error;
        return result;
    }
    if (proc.crashed()) {
        result.status = RunStatus::Error;
        result.detail = "solver terminated by signal " + std::to_string(proc.term_signal) +
                        (proc.error.empty() ? "" : "\n" + proc.error);
        return result;
    }
    auto [status, value] = parse_solver_output(proc.output, settings.progress_regex);
    result.status = status;
    result.value = value;
    if (status == RunStatus::Error && result.detail.empty()) {
        result.detail = "solver reported UNSATISFIABLE or an unusable result";
    }
    return result;
}

std::vector<RunResult> run_benchmarks(const BenchSettings& settings,
                                      std::vector<Diagnostic>* diagnostics) {
    struct Job {
        std::size_t instance;
        std::size_t config;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < settings.instances.size(); ++i) {
        for (std::size_t c = 0; c < settings.configs.size(); ++c) {
            jobs.push_back({i, c});
        }
    }
    std::vector<RunResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t index = next.fetch_add(1);
            if (index >= jobs.size()) {
                return;
            }
            const Job& job = jobs[index];
            results[index] = run_config(settings.encoding, settings.configs[job.config],
                                        settings.instances[job.instance], settings);
        }
    };
    std::size_t thread_count =
        std::min<std::size_t>(static_cast<std::size_t>(settings.workers), jobs.size());
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i + 1 < std::max<std::size_t>(thread_count, 1); ++i) {
        threads.emplace_back(worker);
    }
    worker();
    for (std::thread& t : threads) {
        t.join();
    }
    if (diagnostics) {
        for (const RunResult& r : results) {
            if (r.status == RunStatus::Error) {
                diagnostics->push_back({Severity::Warning,
                                        r.instance + "/" + r.config + ": " + r.detail,
                                        {}});
            }
        }
    }
    return results;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(current);
            current.clear();
        }
        else {
            current += c;
        }
    }
    cells.push_back(current);
    return cells;
}

// "improved" counts positive percentages and 100% cells, "deteriorated"
// negative percentages and -inf cells.
void classify_cell(const std::string& cell, int& improved, int& deteriorated) {
    std::size_t open = cell.find('(');
    std::size_t close = cell.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) {
        return;
    }
    std::string inner = cell.substr(open + 1, close - open - 1);
    if (inner == "-inf") {
        ++deteriorated;
        return;
    }
    if (!inner.empty() && inner.back() == '%') {
        double p = std::stod(inner.substr(0, inner.size() - 1));
        if (p > 0) {
            ++improved;
        }
        else if (p < 0) {
            ++deteriorated;
        }
    }
}

} // namespace

Report report(const std::vector<RunResult>& records,
              const std::vector<std::pair<std::string, std::string>>& metadata) {
    Report out;

    std::vector<std::string> labels;
    std::map<std::pair<std::string, std::string>, const RunResult*> by_key;
    std::vector<std::string> instances;
    for (const RunResult& r : records) {
        if (std::find(labels.begin(), labels.end(), r.config) == labels.end()) {
            labels.push_back(r.config);
        }
        if (std::find(instances.begin(), instances.end(), r.instance) == instances.end()) {
            instances.push_back(r.instance);
        }
        by_key[{r.instance, r.config}] = &r;
    }
    std::sort(labels.begin(), labels.end(), config_order_less);
    std::sort(instances.begin(), instances.end(), natural_less);

    std::string csv = "Instance";
    for (const std::string& label : labels) {
        csv += "," + config_display_name(label);
    }
    csv += "\n";

    for (const std::string& instance : instances) {
        const RunResult* plain = nullptr;
        if (auto it = by_key.find({instance, "plain"}); it != by_key.end()) {
            plain = it->second;
        }
        bool any_solved = false;
        for (const std::string& label : labels) {
            auto it = by_key.find({instance, label});
            if (it != by_key.end() && it->second->solved()) {
                any_solved = true;
            }
        }
        if (!any_solved) {
            continue; // unsolved everywhere: excluded from the table
        }
        if (!plain && std::find(labels.begin(), labels.end(), std::string("plain")) !=
                          labels.end()) {
            out.diagnostics.push_back({Severity::Warning,
                                       "instance " + instance +
                                           " has no plain run; row skipped",
                                       {}});
            continue;
        }
        csv += instance;
        for (const std::string& label : labels) {
            csv += ",";
            auto it = by_key.find({instance, label});
            const RunResult* run = it == by_key.end() ? nullptr : it->second;
            std::string cell = run && run->solved() ? std::to_string(*run->value) : "inf";
            if (label != "plain" && plain) {
                RunResult missing;
                missing.instance = instance;
                missing.config = label;
                ImprovementCell imp = improvement(*plain, run ? *run : missing);
                std::string rendered = imp.render();
                if (!rendered.empty()) {
                    cell += " (" + rendered + ")";
                }
            }
            csv += cell;
        }
        csv += "\n";
    }
    for (const auto& [key, value] : metadata) {
        csv += "# " + key + "=" + value + "\n";
    }
    out.csv = csv;
    out.table = format_table(csv);
    return out;
}

std::string format_table(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(csv);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty()) {
        return "";
    }
    std::size_t columns = rows[0].size();
    std::vector<std::size_t> widths(columns, 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size() && c < columns; ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::string table;
    for (const auto& row : rows) {
        std::string rendered;
        for (std::size_t c = 0; c < row.size() && c < columns; ++c) {
            rendered += row[c];
            if (c + 1 < row.size()) {
                rendered.append(widths[c] - row[c].size() + 2, ' ');
            }
        }
        while (!rendered.empty() && rendered.back() == ' ') {
            rendered.pop_back();
        }
        table += rendered + "\n";
    }

    // footer: improved/deteriorated counts per non-plain column
    std::string footer;
    for (std::size_t c = 1; c < columns; ++c) {
        if (rows[0][c] == "plain") {
            continue;
        }
        int improved = 0;
        int deteriorated = 0;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (c < rows[r].size()) {
                classify_cell(rows[r][c], improved, deteriorated);
            }
        }
        footer += rows[0][c] + ": improved: " + std::to_string(improved) +
                  ", deteriorated: " + std::to_string(deteriorated) + "\n";
    }
    if (!footer.empty()) {
        table += "\n" + footer;
    }
    return table;
}

} // namespace heulearn
