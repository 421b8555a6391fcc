#include "heulearn/cli.hpp"

#include "heulearn/bench.hpp"
#include "heulearn/heuristics.hpp"
#include "heulearn/io.hpp"
#include "heulearn/learner.hpp"
#include "heulearn/parser.hpp"
#include "heulearn/taskgen.hpp"
#include "heulearn/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace heulearn {

namespace fs = std::filesystem;

namespace {

void print_diagnostics(const std::vector<Diagnostic>& diagnostics) {
    for (const Diagnostic& d : diagnostics) {
        std::cerr << "heulearn: " << to_string(d) << "\n";
    }
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return value && *value ? value : fallback;
}

struct GenTaskArgs {
    std::string encoding;
    std::vector<std::string> instances;
    std::vector<std::string> models;
    std::string output;
};

LearningTask load_and_generate(const GenTaskArgs& args) {
    Program encoding = parse_program(read_file(args.encoding));
    print_diagnostics(encoding.diagnostics);
    if (args.instances.size() != args.models.size()) {
        throw std::runtime_error("expected one answer-set file per instance (got " +
                                 std::to_string(args.instances.size()) + " instances, " +
                                 std::to_string(args.models.size()) + " models)");
    }
    std::vector<InstanceInput> instances;
    std::vector<ModelInput> models;
    for (std::size_t i = 0; i < args.instances.size(); ++i) {
        std::string iid = instance_id(args.instances[i]);
        std::string mid = instance_id(args.models[i]);
        if (iid != mid) {
            throw std::runtime_error("instance '" + iid + "' is paired with answer set '" + mid +
                                     "'; file stems must match");
        }
        Program inst = parse_program(read_file(args.instances[i]));
        print_diagnostics(inst.diagnostics);
        instances.push_back({iid, std::move(inst)});
        models.push_back({mid, parse_atom_set(read_file(args.models[i]))});
    }
    LearningTask task = generate_task(encoding, instances, models);
    print_diagnostics(task.diagnostics);
    return task;
}

struct LearnArgs {
    std::string task_path;
    std::string output;
    std::string learner = "embedded";
    std::string learner_exe;
    std::vector<std::string> learner_flags;
    std::size_t max_body = 0;
};

Hypothesis run_learn(const LearnArgs& args) {
    LearningTask task = parse_task(read_file(args.task_path));
    print_diagnostics(task.diagnostics);
    Hypothesis hypothesis;
    if (args.learner == "embedded") {
        SearchResult search = search_hypothesis(task, args.max_body);
        print_diagnostics(search.diagnostics);
        hypothesis = std::move(search.hypothesis);
        std::cerr << "heulearn: covered "
                  << search.coverage.covered.size() - search.coverage.uncovered_ids.size() << "/"
                  << search.coverage.covered.size() << " examples\n";
        for (const std::string& id : search.coverage.uncovered_ids) {
            std::cerr << "heulearn: example " << id << " is not covered\n";
        }
    }
    else if (args.learner == "external") {
        ExternalLearnerConfig config;
        config.executable = env_or("HEULEARN_LEARNER", args.learner_exe);
        config.flags = args.learner_flags;
        hypothesis = run_external_learner(args.task_path, config);
        std::vector<Rule> background = task.background.all_rules();
        for (const ExampleSpec& ex : task.examples) {
            if (!covers(background, hypothesis, ex)) {
                std::cerr << "heulearn: example " << ex.id
                          << " is not covered by the external hypothesis\n";
            }
        }
    }
    else {
        throw std::runtime_error("unknown learner '" + args.learner +
                                 "' (expected embedded or external)");
    }
    return hypothesis;
}

std::string hypothesis_text(const Hypothesis& h) {
    std::string out;
    for (const Rule& r : h.rules) {
        out += to_string(r) + "\n";
    }
    return out;
}

struct EmitArgs {
    std::string hypothesis_path;
    std::string output;
    std::string mode = "hard";
    std::string task_path;
    std::string annotation; // custom "w[@p],m" override
};

AnnotationMode annotation_mode(const EmitArgs& args) {
    if (!args.annotation.empty()) {
        std::size_t comma = args.annotation.rfind(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("custom annotation must look like w,m or w@p,m");
        }
        std::string wp = args.annotation.substr(0, comma);
        std::string modifier = args.annotation.substr(comma + 1);
        std::size_t at = wp.find('@');
        std::optional<std::string> priority;
        std::string weight = wp;
        if (at != std::string::npos) {
            weight = wp.substr(0, at);
            priority = wp.substr(at + 1);
        }
        return AnnotationMode::custom(weight, priority, modifier);
    }
    if (args.mode == "hard") {
        return AnnotationMode::hard();
    }
    if (args.mode == "soft") {
        return AnnotationMode::soft();
    }
    throw std::runtime_error("unknown annotation mode '" + args.mode +
                             "' (expected hard or soft)");
}

// Strict-type predicates for postprocessing: from the task when given,
// otherwise inferred from the `_argN` projection naming scheme.
StrictTypeRules strip_context(const EmitArgs& args, const Hypothesis& hypothesis) {
    if (!args.task_path.empty()) {
        LearningTask task = parse_task(read_file(args.task_path));
        return task.background;
    }
    StrictTypeRules types;
    for (const Rule& r : hypothesis.rules) {
        for (const BodyElem& e : r.body) {
            const Literal* l = as_literal(e);
            if (!l || l->atom.arity() != 1) {
                continue;
            }
            const std::string& name = l->atom.predicate;
            std::size_t pos = name.rfind("_arg");
            if (pos != std::string::npos && pos + 4 < name.size() &&
                name.find_first_not_of("0123456789", pos + 4) == std::string::npos) {
                types.type_predicates.insert(name);
                types.projection_predicates.insert(name);
            }
        }
    }
    return types;
}

std::string run_emit(const EmitArgs& args) {
    Program parsed = parse_program(read_file(args.hypothesis_path));
    print_diagnostics(parsed.diagnostics);
    Hypothesis hypothesis;
    for (const Rule& r : parsed.rules) {
        if (r.kind != RuleKind::Fact && r.kind != RuleKind::Normal) {
            throw std::runtime_error("hypothesis file contains a non-definite statement: " +
                                     to_string(r));
        }
        hypothesis.rules.push_back(r);
    }
    PostprocessResult post = postprocess(hypothesis, strip_context(args, hypothesis));
    print_diagnostics(post.diagnostics);
    EmitResult emitted = emit_heuristics(post.hypothesis, annotation_mode(args));
    print_diagnostics(emitted.diagnostics);
    return emitted.text;
}

struct BenchArgs {
    std::string config_path;
    std::string output_dir;
};

void run_bench(const BenchArgs& args) {
    std::string base_dir = fs::path(args.config_path).parent_path().string();
    BenchSettings settings = parse_bench_config(read_file(args.config_path), base_dir);
    settings.solver_executable = env_or("HEULEARN_SOLVER", settings.solver_executable);

    std::vector<Diagnostic> diagnostics;
    std::vector<RunResult> results = run_benchmarks(settings, &diagnostics);
    print_diagnostics(diagnostics);

    fs::create_directories(args.output_dir);
    std::string runs = "instance,config,status,value,wall_time_s\n";
    for (const RunResult& r : results) {
        char seconds[32];
        std::snprintf(seconds, sizeof(seconds), "%.3f", r.wall_time_s);
        runs += r.instance + "," + r.config + "," + to_string(r.status) + "," +
                (r.value ? std::to_string(*r.value) : "") + "," + seconds + "\n";
    }
    write_file((fs::path(args.output_dir) / "runs.csv").string(), runs);

    char limit[32];
    std::snprintf(limit, sizeof(limit), "%g", settings.time_limit_s);
    Report rep = report(results, {{"time_limit_s", limit},
                                  {"memory_limit_bytes",
                                   std::to_string(settings.memory_limit_bytes)}});
    print_diagnostics(rep.diagnostics);
    write_file((fs::path(args.output_dir) / "results.csv").string(), rep.csv);
    write_file((fs::path(args.output_dir) / "results.txt").string(), rep.table);
    std::cerr << "heulearn: wrote results.csv, results.txt and runs.csv to " << args.output_dir
              << "\n";
}

struct PipelineArgs {
    GenTaskArgs gen;
    LearnArgs learn;
    std::string mode = "both";
    std::string bench_config;
    std::string output_dir;
};

void run_pipeline(const PipelineArgs& args) {
    fs::create_directories(args.output_dir);
    fs::path out(args.output_dir);

    LearningTask task = load_and_generate(args.gen);
    std::string task_path = (out / "task.las").string();
    write_file(task_path, serialize_task(task));

    LearnArgs learn_args = args.learn;
    learn_args.task_path = task_path;
    Hypothesis hypothesis = run_learn(learn_args);
    std::string hypothesis_path = (out / "hypothesis.lp").string();
    write_file(hypothesis_path, hypothesis_text(hypothesis));

    if (args.mode == "hard" || args.mode == "both") {
        EmitArgs emit{hypothesis_path, "", "hard", task_path, ""};
        write_file((out / "learned-hard.heu").string(), run_emit(emit));
    }
    if (args.mode == "soft" || args.mode == "both") {
        EmitArgs emit{hypothesis_path, "", "soft", task_path, ""};
        write_file((out / "learned-soft.heu").string(), run_emit(emit));
    }
    if (args.mode != "hard" && args.mode != "soft" && args.mode != "both") {
        throw std::runtime_error("unknown mode '" + args.mode + "' (expected hard, soft or both)");
    }

    if (!args.bench_config.empty()) {
        run_bench({args.bench_config, (out / "bench").string()});
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"learn declarative solver heuristics from solved instances"};
    app.set_version_flag("--version", std::string("heulearn ") + kVersion);
    app.require_subcommand(1);

    GenTaskArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-task", "generate a learning task");
    gen_cmd->add_option("-e,--encoding", gen.encoding, "problem encoding (.lp)")->required();
    gen_cmd->add_option("-i,--instance", gen.instances, "instance file (repeatable)")->required();
    gen_cmd->add_option("-m,--model", gen.models, "answer-set file (repeatable)")->required();
    gen_cmd->add_option("-o,--output", gen.output, "task file to write")->required();

    LearnArgs learn;
    CLI::App* learn_cmd = app.add_subcommand("learn", "learn a hypothesis from a task");
    learn_cmd->add_option("-t,--task", learn.task_path, "task file (.las)")->required();
    learn_cmd->add_option("-o,--output", learn.output, "hypothesis file to write")->required();
    learn_cmd->add_option("--learner", learn.learner, "embedded or external");
    learn_cmd->add_option("--learner-exe", learn.learner_exe,
                          "external learner executable (env HEULEARN_LEARNER overrides)");
    learn_cmd->add_option("--learner-flag", learn.learner_flags,
                          "flag passed to the external learner (repeatable)");
    learn_cmd->add_option("--max-body", learn.max_body,
                          "rule-space body-literal bound (default: head arity + 1)");

    EmitArgs emit;
    CLI::App* emit_cmd = app.add_subcommand("emit", "turn a hypothesis into heuristic directives");
    emit_cmd->add_option("-H,--hypothesis", emit.hypothesis_path, "hypothesis file")->required();
    emit_cmd->add_option("-o,--output", emit.output, "heuristics file to write")->required();
    emit_cmd->add_option("--mode", emit.mode, "hard ([1,true]) or soft ([2,factor])");
    emit_cmd->add_option("--task", emit.task_path,
                         "task file naming the strict types to strip");
    emit_cmd->add_option("--annotation", emit.annotation, "custom annotation w[@p],m");

    BenchArgs bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "run the solver configuration benchmark");
    bench_cmd->add_option("-c,--config", bench.config_path, "benchmark configuration")->required();
    bench_cmd->add_option("-o,--output", bench.output_dir, "output directory")->required();

    std::string report_csv;
    std::string report_out;
    CLI::App* report_cmd = app.add_subcommand("report", "format a results.csv as a table");
    report_cmd->add_option("-r,--results", report_csv, "results.csv to read")->required();
    report_cmd->add_option("-o,--output", report_out, "table file to write (default: stdout)");

    PipelineArgs pipeline;
    CLI::App* pipeline_cmd = app.add_subcommand("pipeline", "run all stages");
    pipeline_cmd->add_option("-e,--encoding", pipeline.gen.encoding, "problem encoding")
        ->required();
    pipeline_cmd->add_option("-i,--instance", pipeline.gen.instances, "instance file")
        ->required();
    pipeline_cmd->add_option("-m,--model", pipeline.gen.models, "answer-set file")->required();
    pipeline_cmd->add_option("-o,--output", pipeline.output_dir, "output directory")->required();
    pipeline_cmd->add_option("--learner", pipeline.learn.learner, "embedded or external");
    pipeline_cmd->add_option("--learner-exe", pipeline.learn.learner_exe,
                             "external learner executable");
    pipeline_cmd->add_option("--learner-flag", pipeline.learn.learner_flags,
                             "external learner flag (repeatable)");
    pipeline_cmd->add_option("--max-body", pipeline.learn.max_body, "rule-space body bound");
    pipeline_cmd->add_option("--mode", pipeline.mode, "hard, soft or both (default both)");
    pipeline_cmd->add_option("--bench-config", pipeline.bench_config,
                             "benchmark configuration to run after emitting");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen_cmd->parsed()) {
            LearningTask task = load_and_generate(gen);
            write_file(gen.output, serialize_task(task));
        }
        else if (learn_cmd->parsed()) {
            write_file(learn.output, hypothesis_text(run_learn(learn)));
        }
        else if (emit_cmd->parsed()) {
            write_file(emit.output, run_emit(emit));
        }
        else if (bench_cmd->parsed()) {
            run_bench(bench);
        }
        else if (report_cmd->parsed()) {
            std::string table = format_table(read_file(report_csv));
            if (report_out.empty()) {
                std::cout << table;
            }
            else {
                write_file(report_out, table);
            }
        }
        else if (pipeline_cmd->parsed()) {
            run_pipeline(pipeline);
        }
    }
    catch (const std::exception& e) {
        std::cerr << "heulearn: error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace heulearn
