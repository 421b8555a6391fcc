#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heulearn/bench.hpp"
#include "heulearn/heuristics.hpp"
#include "heulearn/learner.hpp"
#include "heulearn/parser.hpp"
#include "heulearn/taskgen.hpp"
#include "heulearn/version.hpp"

#include <optional>

namespace py = pybind11;
using namespace heulearn;

namespace {

std::string py_canonicalize(const std::string& text) {
    return print_program(parse_program(text));
}

std::string py_generate_task(const std::string& encoding,
                             const std::vector<std::pair<std::string, std::string>>& instances,
                             const std::vector<std::pair<std::string, std::string>>& models) {
    Program enc = parse_program(encoding);
    std::vector<InstanceInput> inst;
    for (const auto& [id, text] : instances) {
        inst.push_back({id, parse_program(text)});
    }
    std::vector<ModelInput> mods;
    for (const auto& [id, text] : models) {
        mods.push_back({id, parse_atom_set(text)});
    }
    return serialize_task(generate_task(enc, inst, mods));
}

py::dict py_learn(const std::string& task_text, std::size_t max_body) {
    LearningTask task = parse_task(task_text);
    SearchResult result = search_hypothesis(task, max_body);
    std::string hypothesis;
    for (const Rule& r : result.hypothesis.rules) {
        hypothesis += to_string(r) + "\n";
    }
    py::list covered;
    py::list uncovered;
    for (const auto& [id, ok] : result.coverage.covered) {
        if (ok) {
            covered.append(id);
        }
        else {
            uncovered.append(id);
        }
    }
    py::dict out;
    out["hypothesis"] = hypothesis;
    out["covered"] = covered;
    out["uncovered"] = uncovered;
    return out;
}

std::string py_emit(const std::string& hypothesis_text, const std::string& mode,
                    const std::string& task_text) {
    Program parsed = parse_program(hypothesis_text);
    Hypothesis hypothesis;
    for (const Rule& r : parsed.rules) {
        hypothesis.rules.push_back(r);
    }
    StrictTypeRules types;
    if (!task_text.empty()) {
        types = parse_task(task_text).background;
    }
    AnnotationMode annotation =
        mode == "soft" ? AnnotationMode::soft() : AnnotationMode::hard();
    return emit_heuristics(postprocess(hypothesis, types).hypothesis, annotation).text;
}

std::vector<std::string> py_least_model(const std::string& program_text) {
    AtomSet model = least_model(parse_program(program_text));
    std::vector<std::string> out;
    for (const Atom& a : model) {
        out.push_back(to_string(a));
    }
    return out;
}

std::string py_improvement(std::optional<long long> plain, std::optional<long long> other) {
    RunResult p;
    p.instance = "i";
    p.value = plain;
    RunResult o;
    o.instance = "i";
    o.value = other;
    return improvement(p, o).render();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "inductive learning of declarative solver heuristics";
    m.attr("__version__") = kVersion;

    m.def("canonicalize", &py_canonicalize, py::arg("program"),
          "Parse a logic program and return its canonical rendering.");
    m.def("generate_task", &py_generate_task, py::arg("encoding"), py::arg("instances"),
          py::arg("models"),
          "Build a learning task from an encoding, instances and answer sets.");
    m.def("learn", &py_learn, py::arg("task"), py::arg("max_body") = 0,
          "Run the embedded learner on a serialized task.");
    m.def("emit_heuristics", &py_emit, py::arg("hypothesis"), py::arg("mode") = "hard",
          py::arg("task") = "",
          "Postprocess a hypothesis and render heuristic directives.");
    m.def("least_model", &py_least_model, py::arg("program"),
          "Least Herbrand model of a definite program.");
    m.def("improvement", &py_improvement, py::arg("plain"), py::arg("other"),
          "Render the improvement cell for two optimisation values.");
    m.def("format_report", &format_table, py::arg("csv"),
          "Render a results.csv as an aligned table with the summary footer.");
}
