#pragma once

#include "heulearn/learner.hpp"

#include <optional>
#include <string>
#include <vector>

namespace heulearn {

// #heuristic H : B. [w@p,m] with the modifier restricted to the six
// values the solver understands.
struct HeuristicDirective {
    Atom head;
    std::vector<BodyElem> body;
    std::string weight;
    std::optional<std::string> priority;
    std::string modifier;

    std::string annotation() const;
    Rule to_rule() const;
};

std::string to_string(const HeuristicDirective& d);

bool is_valid_modifier(const std::string& m);

struct AnnotationMode {
    std::string weight;
    std::optional<std::string> priority;
    std::string modifier;

    static AnnotationMode hard() { return {"1", std::nullopt, "true"}; }
    static AnnotationMode soft() { return {"2", std::nullopt, "factor"}; }
    static AnnotationMode custom(std::string weight, std::optional<std::string> priority,
                                 std::string modifier);
};

struct PostprocessResult {
    Hypothesis hypothesis;
    std::vector<Diagnostic> diagnostics;
};

// Removes strict-type body atoms (projections included) whose variables
// all occur in another remaining positive body literal; atoms whose
// removal would break safety are kept.
PostprocessResult postprocess(const Hypothesis& h, const StrictTypeRules& strict_types);

HeuristicDirective rule_to_directive(const Rule& r, const AnnotationMode& mode);

struct EmitResult {
    std::string text;
    std::vector<Diagnostic> diagnostics;
};

// One directive per rule, rule order preserved.
EmitResult emit_heuristics(const Hypothesis& h, const AnnotationMode& mode);

} // namespace heulearn
