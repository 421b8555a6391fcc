#include "heulearn/heuristics.hpp"

#include <algorithm>
#include <stdexcept>

namespace heulearn {

bool is_valid_modifier(const std::string& m) {
    static const char* valid[] = {"sign", "level", "true", "false", "init", "factor"};
    return std::any_of(std::begin(valid), std::end(valid),
                       [&m](const char* v) { return m == v; });
}

AnnotationMode AnnotationMode::custom(std::string weight, std::optional<std::string> priority,
                                      std::string modifier) {
    if (!is_valid_modifier(modifier)) {
        throw std::invalid_argument("invalid heuristic modifier '" + modifier + "'");
    }
    return {std::move(weight), std::move(priority), std::move(modifier)};
}

std::string HeuristicDirective::annotation() const {
    std::string out = weight;
    if (priority) {
        out += "@" + *priority;
    }
    out += "," + modifier;
    return out;
}

Rule HeuristicDirective::to_rule() const {
    Rule r;
    r.kind = RuleKind::Heuristic;
    r.head = head;
    r.body = body;
    r.annotation = annotation();
    return r;
}

std::string to_string(const HeuristicDirective& d) { return to_string(d.to_rule()); }

PostprocessResult postprocess(const Hypothesis& h, const StrictTypeRules& strict_types) {
    PostprocessResult result;
    result.hypothesis.provenance = h.provenance;

    for (const Rule& rule : h.rules) {
        if (!is_safe(rule)) {
            throw std::runtime_error("postprocess: unsafe rule " + to_string(rule));
        }
        Rule out = rule;
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < out.body.size(); ++i) {
                const Literal* l = as_literal(out.body[i]);
                if (!l || l->negated || l->atom.arity() != 1 ||
                    !strict_types.type_predicates.count(l->atom.predicate)) {
                    continue;
                }
                // strip only if every variable still occurs in another
                // remaining positive literal
                bool redundant = true;
                for (const std::string& var : atom_variables(l->atom)) {
                    bool elsewhere = false;
                    for (std::size_t j = 0; j < out.body.size() && !elsewhere; ++j) {
                        if (j == i) {
                            continue;
                        }
                        if (const Literal* other = as_literal(out.body[j]);
                            other && !other->negated) {
                            const auto vars = atom_variables(other->atom);
                            elsewhere = std::find(vars.begin(), vars.end(), var) != vars.end();
                        }
                    }
                    if (!elsewhere) {
                        redundant = false;
                        break;
                    }
                }
                if (!redundant) {
                    continue;
                }
                if (!strict_types.projection_predicates.count(l->atom.predicate)) {
                    result.diagnostics.push_back(
                        {Severity::Info,
                         "stripped strict-type atom " + to_string(l->atom) + " from '" +
                             to_string(rule) + "'; the atom may have constrained the rule",
                         {}});
                }
                out.body.erase(out.body.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
        if (!is_safe(out)) {
            throw std::runtime_error("postprocess: stripping made rule unsafe: " + to_string(out));
        }
        result.hypothesis.rules.push_back(std::move(out));
    }
    return result;
}

HeuristicDirective rule_to_directive(const Rule& r, const AnnotationMode& mode) {
    if (!r.head) {
        throw std::invalid_argument("rule_to_directive: rule has no head");
    }
    if (r.kind != RuleKind::Normal && r.kind != RuleKind::Fact) {
        throw std::invalid_argument("rule_to_directive: expected a definite rule, got " +
                                    to_string(r));
    }
    HeuristicDirective d;
    d.head = *r.head;
    d.body = r.body;
    d.weight = mode.weight;
    d.priority = mode.priority;
    d.modifier = mode.modifier;
    return d;
}

EmitResult emit_heuristics(const Hypothesis& h, const AnnotationMode& mode) {
    EmitResult result;
    if (h.rules.empty()) {
        result.diagnostics.push_back(
            {Severity::Warning, "empty hypothesis: no heuristic directives emitted", {}});
        return result;
    }
    for (const Rule& r : h.rules) {
        result.text += to_string(rule_to_directive(r, mode)) + "\n";
    }
    return result;
}

} // namespace heulearn
