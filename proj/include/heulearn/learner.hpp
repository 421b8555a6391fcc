#pragma once

#include "heulearn/grounding.hpp"
#include "heulearn/taskgen.hpp"

#include <string>
#include <vector>

namespace heulearn {

struct RuleSpace {
    std::vector<Rule> rules; // sorted by canonical text
    std::vector<Diagnostic> diagnostics;
};

enum class Provenance { Embedded, External };

struct Hypothesis {
    std::vector<Rule> rules;
    Provenance provenance = Provenance::Embedded;

    std::size_t cost() const; // total literal count, head included
};

struct CoverageReport {
    std::vector<std::pair<std::string, bool>> covered;
    std::vector<std::string> uncovered_ids;

    bool all_covered() const { return uncovered_ids.empty(); }
};

// Canonical variable naming (V0, V1, ... by first occurrence) for a rule
// with the given head and body literal set; renaming-equivalent rules map
// to the same result.
Rule canonicalize_rule(const Atom& head, const std::vector<Literal>& body);

// All safe rules with one #modeh head and at most max_body body literals
// drawn from #modeb schemas and strict-type atoms typing head variables.
// Variables are assigned consistently by type; every body literal shares
// a variable with the rest of the rule; duplicates up to variable
// renaming are removed.
RuleSpace enumerate_rule_space(const std::vector<ModeDeclaration>& bias,
                               const StrictTypeRules& strict_types, std::size_t max_body);

// Least Herbrand model of a definite program by semi-naive forward
// chaining: only newly derived atoms trigger rule re-instantiation.
AtomSet least_model(const Program& program);

// Forward chaining seeded with `seed` (used to extend a cached model).
AtomSet least_model_extend(const std::vector<Rule>& rules, const AtomSet& seed);

// True iff inclusions are contained in and exclusions disjoint from
// the least model of background + hypothesis + example context.
bool covers(const std::vector<Rule>& background, const Hypothesis& hypothesis,
            const ExampleSpec& example);

struct SearchResult {
    Hypothesis hypothesis;
    CoverageReport coverage;
    std::vector<Diagnostic> diagnostics;
};

// Default rule-space depth: head arity plus one body literal of headroom.
std::size_t default_max_body(const std::vector<ModeDeclaration>& bias);

// Greedy per-head-predicate set cover over the example inclusions,
// followed by pruning of rules whose removal keeps all examples covered.
// Ties break toward fewer literals, then lexicographic rule text.
SearchResult search_hypothesis(const LearningTask& task, std::size_t max_body = 0);

struct ExternalLearnerConfig {
    std::string executable;
    std::vector<std::string> flags;
    double timeout_s = 0; // 0: no limit
};

// Runs `executable flags... task_path` and parses one rule per line of
// standard output into a Hypothesis.
Hypothesis run_external_learner(const std::string& task_path, const ExternalLearnerConfig& config);

} // namespace heulearn
