#pragma once

#include "heulearn/analysis.hpp"
#include "heulearn/ast.hpp"

#include <set>
#include <string>
#include <vector>

namespace heulearn {

struct Placeholder {
    enum class Kind { Var, Const };
    Kind kind = Kind::Var;
    std::string type;

    bool operator==(const Placeholder&) const = default;
};

struct ModeDeclaration {
    enum class Kind { Head, Body };
    Kind kind = Kind::Head;
    std::string predicate;
    std::vector<Placeholder> placeholders;

    std::size_t arity() const { return placeholders.size(); }
    bool operator==(const ModeDeclaration&) const = default;
};

std::string to_string(const ModeDeclaration& m);

// Rules defining the strict types referenced by the mode bias, plus the
// name sets needed downstream (postprocessing strips type atoms).
struct StrictTypeRules {
    std::vector<Rule> rules;              // defining rules copied from the encoding
    std::set<PredicateSig> projections;   // predicates projected to `_argN` types
    std::set<std::string> type_predicates;
    std::set<std::string> projection_predicates;

    // Copied rules in encoding order, then projection rules sorted by name.
    std::vector<Rule> all_rules() const;
    void add_projection(const PredicateSig& pred);
};

Rule projection_rule(const PredicateSig& pred, std::size_t position);

struct ExampleSpec {
    std::string id;
    std::vector<Atom> inclusions;
    std::vector<Atom> exclusions;
    std::vector<Rule> context;
};

struct LearningTask {
    StrictTypeRules background;
    std::vector<ModeDeclaration> modes;
    std::vector<ExampleSpec> examples;
    std::vector<Diagnostic> diagnostics;

    std::vector<ModeDeclaration> head_modes() const;
    std::vector<ModeDeclaration> body_modes() const;
};

struct HeadModes {
    std::vector<ModeDeclaration> modes;
    StrictTypeRules strict_types;
    std::vector<Diagnostic> diagnostics;
};

// One #modeh per choice-head predicate. Placeholder types are resolved
// per argument from the literal binding the argument's variable in the
// choice condition/rule body: an instance-determined binder contributes
// its own name (defining rules are copied into the background), a binder
// that is itself a head-mode predicate contributes that mode's type at
// the bound position, and non-unary binders contribute `_argN`
// projection types with generated projection rules.
HeadModes derive_head_modes(const Program& encoding, const Classification& cls);

// One #modeb per remaining predicate of the encoding; unary predicates
// type themselves, non-unary ones use `_argN` projection types.
std::vector<ModeDeclaration> derive_body_modes(const Program& encoding, const Classification& cls,
                                               StrictTypeRules& strict_types);

struct InstanceInput {
    std::string id;
    Program program;
};

struct ModelInput {
    std::string id;
    std::vector<Atom> atoms;
};

// Per instance: inclusions = answer-set atoms over head-mode predicates,
// exclusions empty, context = the instance's statements.
std::vector<ExampleSpec> build_examples(const std::vector<InstanceInput>& instances,
                                        const std::vector<ModelInput>& models,
                                        const std::vector<ModeDeclaration>& head_modes,
                                        const std::set<PredicateSig>& known_predicates,
                                        std::vector<Diagnostic>& diagnostics);

// Validates type self-containment and fixes the declaration order:
// modes sorted by (kind, predicate, arity), background in derivation
// order, examples in input order.
LearningTask assemble_task(const HeadModes& heads, std::vector<ModeDeclaration> body_modes,
                           std::vector<ExampleSpec> examples,
                           const std::set<PredicateSig>& instance_predicates);

// Background rules, then #modeh, #modeb and #pos blocks.
std::string serialize_task(const LearningTask& task);

LearningTask parse_task(const std::string& text);

// Convenience wrapper running the whole generation pipeline.
LearningTask generate_task(const Program& encoding, const std::vector<InstanceInput>& instances,
                           const std::vector<ModelInput>& models);

} // namespace heulearn
