#pragma once

#include "heulearn/ast.hpp"

#include <set>
#include <vector>

namespace heulearn {

struct DependencyEdge {
    PredicateSig head;
    PredicateSig body;
    bool via_choice = false;

    bool operator==(const DependencyEdge&) const = default;
    auto operator<=>(const DependencyEdge&) const = default;
};

struct DependencyGraph {
    std::set<PredicateSig> nodes;
    std::vector<DependencyEdge> edges;
};

// One edge (h, b) per occurrence of body/condition predicate b in a rule
// with head predicate h; choice-element atoms count as heads, their
// conditions as bodies. Built-ins contribute nothing.
DependencyGraph build_dependency_graph(const Program& encoding);

struct Classification {
    std::set<PredicateSig> choice_heads;
    std::set<PredicateSig> instance_determined;
    std::set<PredicateSig> instance_predicates;
    std::vector<Diagnostic> diagnostics;
};

// Least fixpoint: a predicate is instance-determined iff it occurs only as
// an instance fact, or every rule defining it is a non-choice rule whose
// body predicates are all instance-determined. Built-in comparison
// literals are ignored; default-negated dependencies are allowed.
Classification classify(const Program& encoding, const std::set<PredicateSig>& instance_predicates);

// Fact predicates of an instance program.
std::set<PredicateSig> fact_predicates(const Program& instance);

} // namespace heulearn
