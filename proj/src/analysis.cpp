#include "heulearn/analysis.hpp"

#include <map>

namespace heulearn {

namespace {

PredicateSig sig_of(const Atom& a) { return {a.predicate, a.arity()}; }

void add_node(DependencyGraph& g, const Atom& a) { g.nodes.insert(sig_of(a)); }

void add_body_edges(DependencyGraph& g, const PredicateSig& head,
                    const std::vector<BodyElem>& body, bool via_choice) {
    for (const BodyElem& e : body) {
        if (const Literal* l = as_literal(e)) {
            g.nodes.insert(sig_of(l->atom));
            g.edges.push_back({head, sig_of(l->atom), via_choice});
        }
    }
}

void add_body_nodes(DependencyGraph& g, const std::vector<BodyElem>& body) {
    for (const BodyElem& e : body) {
        if (const Literal* l = as_literal(e)) {
            add_node(g, l->atom);
        }
    }
}

} // namespace

DependencyGraph build_dependency_graph(const Program& encoding) {
    DependencyGraph g;
    for (const Rule& r : encoding.rules) {
        switch (r.kind) {
        case RuleKind::Fact:
            add_node(g, *r.head);
            break;
        case RuleKind::Normal:
        case RuleKind::Heuristic:
            if (r.head) {
                add_node(g, *r.head);
                add_body_edges(g, sig_of(*r.head), r.body, false);
            }
            else {
                add_body_nodes(g, r.body);
            }
            break;
        case RuleKind::Choice:
            for (const ChoiceElement& e : r.choice_head->elements) {
                add_node(g, e.atom);
                add_body_edges(g, sig_of(e.atom), e.condition, true);
                add_body_edges(g, sig_of(e.atom), r.body, true);
            }
            break;
        case RuleKind::WeakConstraint:
            add_body_nodes(g, r.body);
            break;
        }
    }
    return g;
}

Classification classify(const Program& encoding,
                        const std::set<PredicateSig>& instance_predicates) {
    Classification cls;
    cls.instance_predicates = instance_predicates;

    // Defining rules per predicate: (body predicates, defined by choice?).
    struct Definition {
        std::vector<PredicateSig> body;
        bool choice = false;
    };
    std::map<PredicateSig, std::vector<Definition>> definitions;
    std::set<PredicateSig> all;

    for (const PredicateSig& p : instance_predicates) {
        all.insert(p);
    }
    for (const Rule& r : encoding.rules) {
        for (const PredicateSig& p : rule_predicates(r)) {
            all.insert(p);
        }
        auto body_sigs = [](const std::vector<BodyElem>& body) {
            std::vector<PredicateSig> sigs;
            for (const BodyElem& e : body) {
                if (const Literal* l = as_literal(e)) {
                    sigs.push_back(sig_of(l->atom));
                }
            }
            return sigs;
        };
        switch (r.kind) {
        case RuleKind::Fact:
        case RuleKind::Normal:
            if (r.head) {
                definitions[sig_of(*r.head)].push_back({body_sigs(r.body), false});
            }
            break;
        case RuleKind::Choice:
            for (const ChoiceElement& e : r.choice_head->elements) {
                PredicateSig head = sig_of(e.atom);
                cls.choice_heads.insert(head);
                std::vector<PredicateSig> deps = body_sigs(e.condition);
                for (PredicateSig& p : body_sigs(r.body)) {
                    deps.push_back(std::move(p));
                }
                definitions[head].push_back({std::move(deps), true});
            }
            break;
        case RuleKind::WeakConstraint:
        case RuleKind::Heuristic:
            break; // neither defines atoms
        }
    }

    for (const PredicateSig& p : cls.choice_heads) {
        if (instance_predicates.count(p)) {
            cls.diagnostics.push_back(
                {Severity::Warning,
                 "predicate " + p.name + "/" + std::to_string(p.arity) +
                     " is defined by a choice rule and occurs as an instance fact; "
                     "classified as a choice head",
                 {}});
        }
    }

    // Least fixpoint over the derivation rule.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const PredicateSig& p : all) {
            if (cls.instance_determined.count(p) || cls.choice_heads.count(p)) {
                continue;
            }
            auto defs = definitions.find(p);
            bool determined = true;
            if (defs != definitions.end()) {
                for (const auto& def : defs->second) {
                    if (def.choice) {
                        determined = false;
                        break;
                    }
                    for (const PredicateSig& b : def.body) {
                        if (!cls.instance_determined.count(b)) {
                            determined = false;
                            break;
                        }
                    }
                    if (!determined) {
                        break;
                    }
                }
            }
            else if (!instance_predicates.count(p)) {
                // occurs only in bodies: extension fixed (empty) by the instance
                determined = true;
            }
            if (determined) {
                cls.instance_determined.insert(p);
                changed = true;
            }
        }
    }
    return cls;
}

std::set<PredicateSig> fact_predicates(const Program& instance) {
    std::set<PredicateSig> preds;
    for (const Rule& r : instance.rules) {
        if (r.kind == RuleKind::Fact) {
            preds.insert({r.head->predicate, r.head->arity()});
        }
    }
    return preds;
}

} // namespace heulearn
