#include "heulearn/grounding.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace heulearn {

bool match_atom(const Atom& pattern, const Atom& atom, Substitution& sub) {
    if (pattern.predicate != atom.predicate || pattern.args.size() != atom.args.size()) {
        return false;
    }
    Substitution extended = sub;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        const Term& p = pattern.args[i];
        const Term& g = atom.args[i];
        if (p.is_variable()) {
            auto it = extended.find(p.name);
            if (it == extended.end()) {
                extended.emplace(p.name, g);
            }
            else if (!(it->second == g)) {
                return false;
            }
        }
        else if (!(p == g)) {
            return false;
        }
    }
    sub = std::move(extended);
    return true;
}

Atom substitute(const Atom& atom, const Substitution& sub) {
    Atom out = atom;
    for (Term& t : out.args) {
        if (t.is_variable()) {
            auto it = sub.find(t.name);
            if (it != sub.end()) {
                t = it->second;
            }
        }
    }
    return out;
}

namespace {

void enumerate_matches(const std::vector<const Atom*>& positives, std::size_t index,
                       const AtomSet& domain, Substitution& sub,
                       const std::function<void(const Substitution&)>& emit) {
    if (index == positives.size()) {
        emit(sub);
        return;
    }
    for (const Atom& candidate : domain) {
        Substitution extended = sub;
        if (match_atom(*positives[index], candidate, extended)) {
            enumerate_matches(positives, index + 1, domain, extended, emit);
        }
    }
}

} // namespace

std::vector<Rule> ground_instantiations(const Rule& rule, const AtomSet& domain) {
    if (rule.kind != RuleKind::Fact && rule.kind != RuleKind::Normal) {
        throw std::runtime_error("ground_instantiations: expected a fact or normal rule");
    }
    std::vector<const Atom*> positives;
    std::vector<std::string> bound;
    for (const BodyElem& e : rule.body) {
        if (const Literal* l = as_literal(e)) {
            if (!l->negated) {
                positives.push_back(&l->atom);
                collect_variables(l->atom, bound);
            }
        }
        else {
            throw std::runtime_error("ground_instantiations: built-in literals are not supported");
        }
    }
    std::vector<std::string> required;
    if (rule.head) {
        collect_variables(*rule.head, required);
    }
    for (const BodyElem& e : rule.body) {
        if (const Literal* l = as_literal(e); l && l->negated) {
            collect_variables(l->atom, required);
        }
    }
    for (const std::string& v : required) {
        if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
            throw std::runtime_error("ground_instantiations: unsafe rule, variable '" + v +
                                     "' not bound by a positive body literal");
        }
    }

    std::vector<Rule> out;
    Substitution empty;
    enumerate_matches(positives, 0, domain, empty, [&](const Substitution& sub) {
        Rule ground = rule;
        if (ground.head) {
            ground.head = substitute(*ground.head, sub);
        }
        for (BodyElem& e : ground.body) {
            if (Literal* l = std::get_if<Literal>(&e)) {
                l->atom = substitute(l->atom, sub);
            }
        }
        out.push_back(std::move(ground));
    });
    return out;
}

} // namespace heulearn
