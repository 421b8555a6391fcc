#pragma once

#include "heulearn/ast.hpp"

#include <map>
#include <set>
#include <string>

namespace heulearn {

using AtomSet = std::set<Atom>;
using Substitution = std::map<std::string, Term>;

// Binds the variables of `pattern` against ground `atom`, extending `sub`.
// Returns false (leaving `sub` untouched) when they do not match.
bool match_atom(const Atom& pattern, const Atom& atom, Substitution& sub);

Atom substitute(const Atom& atom, const Substitution& sub);

// All substitutions of the rule's variables by constants such that every
// positive body literal matches an atom in `domain`. The rule must be a
// fact or a normal rule, safe, and free of built-ins.
std::vector<Rule> ground_instantiations(const Rule& rule, const AtomSet& domain);

} // namespace heulearn
