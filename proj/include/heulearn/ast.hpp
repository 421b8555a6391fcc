#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace heulearn {

// Source position of a statement or token, 1-based.
struct Span {
    int line = 0;
    int column = 0;
};

enum class Severity { Info, Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Warning;
    std::string message;
    Span span;
};

std::string to_string(const Diagnostic& d);

enum class TermKind { Variable, Symbol, Integer };

// A variable (starts uppercase), a symbolic constant (starts lowercase)
// or an integer constant. Integers keep their canonical decimal text.
struct Term {
    TermKind kind = TermKind::Symbol;
    std::string name;

    static Term variable(std::string n) { return {TermKind::Variable, std::move(n)}; }
    static Term symbol(std::string n) { return {TermKind::Symbol, std::move(n)}; }
    static Term integer(std::int64_t v) { return {TermKind::Integer, std::to_string(v)}; }

    bool is_variable() const { return kind == TermKind::Variable; }
    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    std::size_t arity() const { return args.size(); }
    bool ground() const;
    bool operator==(const Atom&) const = default;
    auto operator<=>(const Atom&) const = default;
};

// (name, arity) pair identifying a predicate.
struct PredicateSig {
    std::string name;
    std::size_t arity = 0;

    bool operator==(const PredicateSig&) const = default;
    auto operator<=>(const PredicateSig&) const = default;
};

struct Literal {
    bool negated = false;
    Atom atom;

    bool operator==(const Literal&) const = default;
    auto operator<=>(const Literal&) const = default;
};

// Comparison/arithmetic built-in, kept as normalized token text ("X < Y").
// Built-ins never participate in mode-bias derivation or grounding.
struct Builtin {
    std::string text;

    bool operator==(const Builtin&) const = default;
    auto operator<=>(const Builtin&) const = default;
};

using BodyElem = std::variant<Literal, Builtin>;

bool is_literal(const BodyElem& e);
const Literal* as_literal(const BodyElem& e);

struct ChoiceElement {
    Atom atom;
    std::vector<BodyElem> condition;

    bool operator==(const ChoiceElement&) const = default;
};

struct ChoiceHead {
    std::optional<std::string> lower;  // bound terms round-tripped as text
    std::optional<std::string> upper;
    std::vector<ChoiceElement> elements;

    bool operator==(const ChoiceHead&) const = default;
};

enum class RuleKind { Fact, Normal, Choice, WeakConstraint, Heuristic };

struct Rule {
    RuleKind kind = RuleKind::Fact;
    std::optional<Atom> head;              // Fact, Normal (absent: constraint), Heuristic
    std::optional<ChoiceHead> choice_head; // Choice
    std::vector<BodyElem> body;
    std::string annotation;                // WeakConstraint / Heuristic: text inside [ ]
    Span span;

    bool operator==(const Rule& o) const {
        return kind == o.kind && head == o.head && choice_head == o.choice_head &&
               body == o.body && annotation == o.annotation;
    }
};

struct Program {
    std::vector<Rule> rules;
    std::vector<Diagnostic> diagnostics;

    bool operator==(const Program& o) const { return rules == o.rules; }
};

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Literal& l);
std::string to_string(const BodyElem& e);
std::string to_string(const ChoiceElement& e);
std::string to_string(const Rule& r);

// Canonical rendering: one statement per line, ":-" separator, single
// spaces between body literals, terminating '.'.
std::string print_program(const Program& p);

// Variables occurring in an atom / body, in order of first occurrence.
std::vector<std::string> atom_variables(const Atom& a);
void collect_variables(const Atom& a, std::vector<std::string>& out);

// Every head variable of a normal rule must occur in a positive body
// literal. Constraints and ground facts are trivially safe.
bool is_safe(const Rule& r);

// Predicates occurring anywhere in the rule (heads, bodies, conditions).
std::vector<PredicateSig> rule_predicates(const Rule& r);

} // namespace heulearn
