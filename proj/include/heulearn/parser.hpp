#pragma once

#include "heulearn/ast.hpp"

#include <stdexcept>
#include <string>

namespace heulearn {

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, Span span)
        : std::runtime_error(message + " at line " + std::to_string(span.line) + ", column " +
                             std::to_string(span.column)),
          span_(span), detail_(std::move(message)) {}

    Span span() const { return span_; }
    const std::string& detail() const { return detail_; }

private:
    Span span_;
    std::string detail_;
};

// Parses the ASP-Core-2 subset used by the pipeline: facts, normal rules
// and constraints, choice rules (optional bounds, element conditions),
// weak constraints (annotation round-tripped as text), #heuristic
// directives and '%' line comments. Unsupported constructs (aggregates,
// disjunction, classical negation, function terms) raise ParseError.
// Safety violations are reported as diagnostics on the Program.
Program parse_program(const std::string& text);

// Single ground atom, e.g. "cabinetTOthing(1,2)".
Atom parse_atom(const std::string& text);

// Whitespace-separated ground atoms (solver witness line) or
// '.'-terminated facts; the format is detected from the content.
std::vector<Atom> parse_atom_set(const std::string& text);

} // namespace heulearn
