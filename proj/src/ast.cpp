#include "heulearn/ast.hpp"

#include <algorithm>
#include <sstream>

namespace heulearn {

bool Atom::ground() const {
    return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

bool is_literal(const BodyElem& e) { return std::holds_alternative<Literal>(e); }

const Literal* as_literal(const BodyElem& e) { return std::get_if<Literal>(&e); }

std::string to_string(const Term& t) { return t.name; }

std::string to_string(const Atom& a) {
    if (a.args.empty()) {
        return a.predicate;
    }
    std::string out = a.predicate + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) {
            out += ",";
        }
        out += a.args[i].name;
    }
    out += ")";
    return out;
}

std::string to_string(const Literal& l) {
    return l.negated ? "not " + to_string(l.atom) : to_string(l.atom);
}

std::string to_string(const BodyElem& e) {
    if (const Literal* l = as_literal(e)) {
        return to_string(*l);
    }
    return std::get<Builtin>(e).text;
}

static std::string body_to_string(const std::vector<BodyElem>& body) {
    std::string out;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (i) {
            out += ", ";
        }
        out += to_string(body[i]);
    }
    return out;
}

std::string to_string(const ChoiceElement& e) {
    std::string out = to_string(e.atom);
    if (!e.condition.empty()) {
        out += " : " + body_to_string(e.condition);
    }
    return out;
}

std::string to_string(const Rule& r) {
    std::string out;
    switch (r.kind) {
    case RuleKind::Fact:
        out = to_string(*r.head) + ".";
        break;
    case RuleKind::Normal:
        if (r.head) {
            out = to_string(*r.head);
            if (!r.body.empty()) {
                out += " :- " + body_to_string(r.body);
            }
        }
        else {
            out = ":- " + body_to_string(r.body);
        }
        out += ".";
        break;
    case RuleKind::Choice: {
        const ChoiceHead& ch = *r.choice_head;
        if (ch.lower) {
            out += *ch.lower + " ";
        }
        out += "{ ";
        for (std::size_t i = 0; i < ch.elements.size(); ++i) {
            if (i) {
                out += "; ";
            }
            out += to_string(ch.elements[i]);
        }
        out += " }";
        if (ch.upper) {
            out += " " + *ch.upper;
        }
        if (!r.body.empty()) {
            out += " :- " + body_to_string(r.body);
        }
        out += ".";
        break;
    }
    case RuleKind::WeakConstraint:
        out = ":~ " + body_to_string(r.body) + ". [" + r.annotation + "]";
        break;
    case RuleKind::Heuristic:
        out = "#heuristic " + to_string(*r.head);
        if (!r.body.empty()) {
            out += " : " + body_to_string(r.body);
        }
        out += ". [" + r.annotation + "]";
        break;
    }
    return out;
}

std::string print_program(const Program& p) {
    std::string out;
    for (const Rule& r : p.rules) {
        out += to_string(r);
        out += "\n";
    }
    return out;
}

std::string to_string(const Diagnostic& d) {
    std::ostringstream os;
    switch (d.severity) {
    case Severity::Info: os << "info"; break;
    case Severity::Warning: os << "warning"; break;
    case Severity::Error: os << "error"; break;
    }
    if (d.span.line > 0) {
        os << " at " << d.span.line << ":" << d.span.column;
    }
    os << ": " << d.message;
    return os.str();
}

void collect_variables(const Atom& a, std::vector<std::string>& out) {
    for (const Term& t : a.args) {
        if (t.is_variable() && std::find(out.begin(), out.end(), t.name) == out.end()) {
            out.push_back(t.name);
        }
    }
}

std::vector<std::string> atom_variables(const Atom& a) {
    std::vector<std::string> vars;
    collect_variables(a, vars);
    return vars;
}

static void collect_positive_body_variables(const std::vector<BodyElem>& body,
                                            std::vector<std::string>& out) {
    for (const BodyElem& e : body) {
        if (const Literal* l = as_literal(e); l && !l->negated) {
            collect_variables(l->atom, out);
        }
    }
}

bool is_safe(const Rule& r) {
    std::vector<std::string> bound;
    collect_positive_body_variables(r.body, bound);
    auto all_bound = [&bound](const Atom& a) {
        for (const std::string& v : atom_variables(a)) {
            if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
                return false;
            }
        }
        return true;
    };
    switch (r.kind) {
    case RuleKind::Fact:
        return r.head->ground();
    case RuleKind::Normal:
    case RuleKind::Heuristic:
        return !r.head || all_bound(*r.head);
    case RuleKind::Choice:
        for (const ChoiceElement& e : r.choice_head->elements) {
            std::vector<std::string> local = bound;
            collect_positive_body_variables(e.condition, local);
            for (const std::string& v : atom_variables(e.atom)) {
                if (std::find(local.begin(), local.end(), v) == local.end()) {
                    return false;
                }
            }
        }
        return true;
    case RuleKind::WeakConstraint:
        return true;
    }
    return true;
}

static void add_sig(std::vector<PredicateSig>& out, const Atom& a) {
    PredicateSig sig{a.predicate, a.arity()};
    if (std::find(out.begin(), out.end(), sig) == out.end()) {
        out.push_back(sig);
    }
}

static void add_body_sigs(std::vector<PredicateSig>& out, const std::vector<BodyElem>& body) {
    for (const BodyElem& e : body) {
        if (const Literal* l = as_literal(e)) {
            add_sig(out, l->atom);
        }
    }
}

std::vector<PredicateSig> rule_predicates(const Rule& r) {
    std::vector<PredicateSig> out;
    if (r.head) {
        add_sig(out, *r.head);
    }
    if (r.choice_head) {
        for (const ChoiceElement& e : r.choice_head->elements) {
            add_sig(out, e.atom);
            add_body_sigs(out, e.condition);
        }
    }
    add_body_sigs(out, r.body);
    return out;
}

} // namespace heulearn
