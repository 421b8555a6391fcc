#include "heulearn/learner.hpp"

#include "heulearn/parser.hpp"
#include "heulearn/subprocess.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace heulearn {

namespace {

PredicateSig sig_of(const Atom& a) { return {a.predicate, a.arity()}; }

} // namespace

std::size_t Hypothesis::cost() const {
    std::size_t total = 0;
    for (const Rule& r : rules) {
        total += 1 + r.body.size();
    }
    return total;
}

// ---------------------------------------------------------------------------
// canonical form
// ---------------------------------------------------------------------------

namespace {

using VarMap = std::map<std::string, std::string>;

Atom rename_atom(const Atom& a, const VarMap& mapping) {
    Atom out = a;
    for (Term& t : out.args) {
        if (t.is_variable()) {
            t.name = mapping.at(t.name);
        }
    }
    return out;
}

// Shape of a literal under a partial renaming: bound variables by index,
// unbound ones by their repetition pattern within the literal.
std::string literal_shape(const Literal& lit, const VarMap& mapping) {
    std::string shape = lit.atom.predicate;
    std::map<std::string, int> local;
    for (const Term& t : lit.atom.args) {
        shape += "|";
        if (!t.is_variable()) {
            shape += "c" + t.name;
        }
        else if (auto it = mapping.find(t.name); it != mapping.end()) {
            shape += "b" + it->second;
        }
        else {
            auto [pos, inserted] = local.emplace(t.name, static_cast<int>(local.size()));
            shape += "f" + std::to_string(pos->second);
            (void)inserted;
        }
    }
    return shape;
}

void canonical_order(std::vector<Literal> remaining, VarMap mapping, int next,
                     std::vector<Literal> placed, std::string& best_text,
                     std::vector<Literal>* best_body, const Atom& head) {
    if (remaining.empty()) {
        Rule rule;
        rule.kind = RuleKind::Normal;
        rule.head = rename_atom(head, mapping);
        for (const Literal& l : placed) {
            rule.body.push_back(l);
        }
        if (rule.body.empty() && rule.head->ground()) {
            rule.kind = RuleKind::Fact;
        }
        std::string text = to_string(rule);
        if (best_text.empty() || text < best_text) {
            best_text = text;
            *best_body = placed;
        }
        return;
    }
    std::string min_shape;
    for (const Literal& l : remaining) {
        std::string s = literal_shape(l, mapping);
        if (min_shape.empty() || s < min_shape) {
            min_shape = s;
        }
    }
    for (std::size_t i = 0; i < remaining.size(); ++i) {
        if (literal_shape(remaining[i], mapping) != min_shape) {
            continue;
        }
        VarMap next_mapping = mapping;
        int next_index = next;
        for (const Term& t : remaining[i].atom.args) {
            if (t.is_variable() && !next_mapping.count(t.name)) {
                next_mapping.emplace(t.name, "V" + std::to_string(next_index++));
            }
        }
        std::vector<Literal> next_placed = placed;
        next_placed.push_back(
            Literal{remaining[i].negated, rename_atom(remaining[i].atom, next_mapping)});
        std::vector<Literal> next_remaining = remaining;
        next_remaining.erase(next_remaining.begin() + static_cast<std::ptrdiff_t>(i));
        canonical_order(std::move(next_remaining), std::move(next_mapping), next_index,
                        std::move(next_placed), best_text, best_body, head);
    }
}

} // namespace

Rule canonicalize_rule(const Atom& head, const std::vector<Literal>& body) {
    VarMap mapping;
    int next = 0;
    for (const Term& t : head.args) {
        if (t.is_variable() && !mapping.count(t.name)) {
            mapping.emplace(t.name, "V" + std::to_string(next++));
        }
    }
    std::string best_text;
    std::vector<Literal> best_body;
    canonical_order(body, mapping, next, {}, best_text, &best_body, head);

    Rule rule;
    rule.kind = RuleKind::Normal;
    rule.head = rename_atom(head, mapping);
    for (const Literal& l : best_body) {
        rule.body.push_back(l);
    }
    if (rule.body.empty() && rule.head->ground()) {
        rule.kind = RuleKind::Fact;
    }
    return rule;
}

// ---------------------------------------------------------------------------
// rule-space enumeration
// ---------------------------------------------------------------------------

namespace {

struct TypedVar {
    std::string name;
    std::string type;
};

struct Enumerator {
    Enumerator(const std::vector<ModeDeclaration>& modes, std::size_t depth,
               std::map<std::string, Rule>& out)
        : body_modes(modes), max_body(depth), rules(out) {}

    const std::vector<ModeDeclaration>& body_modes;
    std::size_t max_body;
    std::map<std::string, Rule>& rules; // canonical text -> rule
    std::set<std::string> visited_partials;
    std::size_t budget = 2'000'000;

    Atom head;
    std::vector<TypedVar> vars; // head vars first, then introduced ones
    std::size_t head_var_count = 0;
    int fresh_counter = 0;

    void consume_budget() {
        if (budget-- == 0) {
            throw std::runtime_error("enumerate_rule_space: rule space exceeds the search budget; "
                                     "reduce max_body");
        }
    }

    bool is_safe_candidate(const std::vector<Literal>& body) const {
        for (std::size_t i = 0; i < head_var_count; ++i) {
            const std::string& v = vars[i].name;
            bool bound = false;
            for (const Literal& l : body) {
                for (const Term& t : l.atom.args) {
                    if (t.is_variable() && t.name == v) {
                        bound = true;
                        break;
                    }
                }
                if (bound) {
                    break;
                }
            }
            if (!bound) {
                return false;
            }
        }
        return true;
    }

    void record(const std::vector<Literal>& body) {
        if (!is_safe_candidate(body)) {
            return;
        }
        Rule rule = canonicalize_rule(head, body);
        rules.emplace(to_string(rule), rule);
    }

    // All instantiations of a body-mode schema; later slots may reuse
    // variables introduced by earlier slots of the same literal.
    void instantiate(const ModeDeclaration& mode, std::size_t slot, Atom atom,
                     std::vector<TypedVar> local, std::vector<Atom>& out) {
        if (slot == mode.placeholders.size()) {
            out.push_back(std::move(atom));
            return;
        }
        const std::string& type = mode.placeholders[slot].type;
        for (const TypedVar& v : local) {
            if (v.type == type) {
                Atom extended = atom;
                extended.args.push_back(Term::variable(v.name));
                instantiate(mode, slot + 1, std::move(extended), local, out);
            }
        }
        TypedVar fresh{"T" + std::to_string(fresh_counter++), type};
        Atom extended = std::move(atom);
        extended.args.push_back(Term::variable(fresh.name));
        local.push_back(fresh);
        instantiate(mode, slot + 1, std::move(extended), std::move(local), out);
    }

    bool connected(const Atom& atom) const {
        for (const Term& t : atom.args) {
            if (!t.is_variable()) {
                continue;
            }
            for (const TypedVar& v : vars) {
                if (v.name == t.name) {
                    return true;
                }
            }
        }
        return false;
    }

    void extend(std::vector<Literal>& body) {
        consume_budget();
        record(body);
        if (body.size() == max_body) {
            return;
        }
        std::vector<Atom> candidates;
        // strict-type atoms for head variables
        for (std::size_t i = 0; i < head_var_count; ++i) {
            candidates.push_back(Atom{vars[i].type, {Term::variable(vars[i].name)}});
        }
        // #modeb schema instantiations sharing a variable with the rule
        for (const ModeDeclaration& mode : body_modes) {
            std::vector<Atom> instances;
            instantiate(mode, 0, Atom{mode.predicate, {}}, vars, instances);
            for (Atom& a : instances) {
                if (a.args.empty() || connected(a)) {
                    candidates.push_back(std::move(a));
                }
            }
        }
        for (const Atom& candidate : candidates) {
            Literal lit{false, candidate};
            if (std::find(body.begin(), body.end(), lit) != body.end()) {
                continue;
            }
            std::vector<TypedVar> added;
            for (const Term& t : candidate.args) {
                if (!t.is_variable()) {
                    continue;
                }
                bool known = std::any_of(vars.begin(), vars.end(), [&t](const TypedVar& v) {
                    return v.name == t.name;
                });
                if (!known && std::none_of(added.begin(), added.end(), [&t](const TypedVar& v) {
                        return v.name == t.name;
                    })) {
                    added.push_back({t.name, type_of_fresh(candidate, t.name)});
                }
            }
            body.push_back(lit);
            for (const TypedVar& v : added) {
                vars.push_back(v);
            }
            std::string partial = to_string(canonicalize_rule(head, body));
            if (visited_partials.insert(partial).second) {
                extend(body);
            }
            vars.resize(vars.size() - added.size());
            body.pop_back();
        }
    }

    // Type of a fresh variable, read off the schema that introduced it.
    std::string type_of_fresh(const Atom& atom, const std::string& var) const {
        for (const ModeDeclaration& mode : body_modes) {
            if (mode.predicate != atom.predicate || mode.arity() != atom.args.size()) {
                continue;
            }
            for (std::size_t i = 0; i < atom.args.size(); ++i) {
                if (atom.args[i].is_variable() && atom.args[i].name == var) {
                    return mode.placeholders[i].type;
                }
            }
        }
        return "";
    }
};

} // namespace

RuleSpace enumerate_rule_space(const std::vector<ModeDeclaration>& bias,
                               const StrictTypeRules& strict_types, std::size_t max_body) {
    (void)strict_types; // typing atoms are named by the placeholders themselves
    RuleSpace space;
    std::vector<ModeDeclaration> body_modes;
    for (const ModeDeclaration& m : bias) {
        if (m.kind != ModeDeclaration::Kind::Body) {
            continue;
        }
        bool has_const = std::any_of(m.placeholders.begin(), m.placeholders.end(),
                                     [](const Placeholder& p) {
                                         return p.kind == Placeholder::Kind::Const;
                                     });
        if (has_const) {
            space.diagnostics.push_back({Severity::Warning,
                                         "const(...) placeholders are not supported; ignoring " +
                                             to_string(m),
                                         {}});
            continue;
        }
        body_modes.push_back(m);
    }

    std::map<std::string, Rule> rules;
    for (const ModeDeclaration& m : bias) {
        if (m.kind != ModeDeclaration::Kind::Head) {
            continue;
        }
        bool has_const = std::any_of(m.placeholders.begin(), m.placeholders.end(),
                                     [](const Placeholder& p) {
                                         return p.kind == Placeholder::Kind::Const;
                                     });
        if (has_const) {
            space.diagnostics.push_back({Severity::Warning,
                                         "const(...) placeholders are not supported; ignoring " +
                                             to_string(m),
                                         {}});
            continue;
        }
        Enumerator e(body_modes, max_body, rules);
        e.head.predicate = m.predicate;
        for (std::size_t i = 0; i < m.placeholders.size(); ++i) {
            std::string name = "H" + std::to_string(i);
            e.head.args.push_back(Term::variable(name));
            e.vars.push_back({name, m.placeholders[i].type});
        }
        e.head_var_count = e.vars.size();
        std::vector<Literal> body;
        e.extend(body);
    }
    for (auto& [text, rule] : rules) {
        space.rules.push_back(std::move(rule));
    }
    return space;
}

// ---------------------------------------------------------------------------
// least model
// ---------------------------------------------------------------------------

namespace {

struct RuleChecked {
    const Rule* rule;
    std::vector<const Atom*> body;
};

std::vector<RuleChecked> check_definite(const std::vector<Rule>& rules) {
    std::vector<RuleChecked> out;
    for (const Rule& r : rules) {
        if (r.kind != RuleKind::Fact && r.kind != RuleKind::Normal) {
            throw std::runtime_error("least_model: program is not definite (found " +
                                     to_string(r) + ")");
        }
        if (!r.head) {
            throw std::runtime_error("least_model: integrity constraint out of contract (" +
                                     to_string(r) + ")");
        }
        RuleChecked rc{&r, {}};
        std::vector<std::string> bound;
        for (const BodyElem& e : r.body) {
            const Literal* l = as_literal(e);
            if (!l) {
                throw std::runtime_error("least_model: built-in literal out of contract in " +
                                         to_string(r));
            }
            if (l->negated) {
                throw std::runtime_error("least_model: default negation out of contract in " +
                                         to_string(r));
            }
            rc.body.push_back(&l->atom);
            collect_variables(l->atom, bound);
        }
        for (const std::string& v : atom_variables(*r.head)) {
            if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
                throw std::runtime_error("least_model: unsafe rule " + to_string(r));
            }
        }
        out.push_back(std::move(rc));
    }
    return out;
}

struct AtomIndex {
    std::map<PredicateSig, std::vector<Atom>> by_pred;
    AtomSet all;

    bool insert(const Atom& a) {
        if (all.insert(a).second) {
            by_pred[sig_of(a)].push_back(a);
            return true;
        }
        return false;
    }

    const std::vector<Atom>* find(const PredicateSig& sig) const {
        auto it = by_pred.find(sig);
        return it == by_pred.end() ? nullptr : &it->second;
    }
};

// Joins body literals left to right; position `delta_pos` ranges over the
// delta index only, the others over the full index.
void join(const RuleChecked& rule, std::size_t index, std::size_t delta_pos,
          const AtomIndex& full, const AtomIndex& delta, Substitution& sub,
          std::vector<Atom>& derived) {
    if (index == rule.body.size()) {
        derived.push_back(substitute(*rule.rule->head, sub));
        return;
    }
    const AtomIndex& source = index == delta_pos ? delta : full;
    const std::vector<Atom>* atoms = source.find(sig_of(*rule.body[index]));
    if (!atoms) {
        return;
    }
    for (const Atom& a : *atoms) {
        Substitution extended = sub;
        if (match_atom(*rule.body[index], a, extended)) {
            join(rule, index + 1, delta_pos, full, delta, extended, derived);
        }
    }
}

} // namespace

AtomSet least_model_extend(const std::vector<Rule>& rules, const AtomSet& seed) {
    std::vector<RuleChecked> checked = check_definite(rules);

    AtomIndex full;
    AtomIndex delta;
    for (const Atom& a : seed) {
        if (full.insert(a)) {
            delta.insert(a);
        }
    }
    for (const RuleChecked& rc : checked) {
        if (rc.body.empty()) {
            if (full.insert(*rc.rule->head)) {
                delta.insert(*rc.rule->head);
            }
        }
    }

    while (!delta.all.empty()) {
        AtomIndex next;
        for (const RuleChecked& rc : checked) {
            if (rc.body.empty()) {
                continue;
            }
            for (std::size_t pos = 0; pos < rc.body.size(); ++pos) {
                if (!delta.find(sig_of(*rc.body[pos]))) {
                    continue;
                }
                std::vector<Atom> derived;
                Substitution sub;
                join(rc, 0, pos, full, delta, sub, derived);
                for (const Atom& a : derived) {
                    if (!full.all.count(a)) {
                        next.insert(a);
                    }
                }
            }
        }
        for (const Atom& a : next.all) {
            full.insert(a);
        }
        delta = std::move(next);
    }
    return full.all;
}

AtomSet least_model(const Program& program) { return least_model_extend(program.rules, {}); }

// ---------------------------------------------------------------------------
// coverage
// ---------------------------------------------------------------------------

namespace {

std::vector<Rule> coverage_program(const std::vector<Rule>& background,
                                   const std::vector<Rule>& hypothesis,
                                   const ExampleSpec& example) {
    std::vector<Rule> rules = background;
    rules.insert(rules.end(), hypothesis.begin(), hypothesis.end());
    rules.insert(rules.end(), example.context.begin(), example.context.end());
    return rules;
}

} // namespace

bool covers(const std::vector<Rule>& background, const Hypothesis& hypothesis,
            const ExampleSpec& example) {
    AtomSet model = least_model_extend(coverage_program(background, hypothesis.rules, example), {});
    for (const Atom& a : example.inclusions) {
        if (!model.count(a)) {
            return false;
        }
    }
    for (const Atom& a : example.exclusions) {
        if (model.count(a)) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// hypothesis search
// ---------------------------------------------------------------------------

std::size_t default_max_body(const std::vector<ModeDeclaration>& bias) {
    std::size_t depth = 1;
    for (const ModeDeclaration& m : bias) {
        if (m.kind == ModeDeclaration::Kind::Head) {
            depth = std::max(depth, m.arity() + 1);
        }
    }
    return depth;
}

SearchResult search_hypothesis(const LearningTask& task, std::size_t max_body) {
    if (max_body == 0) {
        max_body = default_max_body(task.modes);
    }
    SearchResult result;
    RuleSpace space = enumerate_rule_space(task.modes, task.background, max_body);
    result.diagnostics = space.diagnostics;

    std::set<PredicateSig> head_sigs;
    for (const ModeDeclaration& m : task.modes) {
        if (m.kind == ModeDeclaration::Kind::Head) {
            head_sigs.insert({m.predicate, m.arity()});
        }
    }

    std::vector<Rule> background = task.background.all_rules();

    // Obligation = an inclusion atom of an example not satisfied by the
    // base model (background + context alone).
    struct ExampleState {
        const ExampleSpec* spec;
        AtomSet base;
        std::set<Atom> pending;
        bool excluded_by_base = false;
    };
    std::vector<ExampleState> states;
    for (const ExampleSpec& ex : task.examples) {
        ExampleState st{&ex, {}, {}, false};
        std::vector<Rule> base_rules = background;
        base_rules.insert(base_rules.end(), ex.context.begin(), ex.context.end());
        st.base = least_model_extend(base_rules, {});
        for (const Atom& a : ex.exclusions) {
            if (st.base.count(a)) {
                st.excluded_by_base = true;
                result.diagnostics.push_back({Severity::Warning,
                                              "example " + ex.id + " excludes " + to_string(a) +
                                                  " which already holds without a hypothesis",
                                              {}});
            }
        }
        for (const Atom& a : ex.inclusions) {
            if (st.base.count(a)) {
                continue;
            }
            if (!head_sigs.count(sig_of(a))) {
                result.diagnostics.push_back({Severity::Warning,
                                              "inclusion " + to_string(a) + " of example " +
                                                  ex.id + " matches no #modeh declaration",
                                              {}});
            }
            st.pending.insert(a);
        }
        states.push_back(std::move(st));
    }

    // Single-rule derivations per example. Rules deriving an exclusion
    // anywhere are unusable: derivability is monotone.
    struct Candidate {
        const Rule* rule;
        std::string text;
        std::size_t cost;
        std::map<std::size_t, std::set<Atom>> derives; // example index -> obligations hit
    };
    std::map<PredicateSig, std::vector<Candidate>> by_head;
    for (const Rule& r : space.rules) {
        Candidate cand{&r, to_string(r), 1 + r.body.size(), {}};
        PredicateSig head = sig_of(*r.head);
        bool tainted = false;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const ExampleState& st = states[i];
            bool relevant = false;
            for (const Atom& a : st.pending) {
                if (sig_of(a) == head) {
                    relevant = true;
                    break;
                }
            }
            if (!relevant && st.spec->exclusions.empty()) {
                continue;
            }
            std::vector<Rule> rules = background;
            rules.insert(rules.end(), st.spec->context.begin(), st.spec->context.end());
            rules.push_back(r);
            AtomSet model = least_model_extend(rules, st.base);
            for (const Atom& a : st.spec->exclusions) {
                if (model.count(a)) {
                    tainted = true;
                    break;
                }
            }
            if (tainted) {
                break;
            }
            for (const Atom& a : st.pending) {
                if (model.count(a)) {
                    cand.derives[i].insert(a);
                }
            }
        }
        if (!tainted) {
            by_head[head].push_back(std::move(cand));
        }
    }

    // Greedy set cover per head predicate.
    std::vector<const Candidate*> chosen;
    for (auto& [head, candidates] : by_head) {
        std::set<std::pair<std::size_t, Atom>> uncovered;
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (const Atom& a : states[i].pending) {
                if (sig_of(a) == head) {
                    uncovered.emplace(i, a);
                }
            }
        }
        while (!uncovered.empty()) {
            const Candidate* best = nullptr;
            std::size_t best_gain = 0;
            for (const Candidate& c : candidates) {
                std::size_t gain = 0;
                for (const auto& [example, atoms] : c.derives) {
                    for (const Atom& a : atoms) {
                        gain += uncovered.count({example, a});
                    }
                }
                auto better = [&]() {
                    if (gain != best_gain) {
                        return gain > best_gain;
                    }
                    return std::make_tuple(c.cost, c.text) <
                           std::make_tuple(best->cost, best->text);
                };
                if (gain > 0 && (!best || better())) {
                    best = &c;
                    best_gain = gain;
                }
            }
            if (!best) {
                break; // leftover obligations are uncoverable in this space
            }
            chosen.push_back(best);
            for (const auto& [example, atoms] : best->derives) {
                for (const Atom& a : atoms) {
                    uncovered.erase({example, a});
                }
            }
        }
    }

    // Prune rules whose removal loses no derived obligation; ordering by
    // descending cost keeps the cheapest sufficient subset.
    auto derived_union = [&chosen](const std::set<const Candidate*>& removed) {
        std::set<std::pair<std::size_t, Atom>> out;
        for (const Candidate* c : chosen) {
            if (removed.count(c)) {
                continue;
            }
            for (const auto& [example, atoms] : c->derives) {
                for (const Atom& a : atoms) {
                    out.emplace(example, a);
                }
            }
        }
        return out;
    };
    std::set<std::pair<std::size_t, Atom>> baseline = derived_union({});
    std::vector<const Candidate*> prune_order = chosen;
    std::sort(prune_order.begin(), prune_order.end(),
              [](const Candidate* a, const Candidate* b) {
                  return std::make_tuple(b->cost, b->text) < std::make_tuple(a->cost, a->text);
              });
    std::set<const Candidate*> removed;
    for (const Candidate* c : prune_order) {
        removed.insert(c);
        if (derived_union(removed) != baseline) {
            removed.erase(c);
        }
    }

    Hypothesis pruned;
    pruned.provenance = Provenance::Embedded;
    for (const Candidate* c : chosen) {
        if (!removed.count(c)) {
            pruned.rules.push_back(*c->rule);
        }
    }
    std::sort(pruned.rules.begin(), pruned.rules.end(), [](const Rule& a, const Rule& b) {
        return to_string(a) < to_string(b);
    });

    result.hypothesis = std::move(pruned);
    for (const ExampleSpec& ex : task.examples) {
        bool ok = covers(background, result.hypothesis, ex);
        result.coverage.covered.emplace_back(ex.id, ok);
        if (!ok) {
            result.coverage.uncovered_ids.push_back(ex.id);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// external learner adapter
// ---------------------------------------------------------------------------

Hypothesis run_external_learner(const std::string& task_path,
                                const ExternalLearnerConfig& config) {
    if (config.executable.empty()) {
        throw std::runtime_error("external learner: no executable configured");
    }
    std::vector<std::string> argv{config.executable};
    argv.insert(argv.end(), config.flags.begin(), config.flags.end());
    argv.push_back(task_path);

    ProcessLimits limits;
    limits.timeout_s = config.timeout_s;
    ProcessResult proc = run_process(argv, limits);
    if (proc.spawn_failed) {
        throw std::runtime_error("external learner: failed to launch '" + config.executable +
                                 "': " + proc.error);
    }
    if (proc.timed_out) {
        throw std::runtime_error("external learner: timed out after " +
                                 std::to_string(config.timeout_s) + "s");
    }
    if (proc.exit_code != 0 || proc.term_signal != 0) {
        throw std::runtime_error("external learner: exited with status " +
                                 std::to_string(proc.exit_code) + "\n" + proc.error);
    }

    Hypothesis hypothesis;
    hypothesis.provenance = Provenance::External;
    std::istringstream lines(proc.output);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
        trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
        if (trimmed.empty()) {
            continue;
        }
        Program parsed;
        try {
            parsed = parse_program(trimmed);
        }
        catch (const ParseError& e) {
            throw std::runtime_error("external learner: unparseable output line " +
                                     std::to_string(line_no) + ": '" + trimmed + "' (" +
                                     e.what() + ")");
        }
        for (const Rule& r : parsed.rules) {
            hypothesis.rules.push_back(r);
        }
    }
    return hypothesis;
}

} // namespace heulearn
