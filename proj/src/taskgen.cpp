#include "heulearn/taskgen.hpp"

#include "heulearn/parser.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace heulearn {

namespace {

PredicateSig sig_of(const Atom& a) { return {a.predicate, a.arity()}; }

std::string arg_type_name(const PredicateSig& pred, std::size_t position) {
    return pred.name + "_arg" + std::to_string(position + 1);
}

} // namespace

std::string to_string(const ModeDeclaration& m) {
    std::string out = m.kind == ModeDeclaration::Kind::Head ? "#modeh(" : "#modeb(";
    out += m.predicate;
    if (!m.placeholders.empty()) {
        out += "(";
        for (std::size_t i = 0; i < m.placeholders.size(); ++i) {
            if (i) {
                out += ", ";
            }
            const Placeholder& p = m.placeholders[i];
            out += p.kind == Placeholder::Kind::Var ? "var(" : "const(";
            out += p.type + ")";
        }
        out += ")";
    }
    out += ").";
    return out;
}

Rule projection_rule(const PredicateSig& pred, std::size_t position) {
    Rule rule;
    rule.kind = RuleKind::Normal;
    Atom head{arg_type_name(pred, position), {Term::variable("X" + std::to_string(position + 1))}};
    Atom body{pred.name, {}};
    for (std::size_t i = 0; i < pred.arity; ++i) {
        body.args.push_back(Term::variable("X" + std::to_string(i + 1)));
    }
    rule.head = std::move(head);
    rule.body.push_back(Literal{false, std::move(body)});
    return rule;
}

void StrictTypeRules::add_projection(const PredicateSig& pred) {
    projections.insert(pred);
    for (std::size_t i = 0; i < pred.arity; ++i) {
        projection_predicates.insert(arg_type_name(pred, i));
        type_predicates.insert(arg_type_name(pred, i));
    }
}

std::vector<Rule> StrictTypeRules::all_rules() const {
    std::vector<Rule> out = rules;
    for (const PredicateSig& pred : projections) {
        for (std::size_t i = 0; i < pred.arity; ++i) {
            out.push_back(projection_rule(pred, i));
        }
    }
    return out;
}

std::vector<ModeDeclaration> LearningTask::head_modes() const {
    std::vector<ModeDeclaration> out;
    std::copy_if(modes.begin(), modes.end(), std::back_inserter(out),
                 [](const ModeDeclaration& m) { return m.kind == ModeDeclaration::Kind::Head; });
    return out;
}

std::vector<ModeDeclaration> LearningTask::body_modes() const {
    std::vector<ModeDeclaration> out;
    std::copy_if(modes.begin(), modes.end(), std::back_inserter(out),
                 [](const ModeDeclaration& m) { return m.kind == ModeDeclaration::Kind::Body; });
    return out;
}

namespace {

// A choice-head occurrence: the element atom plus the literals that may
// bind its variables (element condition first, rule body second).
struct HeadContext {
    Atom atom;
    std::vector<BodyElem> binders;
    Span span;
};

struct Binder {
    const Atom* atom = nullptr;
    std::size_t position = 0;
};

std::optional<Binder> find_binder(const HeadContext& ctx, const std::string& var) {
    for (const BodyElem& e : ctx.binders) {
        const Literal* l = as_literal(e);
        if (!l || l->negated) {
            continue;
        }
        for (std::size_t i = 0; i < l->atom.args.size(); ++i) {
            if (l->atom.args[i].is_variable() && l->atom.args[i].name == var) {
                return Binder{&l->atom, i};
            }
        }
    }
    return std::nullopt;
}

// Copies the rules defining `start` (transitively, down to instance
// predicates) from the encoding, keeping encoding order.
void copy_defining_rules(const PredicateSig& start, const Program& encoding,
                         const Classification& cls, std::set<PredicateSig>& visited,
                         std::set<std::size_t>& rule_indices, std::vector<Diagnostic>& diagnostics) {
    if (!visited.insert(start).second || cls.instance_predicates.count(start)) {
        return;
    }
    for (std::size_t i = 0; i < encoding.rules.size(); ++i) {
        const Rule& r = encoding.rules[i];
        if ((r.kind != RuleKind::Fact && r.kind != RuleKind::Normal) || !r.head ||
            !(sig_of(*r.head) == start)) {
            continue;
        }
        rule_indices.insert(i);
        for (const BodyElem& e : r.body) {
            if (const Literal* l = as_literal(e)) {
                if (l->negated) {
                    diagnostics.push_back({Severity::Warning,
                                           "strict-type rule for " + start.name +
                                               " uses default negation; the embedded learner "
                                               "requires a definite background",
                                           r.span});
                }
                copy_defining_rules(sig_of(l->atom), encoding, cls, visited, rule_indices,
                                    diagnostics);
            }
        }
    }
}

} // namespace

HeadModes derive_head_modes(const Program& encoding, const Classification& cls) {
    HeadModes result;

    std::vector<std::pair<PredicateSig, HeadContext>> heads;
    for (const Rule& r : encoding.rules) {
        if (r.kind != RuleKind::Choice) {
            continue;
        }
        for (const ChoiceElement& e : r.choice_head->elements) {
            PredicateSig sig = sig_of(e.atom);
            auto seen = std::find_if(heads.begin(), heads.end(),
                                     [&sig](const auto& h) { return h.first == sig; });
            if (seen != heads.end()) {
                continue; // first occurrence defines the mode
            }
            HeadContext ctx{e.atom, e.condition, r.span};
            for (const BodyElem& b : r.body) {
                ctx.binders.push_back(b);
            }
            heads.emplace_back(std::move(sig), std::move(ctx));
        }
    }

    std::set<PredicateSig> copy_visited;
    std::set<std::size_t> copied_indices;
    std::map<PredicateSig, std::vector<Placeholder>> resolved;

    auto resolve_head = [&](const HeadContext& ctx,
                            bool allow_fallback) -> std::optional<std::vector<Placeholder>> {
        std::vector<Placeholder> placeholders;
        for (std::size_t i = 0; i < ctx.atom.args.size(); ++i) {
            const Term& arg = ctx.atom.args[i];
            if (!arg.is_variable()) {
                result.diagnostics.push_back({Severity::Warning,
                                              "choice element " + to_string(ctx.atom) +
                                                  " has a non-variable argument; no #modeh emitted",
                                              ctx.span});
                return std::vector<Placeholder>{}; // marks the head as skipped
            }
            std::optional<Binder> binder = find_binder(ctx, arg.name);
            if (!binder) {
                result.diagnostics.push_back({Severity::Warning,
                                              "variable " + arg.name + " of choice element " +
                                                  to_string(ctx.atom) +
                                                  " is not bound by a positive condition or body "
                                                  "literal; no #modeh emitted",
                                              ctx.span});
                return std::vector<Placeholder>{};
            }
            PredicateSig bsig = sig_of(*binder->atom);
            if (cls.instance_determined.count(bsig)) {
                if (bsig.arity == 1) {
                    placeholders.push_back({Placeholder::Kind::Var, bsig.name});
                }
                else {
                    placeholders.push_back(
                        {Placeholder::Kind::Var, arg_type_name(bsig, binder->position)});
                    result.strict_types.add_projection(bsig);
                }
                copy_defining_rules(bsig, encoding, cls, copy_visited, copied_indices,
                                    result.diagnostics);
                result.strict_types.type_predicates.insert(placeholders.back().type);
                continue;
            }
            auto other = resolved.find(bsig);
            if (other != resolved.end() && !other->second.empty()) {
                placeholders.push_back(other->second[binder->position]);
                result.strict_types.type_predicates.insert(placeholders.back().type);
                continue;
            }
            bool pending = !allow_fallback && cls.choice_heads.count(bsig) &&
                           other == resolved.end();
            if (pending) {
                return std::nullopt; // retry once the binder's mode is known
            }
            result.diagnostics.push_back(
                {Severity::Warning,
                 "context predicate " + bsig.name + "/" + std::to_string(bsig.arity) + " of " +
                     to_string(ctx.atom) +
                     " is neither instance-determined nor a #modeh predicate; using a "
                     "projection type",
                 ctx.span});
            placeholders.push_back({Placeholder::Kind::Var, arg_type_name(bsig, binder->position)});
            result.strict_types.add_projection(bsig);
            result.strict_types.type_predicates.insert(placeholders.back().type);
        }
        return placeholders;
    };

    std::vector<std::size_t> order(heads.size());
    for (std::size_t i = 0; i < heads.size(); ++i) {
        order[i] = i;
    }
    std::set<std::size_t> done;
    bool progress = true;
    bool allow_fallback = false;
    while (done.size() < heads.size()) {
        if (!progress) {
            allow_fallback = true; // cyclic or unresolvable binders remain
        }
        progress = false;
        for (std::size_t i : order) {
            if (done.count(i)) {
                continue;
            }
            auto& [sig, ctx] = heads[i];
            auto placeholders = resolve_head(ctx, allow_fallback);
            if (!placeholders) {
                continue;
            }
            done.insert(i);
            progress = true;
            bool skipped = placeholders->empty() && !ctx.atom.args.empty();
            if (!skipped) {
                resolved[sig] = *placeholders;
                result.modes.push_back(
                    {ModeDeclaration::Kind::Head, sig.name, std::move(*placeholders)});
            }
        }
    }

    for (std::size_t index : copied_indices) {
        result.strict_types.rules.push_back(encoding.rules[index]);
    }
    return result;
}

std::vector<ModeDeclaration> derive_body_modes(const Program& encoding, const Classification& cls,
                                               StrictTypeRules& strict_types) {
    std::vector<ModeDeclaration> modes;
    std::vector<PredicateSig> seen;
    for (const Rule& r : encoding.rules) {
        if (r.kind == RuleKind::Heuristic) {
            continue; // solver hints, not program predicates
        }
        for (const PredicateSig& sig : rule_predicates(r)) {
            if (cls.choice_heads.count(sig) ||
                std::find(seen.begin(), seen.end(), sig) != seen.end()) {
                continue;
            }
            seen.push_back(sig);
            ModeDeclaration mode{ModeDeclaration::Kind::Body, sig.name, {}};
            if (sig.arity == 1) {
                mode.placeholders.push_back({Placeholder::Kind::Var, sig.name});
                strict_types.type_predicates.insert(sig.name);
            }
            else if (sig.arity > 1) {
                for (std::size_t i = 0; i < sig.arity; ++i) {
                    mode.placeholders.push_back({Placeholder::Kind::Var, arg_type_name(sig, i)});
                }
                strict_types.add_projection(sig);
            }
            modes.push_back(std::move(mode));
        }
    }
    return modes;
}

std::vector<ExampleSpec> build_examples(const std::vector<InstanceInput>& instances,
                                        const std::vector<ModelInput>& models,
                                        const std::vector<ModeDeclaration>& head_modes,
                                        const std::set<PredicateSig>& known_predicates,
                                        std::vector<Diagnostic>& diagnostics) {
    if (instances.size() != models.size()) {
        throw std::runtime_error("build_examples: " + std::to_string(instances.size()) +
                                 " instances but " + std::to_string(models.size()) +
                                 " answer sets");
    }
    std::set<PredicateSig> head_sigs;
    for (const ModeDeclaration& m : head_modes) {
        head_sigs.insert({m.predicate, m.arity()});
    }
    std::vector<ExampleSpec> examples;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (instances[i].id != models[i].id) {
            throw std::runtime_error("build_examples: instance '" + instances[i].id +
                                     "' is paired with answer set '" + models[i].id + "'");
        }
        ExampleSpec ex;
        ex.id = instances[i].id;
        std::set<Atom> inclusions;
        std::set<PredicateSig> warned;
        for (const Atom& a : models[i].atoms) {
            PredicateSig sig = sig_of(a);
            if (!known_predicates.empty() && !known_predicates.count(sig) &&
                warned.insert(sig).second) {
                diagnostics.push_back({Severity::Warning,
                                       "answer set for '" + ex.id + "' contains " + to_string(a) +
                                           " whose predicate does not appear in the encoding",
                                       {}});
            }
            if (head_sigs.count(sig)) {
                inclusions.insert(a);
            }
        }
        ex.inclusions.assign(inclusions.begin(), inclusions.end());
        ex.context = instances[i].program.rules;
        examples.push_back(std::move(ex));
    }
    return examples;
}

LearningTask assemble_task(const HeadModes& heads, std::vector<ModeDeclaration> body_modes,
                           std::vector<ExampleSpec> examples,
                           const std::set<PredicateSig>& instance_predicates) {
    LearningTask task;
    task.background = heads.strict_types;
    task.diagnostics = heads.diagnostics;
    task.modes = heads.modes;
    task.modes.insert(task.modes.end(), body_modes.begin(), body_modes.end());
    std::stable_sort(task.modes.begin(), task.modes.end(),
                     [](const ModeDeclaration& a, const ModeDeclaration& b) {
                         auto key = [](const ModeDeclaration& m) {
                             return std::make_tuple(m.kind, m.predicate, m.arity());
                         };
                         return key(a) < key(b);
                     });
    task.examples = std::move(examples);

    std::set<std::string> defined;
    for (const Rule& r : task.background.all_rules()) {
        if (r.head) {
            defined.insert(r.head->predicate);
        }
    }
    for (const ModeDeclaration& m : task.modes) {
        for (const Placeholder& p : m.placeholders) {
            bool ok = defined.count(p.type) || instance_predicates.count({p.type, 1}) ||
                      p.type == m.predicate;
            if (!ok) {
                throw std::runtime_error("assemble_task: type '" + p.type + "' referenced by " +
                                         to_string(m) + " is not defined in the background");
            }
        }
    }
    return task;
}

std::string serialize_task(const LearningTask& task) {
    std::string out;
    std::vector<Rule> background = task.background.all_rules();
    for (const Rule& r : background) {
        out += to_string(r) + "\n";
    }
    auto block = [&out](const std::string& text) {
        if (!text.empty()) {
            if (!out.empty()) {
                out += "\n";
            }
            out += text;
        }
    };
    std::string modeh;
    std::string modeb;
    for (const ModeDeclaration& m : task.modes) {
        (m.kind == ModeDeclaration::Kind::Head ? modeh : modeb) += to_string(m) + "\n";
    }
    block(modeh);
    block(modeb);
    std::string pos;
    for (const ExampleSpec& ex : task.examples) {
        pos += "#pos(" + ex.id + ", {";
        for (std::size_t i = 0; i < ex.inclusions.size(); ++i) {
            pos += (i ? ", " : "") + to_string(ex.inclusions[i]);
        }
        pos += "}, {";
        for (std::size_t i = 0; i < ex.exclusions.size(); ++i) {
            pos += (i ? ", " : "") + to_string(ex.exclusions[i]);
        }
        pos += "}, {";
        for (std::size_t i = 0; i < ex.context.size(); ++i) {
            pos += (i ? " " : "") + to_string(ex.context[i]);
        }
        pos += "}).\n";
    }
    block(pos);
    return out;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Splits on `sep` at bracket depth 0.
std::vector<std::string> split_top_level(const std::string& text, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string current;
    for (char c : text) {
        if (c == '(' || c == '{' || c == '[') {
            ++depth;
        }
        else if (c == ')' || c == '}' || c == ']') {
            --depth;
        }
        if (c == sep && depth == 0) {
            parts.push_back(trim(current));
            current.clear();
        }
        else {
            current += c;
        }
    }
    if (!trim(current).empty()) {
        parts.push_back(trim(current));
    }
    return parts;
}

// '.'-terminated statements at bracket depth 0, comments stripped.
std::vector<std::string> split_statements(const std::string& text) {
    std::vector<std::string> statements;
    int depth = 0;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '%') {
            while (i < text.size() && text[i] != '\n') {
                ++i;
            }
            continue;
        }
        if (c == '(' || c == '{' || c == '[') {
            ++depth;
        }
        else if (c == ')' || c == '}' || c == ']') {
            --depth;
        }
        if (c == '.' && depth == 0) {
            std::string s = trim(current);
            if (!s.empty()) {
                statements.push_back(std::move(s));
            }
            current.clear();
        }
        else {
            current += c;
        }
    }
    if (!trim(current).empty()) {
        throw std::runtime_error("parse_task: unterminated statement '" + trim(current) + "'");
    }
    return statements;
}

std::string strip_braces(const std::string& text, const std::string& what) {
    std::string t = trim(text);
    if (t.size() < 2 || t.front() != '{' || t.back() != '}') {
        throw std::runtime_error("parse_task: expected braced " + what + ", got '" + t + "'");
    }
    return trim(t.substr(1, t.size() - 2));
}

ModeDeclaration parse_mode(const std::string& statement, ModeDeclaration::Kind kind) {
    std::size_t open = statement.find('(');
    std::size_t close = statement.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) {
        throw std::runtime_error("parse_task: malformed mode declaration '" + statement + "'");
    }
    std::string schema = trim(statement.substr(open + 1, close - open - 1));
    ModeDeclaration mode{kind, "", {}};
    std::size_t schema_open = schema.find('(');
    if (schema_open == std::string::npos) {
        mode.predicate = schema;
        return mode;
    }
    mode.predicate = trim(schema.substr(0, schema_open));
    std::string args = schema.substr(schema_open + 1, schema.rfind(')') - schema_open - 1);
    for (const std::string& part : split_top_level(args, ',')) {
        std::size_t p_open = part.find('(');
        std::size_t p_close = part.rfind(')');
        if (p_open == std::string::npos || p_close == std::string::npos) {
            throw std::runtime_error("parse_task: malformed placeholder '" + part + "'");
        }
        std::string keyword = trim(part.substr(0, p_open));
        std::string type = trim(part.substr(p_open + 1, p_close - p_open - 1));
        Placeholder ph;
        if (keyword == "var") {
            ph.kind = Placeholder::Kind::Var;
        }
        else if (keyword == "const") {
            ph.kind = Placeholder::Kind::Const;
        }
        else {
            throw std::runtime_error("parse_task: unknown placeholder kind '" + keyword + "'");
        }
        ph.type = std::move(type);
        mode.placeholders.push_back(std::move(ph));
    }
    return mode;
}

std::vector<Atom> parse_atom_list(const std::string& text) {
    std::vector<Atom> atoms;
    for (const std::string& part : split_top_level(text, ',')) {
        atoms.push_back(parse_atom(part));
    }
    return atoms;
}

} // namespace

LearningTask parse_task(const std::string& text) {
    LearningTask task;
    std::string background_text;
    for (const std::string& statement : split_statements(text)) {
        if (statement.rfind("#modeh", 0) == 0) {
            task.modes.push_back(parse_mode(statement, ModeDeclaration::Kind::Head));
        }
        else if (statement.rfind("#modeb", 0) == 0) {
            task.modes.push_back(parse_mode(statement, ModeDeclaration::Kind::Body));
        }
        else if (statement.rfind("#pos", 0) == 0) {
            std::size_t open = statement.find('(');
            std::size_t close = statement.rfind(')');
            if (open == std::string::npos || close == std::string::npos) {
                throw std::runtime_error("parse_task: malformed example '" + statement + "'");
            }
            std::vector<std::string> parts =
                split_top_level(statement.substr(open + 1, close - open - 1), ',');
            if (parts.size() < 3 || parts.size() > 4) {
                throw std::runtime_error("parse_task: example must have id, inclusions, "
                                         "exclusions and optional context");
            }
            ExampleSpec ex;
            ex.id = parts[0];
            ex.inclusions = parse_atom_list(strip_braces(parts[1], "inclusions"));
            ex.exclusions = parse_atom_list(strip_braces(parts[2], "exclusions"));
            if (parts.size() == 4) {
                ex.context = parse_program(strip_braces(parts[3], "context")).rules;
            }
            task.examples.push_back(std::move(ex));
        }
        else if (statement.rfind("#", 0) == 0) {
            throw std::runtime_error("parse_task: unsupported directive '" + statement + "'");
        }
        else {
            background_text += statement + ".\n";
        }
    }
    Program background = parse_program(background_text);
    task.background.rules = background.rules;
    for (const Diagnostic& d : background.diagnostics) {
        task.diagnostics.push_back(d);
    }
    for (const Rule& r : task.background.rules) {
        if (!r.head) {
            continue;
        }
        const std::string& name = r.head->predicate;
        std::size_t pos = name.rfind("_arg");
        if (pos != std::string::npos && pos + 4 < name.size() &&
            name.find_first_not_of("0123456789", pos + 4) == std::string::npos) {
            task.background.projection_predicates.insert(name);
        }
        task.background.type_predicates.insert(name);
    }
    for (const ModeDeclaration& m : task.modes) {
        for (const Placeholder& p : m.placeholders) {
            task.background.type_predicates.insert(p.type);
        }
    }
    return task;
}

LearningTask generate_task(const Program& encoding, const std::vector<InstanceInput>& instances,
                           const std::vector<ModelInput>& models) {
    std::set<PredicateSig> instance_preds;
    for (const InstanceInput& inst : instances) {
        for (const PredicateSig& sig : fact_predicates(inst.program)) {
            instance_preds.insert(sig);
        }
    }
    Classification cls = classify(encoding, instance_preds);
    HeadModes heads = derive_head_modes(encoding, cls);
    std::vector<ModeDeclaration> body_modes = derive_body_modes(encoding, cls, heads.strict_types);

    std::set<PredicateSig> known = instance_preds;
    for (const Rule& r : encoding.rules) {
        for (const PredicateSig& sig : rule_predicates(r)) {
            known.insert(sig);
        }
    }
    std::vector<Diagnostic> diagnostics = cls.diagnostics;
    std::vector<ExampleSpec> examples =
        build_examples(instances, models, heads.modes, known, diagnostics);

    LearningTask task = assemble_task(heads, std::move(body_modes), std::move(examples),
                                      instance_preds);
    task.diagnostics.insert(task.diagnostics.begin(), diagnostics.begin(), diagnostics.end());
    return task;
}

} // namespace heulearn
