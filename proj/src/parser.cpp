#include "heulearn/parser.hpp"

#include <cctype>
#include <cstdint>

namespace heulearn {

namespace {

enum class Tok { Ident, Variable, Integer, Punct, Directive, End };

struct Token {
    Tok type = Tok::End;
    std::string text;
    Span span;
};

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& message, const Token& at) const {
        throw ParseError(message, at.span);
    }

private:
    void advance() {
        skip_trivia();
        current_.span = {line_, col_};
        if (pos_ >= text_.size()) {
            current_ = {Tok::End, "", current_.span};
            return;
        }
        char c = text_[pos_];
        if (c == '#') {
            std::size_t start = pos_;
            take();
            while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
                take();
            }
            current_.type = Tok::Directive;
            current_.text = text_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                take();
            }
            current_.type = Tok::Integer;
            current_.text = text_.substr(start, pos_ - start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
                take();
            }
            current_.text = text_.substr(start, pos_ - start);
            char first = current_.text[0];
            current_.type = (std::isupper(static_cast<unsigned char>(first)) || first == '_')
                                ? Tok::Variable
                                : Tok::Ident;
            return;
        }
        // multi-char punctuation first
        static const char* two_char[] = {":-", ":~", "!=", "<>", "<=", ">=", ".."};
        for (const char* op : two_char) {
            if (text_.compare(pos_, 2, op) == 0) {
                take();
                take();
                current_.type = Tok::Punct;
                current_.text = op;
                return;
            }
        }
        static const std::string single = "(){}[],;.:@=<>+-*/|&";
        if (single.find(c) != std::string::npos) {
            take();
            current_.type = Tok::Punct;
            current_.text = std::string(1, c);
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", current_.span);
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    take();
                }
            }
            else if (std::isspace(static_cast<unsigned char>(c))) {
                take();
            }
            else {
                break;
            }
        }
    }

    void take() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        }
        else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token current_;
};

bool is_punct(const Token& t, const char* text) { return t.type == Tok::Punct && t.text == text; }

bool is_comparison(const Token& t) {
    if (t.type != Tok::Punct) {
        return false;
    }
    return t.text == "=" || t.text == "!=" || t.text == "<>" || t.text == "<" ||
           t.text == "<=" || t.text == ">" || t.text == ">=";
}

bool is_arith_op(const Token& t) {
    if (t.type != Tok::Punct) {
        return false;
    }
    return t.text == "+" || t.text == "-" || t.text == "*" || t.text == "/";
}

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    Program parse() {
        Program program;
        while (lex_.peek().type != Tok::End) {
            program.rules.push_back(parse_statement());
            const Rule& r = program.rules.back();
            if (!is_safe(r)) {
                program.diagnostics.push_back(
                    {Severity::Warning, "unsafe rule: head variable not bound by a positive body literal",
                     r.span});
            }
        }
        return program;
    }

    Atom parse_single_atom() {
        Atom a = parse_atom_tok();
        expect_end();
        return a;
    }

    std::vector<Atom> parse_witness_atoms() {
        std::vector<Atom> atoms;
        while (lex_.peek().type != Tok::End) {
            Token at = lex_.peek();
            Atom a = parse_atom_tok();
            if (!a.ground()) {
                lex_.fail("expected ground atom", at);
            }
            atoms.push_back(std::move(a));
            if (is_punct(lex_.peek(), ".")) {
                lex_.next();
            }
        }
        return atoms;
    }

private:
    Rule parse_statement() {
        Token first = lex_.peek();
        Rule rule;
        rule.span = first.span;
        if (first.type == Tok::Directive) {
            if (first.text == "#heuristic") {
                return parse_heuristic(rule);
            }
            lex_.fail("unsupported construct '" + first.text + "'", first);
        }
        if (is_punct(first, ":~")) {
            lex_.next();
            rule.kind = RuleKind::WeakConstraint;
            rule.body = parse_body();
            expect(".");
            rule.annotation = parse_annotation();
            return rule;
        }
        if (is_punct(first, ":-")) {
            lex_.next();
            rule.kind = RuleKind::Normal;
            rule.body = parse_body();
            expect(".");
            return rule;
        }
        if (is_punct(first, "-")) {
            lex_.fail("unsupported construct: classical negation", first);
        }
        if (is_punct(first, "{") || first.type == Tok::Integer || first.type == Tok::Variable) {
            rule.kind = RuleKind::Choice;
            rule.choice_head = parse_choice_head();
            if (is_punct(lex_.peek(), ":-")) {
                lex_.next();
                rule.body = parse_body();
            }
            expect(".");
            return rule;
        }
        if (first.type != Tok::Ident) {
            lex_.fail("expected statement", first);
        }
        rule.head = parse_atom_tok();
        Token after = lex_.peek();
        if (is_punct(after, "|") || is_punct(after, ";")) {
            lex_.fail("unsupported construct: disjunctive head", after);
        }
        if (is_punct(after, ":-")) {
            lex_.next();
            rule.kind = RuleKind::Normal;
            rule.body = parse_body();
        }
        else {
            rule.kind = RuleKind::Normal;
        }
        expect(".");
        if (rule.body.empty() && rule.head->ground()) {
            rule.kind = RuleKind::Fact;
        }
        return rule;
    }

    Rule parse_heuristic(Rule rule) {
        lex_.next(); // #heuristic
        rule.kind = RuleKind::Heuristic;
        rule.head = parse_atom_tok();
        if (is_punct(lex_.peek(), ":")) {
            lex_.next();
            rule.body = parse_body();
        }
        expect(".");
        rule.annotation = parse_annotation();
        return rule;
    }

    ChoiceHead parse_choice_head() {
        ChoiceHead head;
        if (!is_punct(lex_.peek(), "{")) {
            Token bound = lex_.next();
            head.lower = bound.text;
        }
        expect("{");
        if (!is_punct(lex_.peek(), "}")) {
            head.elements.push_back(parse_choice_element());
            while (is_punct(lex_.peek(), ";")) {
                lex_.next();
                head.elements.push_back(parse_choice_element());
            }
        }
        expect("}");
        Token after = lex_.peek();
        if (after.type == Tok::Integer || after.type == Tok::Variable) {
            head.upper = lex_.next().text;
        }
        return head;
    }

    ChoiceElement parse_choice_element() {
        ChoiceElement elem;
        elem.atom = parse_atom_tok();
        if (is_punct(lex_.peek(), ":")) {
            lex_.next();
            elem.condition.push_back(parse_body_elem());
            while (is_punct(lex_.peek(), ",")) {
                lex_.next();
                elem.condition.push_back(parse_body_elem());
            }
        }
        return elem;
    }

    std::vector<BodyElem> parse_body() {
        std::vector<BodyElem> body;
        body.push_back(parse_body_elem());
        while (is_punct(lex_.peek(), ",")) {
            lex_.next();
            body.push_back(parse_body_elem());
        }
        return body;
    }

    BodyElem parse_body_elem() {
        Token first = lex_.peek();
        bool negated = false;
        if (first.type == Tok::Ident && first.text == "not") {
            lex_.next();
            negated = true;
            first = lex_.peek();
        }
        if (first.type == Tok::Directive) {
            lex_.fail("unsupported construct '" + first.text + "' in body", first);
        }
        if (is_punct(first, "-") && !negated) {
            // distinguish classical negation from a negative integer builtin
            lex_.fail("unsupported construct: classical negation", first);
        }
        if (first.type == Tok::Ident) {
            Atom atom = parse_atom_tok();
            Token after = lex_.peek();
            if (is_comparison(after) || is_arith_op(after)) {
                if (!atom.args.empty()) {
                    lex_.fail("unexpected operator after atom", after);
                }
                return finish_builtin(negated, atom.predicate);
            }
            return Literal{negated, std::move(atom)};
        }
        if (first.type == Tok::Variable || first.type == Tok::Integer) {
            lex_.next();
            return finish_builtin(negated, first.text);
        }
        lex_.fail("expected literal", first);
    }

    // Collects the remaining comparison/arithmetic tokens of a built-in.
    BodyElem finish_builtin(bool negated, std::string firstTok) {
        std::vector<std::string> toks{std::move(firstTok)};
        bool saw_comparison = false;
        while (true) {
            Token t = lex_.peek();
            if (is_comparison(t)) {
                saw_comparison = true;
                toks.push_back(lex_.next().text);
            }
            else if (is_arith_op(t)) {
                toks.push_back(lex_.next().text);
            }
            else if (t.type == Tok::Variable || t.type == Tok::Integer || t.type == Tok::Ident) {
                toks.push_back(lex_.next().text);
            }
            else if (is_punct(t, "..")) {
                lex_.fail("unsupported construct: interval term", t);
            }
            else {
                break;
            }
        }
        if (!saw_comparison) {
            throw ParseError("expected comparison operator in built-in", lex_.peek().span);
        }
        std::string text;
        if (negated) {
            text = "not ";
        }
        for (std::size_t i = 0; i < toks.size(); ++i) {
            if (i) {
                text += " ";
            }
            text += toks[i];
        }
        return Builtin{text};
    }

    Atom parse_atom_tok() {
        Token name = lex_.peek();
        if (name.type != Tok::Ident) {
            lex_.fail("expected predicate name", name);
        }
        lex_.next();
        Atom atom;
        atom.predicate = name.text;
        if (is_punct(lex_.peek(), "(")) {
            lex_.next();
            atom.args.push_back(parse_term());
            while (is_punct(lex_.peek(), ",")) {
                lex_.next();
                atom.args.push_back(parse_term());
            }
            expect(")");
        }
        return atom;
    }

    Term parse_term() {
        Token t = lex_.peek();
        if (t.type == Tok::Variable) {
            lex_.next();
            return Term::variable(t.text);
        }
        if (t.type == Tok::Integer) {
            lex_.next();
            return Term{TermKind::Integer, t.text};
        }
        if (is_punct(t, "-")) {
            lex_.next();
            Token n = lex_.peek();
            if (n.type != Tok::Integer) {
                lex_.fail("expected integer after '-'", n);
            }
            lex_.next();
            return Term{TermKind::Integer, "-" + n.text};
        }
        if (t.type == Tok::Ident) {
            lex_.next();
            if (is_punct(lex_.peek(), "(")) {
                lex_.fail("unsupported construct: function term '" + t.text + "(...)'", t);
            }
            return Term::symbol(t.text);
        }
        if (is_punct(t, "..")) {
            lex_.fail("unsupported construct: interval term", t);
        }
        lex_.fail("expected term", t);
    }

    // Text between '[' and ']', tokens concatenated ("1,true", "X@1,c").
    std::string parse_annotation() {
        expect("[");
        std::string text;
        int depth = 0;
        while (true) {
            Token t = lex_.peek();
            if (t.type == Tok::End) {
                lex_.fail("unterminated annotation", t);
            }
            if (is_punct(t, "[")) {
                ++depth;
            }
            if (is_punct(t, "]")) {
                if (depth == 0) {
                    lex_.next();
                    break;
                }
                --depth;
            }
            text += lex_.next().text;
        }
        return text;
    }

    void expect(const char* punct) {
        Token t = lex_.peek();
        if (!is_punct(t, punct)) {
            lex_.fail(std::string("expected '") + punct + "'", t);
        }
        lex_.next();
    }

    void expect_end() {
        Token t = lex_.peek();
        if (t.type != Tok::End) {
            lex_.fail("unexpected trailing input", t);
        }
    }

    Lexer lex_;
};

} // namespace

Program parse_program(const std::string& text) { return Parser(text).parse(); }

Atom parse_atom(const std::string& text) { return Parser(text).parse_single_atom(); }

std::vector<Atom> parse_atom_set(const std::string& text) {
    if (text.find('.') != std::string::npos) {
        Program p = parse_program(text);
        std::vector<Atom> atoms;
        for (const Rule& r : p.rules) {
            if (r.kind != RuleKind::Fact) {
                throw ParseError("expected ground facts in atom set", r.span);
            }
            atoms.push_back(*r.head);
        }
        return atoms;
    }
    return Parser(text).parse_witness_atoms();
}

} // namespace heulearn
