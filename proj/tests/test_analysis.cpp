#include "heulearn/analysis.hpp"
#include "heulearn/parser.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace heulearn;

namespace {

std::set<PredicateSig> sigs(std::initializer_list<std::pair<const char*, std::size_t>> list) {
    std::set<PredicateSig> out;
    for (const auto& [name, arity] : list) {
        out.insert({name, arity});
    }
    return out;
}

} // namespace

TEST_CASE("choice rules contribute head-to-condition edges", "[analysis]") {
    DependencyGraph g =
        build_dependency_graph(parse_program("{cabinetTOthing(C,T)} :- cabinetDomain(C), thing(T)."));
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0] == DependencyEdge{{"cabinetTOthing", 2}, {"cabinetDomain", 1}, true});
    CHECK(g.edges[1] == DependencyEdge{{"cabinetTOthing", 2}, {"thing", 1}, true});
    CHECK(g.nodes.size() == 3);
}

TEST_CASE("normal rules contribute head-to-body edges", "[analysis]") {
    DependencyGraph g = build_dependency_graph(parse_program("cabinetDomain(C) :- cabinetDomainNew(C)."));
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0] == DependencyEdge{{"cabinetDomain", 1}, {"cabinetDomainNew", 1}, false});
}

TEST_CASE("empty program yields an empty graph", "[analysis]") {
    DependencyGraph g = build_dependency_graph(parse_program(""));
    CHECK(g.nodes.empty());
    CHECK(g.edges.empty());
}

TEST_CASE("constraints and conditions contribute nodes", "[analysis]") {
    DependencyGraph g = build_dependency_graph(
        parse_program(":- a(X), not b(X).\n{ c(X) : d(X) } :- e(X).\n"));
    CHECK(g.nodes.count({"a", 1}));
    CHECK(g.nodes.count({"b", 1}));
    REQUIRE(g.edges.size() == 2); // c->d and c->e
}

TEST_CASE("derived domain predicates are instance-determined", "[analysis]") {
    Program enc = parse_program("{cabinetTOthing(C,T)} :- cabinetDomain(C), thing(T).\n"
                                "cabinetDomain(C) :- cabinetDomainNew(C).\n"
                                "cabinetDomain(C) :- legacyConfig_cabinet(C).\n");
    Classification cls =
        classify(enc, sigs({{"cabinetDomainNew", 1}, {"legacyConfig_cabinet", 1}, {"thing", 1}}));
    CHECK(cls.instance_determined.count({"cabinetDomain", 1}));
    CHECK(cls.instance_determined.count({"thing", 1}));
    CHECK(cls.choice_heads == sigs({{"cabinetTOthing", 2}}));
    CHECK(!cls.instance_determined.count({"cabinetTOthing", 2}));
}

TEST_CASE("instance-only predicates are determined", "[analysis]") {
    Classification cls = classify(parse_program(""), sigs({{"thing", 1}}));
    CHECK(cls.instance_determined.count({"thing", 1}));
    CHECK(cls.instance_predicates.count({"thing", 1}));
}

TEST_CASE("predicates downstream of a choice are not determined", "[analysis]") {
    Program enc = parse_program("{pick(X)} :- dom(X).\n"
                                "used(X) :- pick(X).\n"
                                "mixed(X) :- dom(X), used(X).\n");
    Classification cls = classify(enc, sigs({{"dom", 1}}));
    CHECK(!cls.instance_determined.count({"used", 1}));
    CHECK(!cls.instance_determined.count({"mixed", 1}));
    CHECK(cls.instance_determined.count({"dom", 1}));
}

TEST_CASE("negated dependencies on determined predicates are allowed", "[analysis]") {
    Program enc = parse_program("fresh(X) :- dom(X), not legacy(X).");
    Classification cls = classify(enc, sigs({{"dom", 1}, {"legacy", 1}}));
    CHECK(cls.instance_determined.count({"fresh", 1}));
}

TEST_CASE("builtins are ignored for determinedness", "[analysis]") {
    Program enc = parse_program("big(X) :- dom(X), X > 3.");
    Classification cls = classify(enc, sigs({{"dom", 1}}));
    CHECK(cls.instance_determined.count({"big", 1}));
}

TEST_CASE("choice head colliding with an instance fact warns", "[analysis]") {
    Program enc = parse_program("{pick(X)} :- dom(X).");
    Classification cls = classify(enc, sigs({{"dom", 1}, {"pick", 1}}));
    CHECK(cls.choice_heads.count({"pick", 1}));
    CHECK(!cls.instance_determined.count({"pick", 1}));
    REQUIRE(cls.diagnostics.size() == 1);
    CHECK(cls.diagnostics[0].message.find("choice head") != std::string::npos);
}

TEST_CASE("adding instance predicates never shrinks the fixpoint", "[analysis][property]") {
    Program enc = parse_program("a(X) :- b(X).\n"
                                "c(X) :- a(X), d(X).\n"
                                "{e(X)} :- c(X).\n"
                                "f(X) :- e(X), b(X).\n");
    std::vector<PredicateSig> pool = {{"b", 1}, {"d", 1}, {"g", 1}};
    std::set<PredicateSig> base;
    std::set<PredicateSig> previous;
    for (const PredicateSig& add : pool) {
        base.insert(add);
        std::set<PredicateSig> now = classify(enc, base).instance_determined;
        CHECK(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
        previous = now;
    }
}

namespace {

// Independent oracle: full rescan iteration straight from the definition,
// without the incremental bookkeeping of classify().
std::set<PredicateSig> oracle_determined(const Program& enc,
                                         const std::set<PredicateSig>& instance_preds) {
    std::set<PredicateSig> choice;
    std::set<PredicateSig> all = instance_preds;
    for (const Rule& r : enc.rules) {
        for (const PredicateSig& s : rule_predicates(r)) {
            all.insert(s);
        }
        if (r.kind == RuleKind::Choice) {
            for (const ChoiceElement& e : r.choice_head->elements) {
                choice.insert({e.atom.predicate, e.atom.arity()});
            }
        }
    }
    std::set<PredicateSig> determined;
    for (bool changed = true; changed;) {
        changed = false;
        for (const PredicateSig& p : all) {
            if (determined.count(p) || choice.count(p)) {
                continue;
            }
            bool ok = true;
            for (const Rule& r : enc.rules) {
                bool defines = false;
                if ((r.kind == RuleKind::Fact || r.kind == RuleKind::Normal) && r.head &&
                    r.head->predicate == p.name && r.head->arity() == p.arity) {
                    defines = true;
                }
                if (r.kind == RuleKind::Choice) {
                    for (const ChoiceElement& e : r.choice_head->elements) {
                        if (e.atom.predicate == p.name && e.atom.arity() == p.arity) {
                            defines = true; // choice-defined: handled by the choice set
                        }
                    }
                }
                if (!defines || r.kind != RuleKind::Normal) {
                    continue;
                }
                for (const BodyElem& be : r.body) {
                    if (const Literal* l = as_literal(be)) {
                        if (!determined.count({l->atom.predicate, l->atom.arity()})) {
                            ok = false;
                        }
                    }
                }
            }
            if (ok) {
                determined.insert(p);
                changed = true;
            }
        }
    }
    return determined;
}

} // namespace

TEST_CASE("classify matches the rescan oracle on random programs", "[analysis][property]") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> pred(0, 9);
    std::uniform_int_distribution<int> rules(1, 8);
    std::uniform_int_distribution<int> body(1, 3);
    std::uniform_int_distribution<int> kind(0, 3);
    const char* names[] = {"p0", "p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8", "p9"};
    for (int round = 0; round < 150; ++round) {
        std::string text;
        int n = rules(rng);
        for (int i = 0; i < n; ++i) {
            std::string head = names[pred(rng)];
            std::string line;
            if (kind(rng) == 0) {
                line = "{" + head + "(X)} :- " + std::string(names[pred(rng)]) + "(X).";
            }
            else {
                line = head + "(X) :- ";
                int b = body(rng);
                for (int j = 0; j < b; ++j) {
                    if (j) {
                        line += ", ";
                    }
                    line += std::string(names[pred(rng)]) + "(X)";
                }
                line += ".";
            }
            text += line + "\n";
        }
        Program enc = parse_program(text);
        std::set<PredicateSig> instance_preds;
        for (int i = 0; i < 3; ++i) {
            instance_preds.insert({names[pred(rng)], 1});
        }
        INFO(text);
        CHECK(classify(enc, instance_preds).instance_determined ==
              oracle_determined(enc, instance_preds));
    }
}
