#include "heulearn/heuristics.hpp"

#include "heulearn/io.hpp"
#include "heulearn/parser.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace heulearn;

namespace {

const std::string kFixtures = HEULEARN_FIXTURES;

Hypothesis hypothesis_of(const std::string& text) {
    Hypothesis h;
    h.rules = parse_program(text).rules;
    return h;
}

StrictTypeRules hrp_types() {
    StrictTypeRules types;
    for (const char* t : {"cabinetDomain", "roomDomain", "thing", "legacyConfig_room",
                          "legacyConfig_cabinet", "legacyConfig_thing"}) {
        types.type_predicates.insert(t);
    }
    for (const char* p : {"legacyConfig_personTOroom", "legacyConfig_roomTOcabinet",
                          "legacyConfig_cabinetTOthing"}) {
        types.add_projection({p, 2});
    }
    return types;
}

} // namespace

TEST_CASE("redundant projection atoms are stripped", "[heuremit]") {
    Hypothesis h = hypothesis_of("reuse_cabinetTOthing(V0,V1) :- "
                                 "legacyConfig_cabinetTOthing(V0,V1), "
                                 "legacyConfig_cabinetTOthing_arg1(V0).");
    PostprocessResult out = postprocess(h, hrp_types());
    REQUIRE(out.hypothesis.rules.size() == 1);
    CHECK(to_string(out.hypothesis.rules[0]) ==
          "reuse_cabinetTOthing(V0,V1) :- legacyConfig_cabinetTOthing(V0,V1).");
    CHECK(out.diagnostics.empty()); // projections strip silently
}

TEST_CASE("sole binders survive postprocessing", "[heuremit]") {
    Hypothesis h = hypothesis_of("cabinetTOthing(V0,V1) :- cabinetDomain(V0), thing(V1).");
    PostprocessResult out = postprocess(h, hrp_types());
    CHECK(to_string(out.hypothesis.rules[0]) ==
          "cabinetTOthing(V0,V1) :- cabinetDomain(V0), thing(V1).");
}

TEST_CASE("type atoms kept when stripping would lose the only binder", "[heuremit]") {
    StrictTypeRules types;
    types.type_predicates.insert("dom");
    Hypothesis h = hypothesis_of("pick(V0) :- dom(V0).");
    PostprocessResult out = postprocess(h, types);
    CHECK(to_string(out.hypothesis.rules[0]) == "pick(V0) :- dom(V0).");
}

TEST_CASE("stripping a named type atom leaves a note", "[heuremit]") {
    StrictTypeRules types;
    types.type_predicates.insert("roomDomain");
    Hypothesis h = hypothesis_of(
        "roomTOcabinet(V0,V1) :- roomDomain(V0), legacyConfig_roomTOcabinet(V0,V1).");
    PostprocessResult out = postprocess(h, types);
    CHECK(to_string(out.hypothesis.rules[0]) ==
          "roomTOcabinet(V0,V1) :- legacyConfig_roomTOcabinet(V0,V1).");
    REQUIRE(out.diagnostics.size() == 1);
    CHECK(out.diagnostics[0].message.find("roomDomain") != std::string::npos);
}

TEST_CASE("unsafe hypotheses are rejected up front", "[heuremit]") {
    Hypothesis h = hypothesis_of("pick(V0) :- other(V1).");
    CHECK_THROWS_WITH(postprocess(h, {}), Catch::Matchers::ContainsSubstring("unsafe"));
}

TEST_CASE("postprocess never touches heads or foreign atoms", "[heuremit][property]") {
    Hypothesis h = hypothesis_of("a(V0,V1) :- b(V0,V1), c(V0), d(V1).\n"
                                 "e(V0) :- f(V0), g(V0).\n");
    StrictTypeRules types;
    types.type_predicates.insert("c"); // only c is a type
    PostprocessResult out = postprocess(h, types);
    REQUIRE(out.hypothesis.rules.size() == 2);
    CHECK(to_string(out.hypothesis.rules[0]) == "a(V0,V1) :- b(V0,V1), d(V1).");
    CHECK(to_string(out.hypothesis.rules[1]) == "e(V0) :- f(V0), g(V0).");
}

TEST_CASE("rules become directives by swapping the arrow", "[heuremit]") {
    Rule r = parse_program("cabinetTOthing(V0,V1) :- cabinetDomain(V0), thing(V1).").rules[0];
    CHECK(to_string(rule_to_directive(r, AnnotationMode::hard())) ==
          "#heuristic cabinetTOthing(V0,V1) : cabinetDomain(V0), thing(V1). [1,true]");
    CHECK(to_string(rule_to_directive(r, AnnotationMode::soft())) ==
          "#heuristic cabinetTOthing(V0,V1) : cabinetDomain(V0), thing(V1). [2,factor]");
    Rule fact = parse_program("reuse_room(V0) :- legacyConfig_room(V0).").rules[0];
    CHECK(to_string(rule_to_directive(fact, AnnotationMode::hard())) ==
          "#heuristic reuse_room(V0) : legacyConfig_room(V0). [1,true]");
}

TEST_CASE("custom annotations carry a priority", "[heuremit]") {
    AnnotationMode mode = AnnotationMode::custom("3", "1", "level");
    Rule r = parse_program("pick(V0) :- dom(V0).").rules[0];
    CHECK(to_string(rule_to_directive(r, mode)) ==
          "#heuristic pick(V0) : dom(V0). [3@1,level]");
    CHECK_THROWS(AnnotationMode::custom("1", std::nullopt, "sideways"));
}

TEST_CASE("emitted directives preserve order and count", "[heuremit]") {
    Hypothesis h = hypothesis_of(read_file(kFixtures + "/hrp/hypothesis13.lp"));
    EmitResult hard = emit_heuristics(h, AnnotationMode::hard());
    CHECK(hard.text == read_file(kFixtures + "/golden/hypothesis13_hard.heu"));
    EmitResult soft = emit_heuristics(h, AnnotationMode::soft());
    CHECK(soft.text == read_file(kFixtures + "/golden/hypothesis13_soft.heu"));
    CHECK(hard.diagnostics.empty());

    std::size_t lines = std::count(hard.text.begin(), hard.text.end(), '\n');
    CHECK(lines == h.rules.size());
}

TEST_CASE("empty hypothesis emits nothing and warns", "[heuremit]") {
    EmitResult out = emit_heuristics({}, AnnotationMode::hard());
    CHECK(out.text.empty());
    REQUIRE(out.diagnostics.size() == 1);
    CHECK(out.diagnostics[0].severity == Severity::Warning);
}

TEST_CASE("directives parse back to the source rule", "[heuremit][property]") {
    Program rules = parse_program(read_file(kFixtures + "/hrp/hypothesis13.lp"));
    for (const Rule& r : rules.rules) {
        for (const AnnotationMode& mode : {AnnotationMode::hard(), AnnotationMode::soft()}) {
            std::string text = to_string(rule_to_directive(r, mode));
            Program parsed = parse_program(text);
            REQUIRE(parsed.rules.size() == 1);
            const Rule& back = parsed.rules[0];
            CHECK(back.kind == RuleKind::Heuristic);
            CHECK(*back.head == *r.head);
            CHECK(back.body == r.body);
            CHECK(back.annotation == (mode.weight + "," + mode.modifier));
        }
    }
}

TEST_CASE("all emitted directives are safe", "[heuremit][property]") {
    Hypothesis h = hypothesis_of(read_file(kFixtures + "/hrp/hypothesis13.lp"));
    PostprocessResult post = postprocess(h, hrp_types());
    for (const Rule& r : post.hypothesis.rules) {
        Rule directive = rule_to_directive(r, AnnotationMode::hard()).to_rule();
        CHECK(is_safe(directive));
    }
    CHECK(post.hypothesis.rules.size() == h.rules.size());
}
