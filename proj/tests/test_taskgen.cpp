#include "heulearn/taskgen.hpp"

#include "heulearn/io.hpp"
#include "heulearn/parser.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace heulearn;

namespace {

const std::string kFixtures = HEULEARN_FIXTURES;

std::set<PredicateSig> sigs(std::initializer_list<std::pair<const char*, std::size_t>> list) {
    std::set<PredicateSig> out;
    for (const auto& [name, arity] : list) {
        out.insert({name, arity});
    }
    return out;
}

std::vector<std::string> mode_texts(const std::vector<ModeDeclaration>& modes) {
    std::vector<std::string> out;
    for (const ModeDeclaration& m : modes) {
        out.push_back(to_string(m));
    }
    return out;
}

InstanceInput instance(const std::string& id, const std::string& text) {
    return {id, parse_program(text)};
}

ModelInput model(const std::string& id, const std::string& text) {
    return {id, parse_atom_set(text)};
}

LearningTask hrp_task() {
    Program enc = parse_program(read_file(kFixtures + "/hrp/house.lp"));
    std::vector<InstanceInput> instances;
    std::vector<ModelInput> models;
    for (const char* id : {"ec03", "lt04", "nr02", "ss02"}) {
        instances.push_back(instance(id, read_file(kFixtures + "/hrp/" + id + ".lp")));
        models.push_back(model(id, read_file(kFixtures + "/hrp/" + id + ".model")));
    }
    return generate_task(enc, instances, models);
}

} // namespace

TEST_CASE("head mode with instance-determined context", "[taskgen]") {
    Program enc = parse_program("{cabinetTOthing(C,T)} :- cabinetDomain(C), thing(T).\n"
                                "cabinetDomain(C) :- cabinetDomainNew(C).\n"
                                "cabinetDomain(C) :- legacyConfig_cabinet(C).\n");
    Classification cls =
        classify(enc, sigs({{"cabinetDomainNew", 1}, {"legacyConfig_cabinet", 1}, {"thing", 1}}));
    HeadModes heads = derive_head_modes(enc, cls);
    REQUIRE(heads.modes.size() == 1);
    CHECK(to_string(heads.modes[0]) ==
          "#modeh(cabinetTOthing(var(cabinetDomain), var(thing))).");
    std::vector<Rule> background = heads.strict_types.all_rules();
    REQUIRE(background.size() == 2);
    CHECK(to_string(background[0]) == "cabinetDomain(C) :- cabinetDomainNew(C).");
    CHECK(to_string(background[1]) == "cabinetDomain(C) :- legacyConfig_cabinet(C).");
}

TEST_CASE("head mode reusing another head mode's type", "[taskgen]") {
    Program enc = parse_program("{ cabinet(C) } :- cabinetDomain(C).\n"
                                "{ roomTOcabinet(R,C) } :- roomDomain(R), cabinet(C).\n"
                                "cabinetDomain(C) :- cabinetDomainNew(C).\n");
    Classification cls = classify(enc, sigs({{"cabinetDomainNew", 1}, {"roomDomain", 1}}));
    HeadModes heads = derive_head_modes(enc, cls);
    std::vector<std::string> texts = mode_texts(heads.modes);
    CHECK(std::find(texts.begin(), texts.end(), "#modeh(cabinet(var(cabinetDomain))).") !=
          texts.end());
    CHECK(std::find(texts.begin(), texts.end(),
                    "#modeh(roomTOcabinet(var(roomDomain), var(cabinetDomain))).") != texts.end());
    CHECK(heads.diagnostics.empty());

    SECTION("resolution works regardless of rule order") {
        Program reversed = parse_program("{ roomTOcabinet(R,C) } :- roomDomain(R), cabinet(C).\n"
                                         "{ cabinet(C) } :- cabinetDomain(C).\n"
                                         "cabinetDomain(C) :- cabinetDomainNew(C).\n");
        HeadModes again = derive_head_modes(
            reversed, classify(reversed, sigs({{"cabinetDomainNew", 1}, {"roomDomain", 1}})));
        std::vector<std::string> reversed_texts = mode_texts(again.modes);
        CHECK(std::find(reversed_texts.begin(), reversed_texts.end(),
                        "#modeh(roomTOcabinet(var(roomDomain), var(cabinetDomain))).") !=
              reversed_texts.end());
        CHECK(again.diagnostics.empty());
    }
}

TEST_CASE("non-unary context predicates project argument types", "[taskgen]") {
    Program enc = parse_program("{ reuse_roomTOcabinet(R,C) } :- legacyConfig_roomTOcabinet(R,C).");
    Classification cls = classify(enc, sigs({{"legacyConfig_roomTOcabinet", 2}}));
    HeadModes heads = derive_head_modes(enc, cls);
    REQUIRE(heads.modes.size() == 1);
    CHECK(to_string(heads.modes[0]) ==
          "#modeh(reuse_roomTOcabinet(var(legacyConfig_roomTOcabinet_arg1), "
          "var(legacyConfig_roomTOcabinet_arg2))).");
    std::vector<Rule> background = heads.strict_types.all_rules();
    REQUIRE(background.size() == 2);
    CHECK(to_string(background[0]) ==
          "legacyConfig_roomTOcabinet_arg1(X1) :- legacyConfig_roomTOcabinet(X1,X2).");
    CHECK(to_string(background[1]) ==
          "legacyConfig_roomTOcabinet_arg2(X2) :- legacyConfig_roomTOcabinet(X1,X2).");
}

TEST_CASE("unresolvable context falls back to projection types", "[taskgen]") {
    // derived is neither instance-determined nor a choice head
    Program enc = parse_program("{ pick(X) } :- derived(X).\n"
                                "derived(X) :- helper(X).\n"
                                "helper(X) :- pick(X).\n");
    Classification cls = classify(enc, {});
    HeadModes heads = derive_head_modes(enc, cls);
    REQUIRE(heads.modes.size() == 1);
    CHECK(to_string(heads.modes[0]) == "#modeh(pick(var(derived_arg1))).");
    CHECK_FALSE(heads.diagnostics.empty());
}

TEST_CASE("body modes cover the remaining predicates", "[taskgen]") {
    Program enc = parse_program("{cabinetTOthing(C,T)} :- cabinetDomain(C), thing(T).\n"
                                "cabinetDomain(C) :- cabinetDomainNew(C).\n"
                                "seen(P,T) :- legacyConfig_personTOthing(P,T).\n");
    Classification cls =
        classify(enc, sigs({{"cabinetDomainNew", 1}, {"thing", 1},
                            {"legacyConfig_personTOthing", 2}}));
    HeadModes heads = derive_head_modes(enc, cls);
    std::vector<ModeDeclaration> body = derive_body_modes(enc, cls, heads.strict_types);
    std::vector<std::string> texts = mode_texts(body);
    CHECK(std::find(texts.begin(), texts.end(), "#modeb(thing(var(thing))).") != texts.end());
    CHECK(std::find(texts.begin(), texts.end(), "#modeb(cabinetDomain(var(cabinetDomain))).") !=
          texts.end());
    CHECK(std::find(texts.begin(), texts.end(),
                    "#modeb(legacyConfig_personTOthing(var(legacyConfig_personTOthing_arg1), "
                    "var(legacyConfig_personTOthing_arg2))).") != texts.end());
    for (const std::string& t : texts) {
        CHECK(t.find("cabinetTOthing") == std::string::npos); // choice head: no #modeb
    }
}

TEST_CASE("choice heads from multi-element rules and conditions", "[taskgen]") {
    Program enc = parse_program("{ pick(X) : allowed(X) ; drop(X) } :- dom(X).");
    Classification cls = classify(enc, sigs({{"dom", 1}, {"allowed", 1}}));
    HeadModes heads = derive_head_modes(enc, cls);
    std::vector<std::string> texts = mode_texts(heads.modes);
    REQUIRE(texts.size() == 2);
    // the element condition binds before the rule body does
    CHECK(texts[0] == "#modeh(pick(var(allowed))).");
    CHECK(texts[1] == "#modeh(drop(var(dom))).");
}

TEST_CASE("heuristic directives in the encoding contribute no body modes", "[taskgen]") {
    Program enc = parse_program("{ pick(X) } :- dom(X).\n"
                                "#heuristic hinted(X) : dom(X). [1,true]\n");
    Classification cls = classify(enc, sigs({{"dom", 1}}));
    HeadModes heads = derive_head_modes(enc, cls);
    std::vector<ModeDeclaration> body = derive_body_modes(enc, cls, heads.strict_types);
    REQUIRE(body.size() == 1);
    CHECK(body[0].predicate == "dom");
}

TEST_CASE("examples filter the answer set to head-mode predicates", "[taskgen]") {
    std::vector<ModeDeclaration> heads{
        {ModeDeclaration::Kind::Head, "cabinetTOthing",
         {{Placeholder::Kind::Var, "cabinetDomain"}, {Placeholder::Kind::Var, "thing"}}}};
    std::vector<Diagnostic> diagnostics;
    std::vector<ExampleSpec> examples =
        build_examples({instance("ex1", "cabinetDomainNew(1). thing(2).")},
                       {model("ex1", "cabinetTOthing(1,2) cabinetDomain(1) thing(2)")}, heads,
                       sigs({{"cabinetTOthing", 2}, {"cabinetDomain", 1}, {"thing", 1},
                             {"cabinetDomainNew", 1}}),
                       diagnostics);
    REQUIRE(examples.size() == 1);
    REQUIRE(examples[0].inclusions.size() == 1);
    CHECK(to_string(examples[0].inclusions[0]) == "cabinetTOthing(1,2)");
    CHECK(examples[0].exclusions.empty());
    CHECK(examples[0].context.size() == 2);
    CHECK(diagnostics.empty());
}

TEST_CASE("answer set without head atoms yields an empty inclusion set", "[taskgen]") {
    std::vector<ModeDeclaration> heads{
        {ModeDeclaration::Kind::Head, "pick", {{Placeholder::Kind::Var, "dom"}}}};
    std::vector<Diagnostic> diagnostics;
    std::vector<ExampleSpec> examples = build_examples(
        {instance("e", "dom(1).")}, {model("e", "dom(1)")}, heads, {}, diagnostics);
    REQUIRE(examples.size() == 1);
    CHECK(examples[0].inclusions.empty());
}

TEST_CASE("unknown predicates in the answer set warn", "[taskgen]") {
    std::vector<Diagnostic> diagnostics;
    build_examples({instance("e", "dom(1).")}, {model("e", "mystery(1)")}, {},
                   sigs({{"dom", 1}}), diagnostics);
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0].message.find("mystery") != std::string::npos);
}

TEST_CASE("mismatched instance and model ids fail", "[taskgen]") {
    std::vector<Diagnostic> diagnostics;
    CHECK_THROWS(build_examples({instance("a", "")}, {model("b", "")}, {}, {}, diagnostics));
    CHECK_THROWS(build_examples({instance("a", "")}, {}, {}, {}, diagnostics));
}

TEST_CASE("undefined placeholder types are a hard error", "[taskgen]") {
    HeadModes heads;
    heads.modes.push_back(
        {ModeDeclaration::Kind::Head, "pick", {{Placeholder::Kind::Var, "ghost"}}});
    CHECK_THROWS_WITH(assemble_task(heads, {}, {}, {}),
                      Catch::Matchers::ContainsSubstring("ghost"));
}

TEST_CASE("task serialization is ordered and self-contained", "[taskgen]") {
    Program enc = parse_program(read_file(kFixtures + "/toy/snippet.lp"));
    LearningTask task = generate_task(
        enc, {instance("ex1", read_file(kFixtures + "/toy/ex1.lp"))},
        {model("ex1", read_file(kFixtures + "/toy/ex1.model"))});
    CHECK(serialize_task(task) == read_file(kFixtures + "/golden/snippet_task.las"));
}

TEST_CASE("generation is idempotent", "[taskgen]") {
    Program enc = parse_program(read_file(kFixtures + "/toy/snippet.lp"));
    auto run = [&]() {
        return serialize_task(generate_task(
            enc, {instance("ex1", read_file(kFixtures + "/toy/ex1.lp"))},
            {model("ex1", read_file(kFixtures + "/toy/ex1.model"))}));
    };
    CHECK(run() == run());
}

TEST_CASE("empty example list keeps the modes", "[taskgen]") {
    Program enc = parse_program(read_file(kFixtures + "/toy/snippet.lp"));
    Classification cls = classify(enc, sigs({{"cabinetDomainNew", 1}, {"thing", 1}}));
    HeadModes heads = derive_head_modes(enc, cls);
    std::vector<ModeDeclaration> body = derive_body_modes(enc, cls, heads.strict_types);
    LearningTask task =
        assemble_task(heads, body, {}, sigs({{"cabinetDomainNew", 1}, {"thing", 1}}));
    std::string text = serialize_task(task);
    CHECK(text.find("#modeh") != std::string::npos);
    CHECK(text.find("#pos") == std::string::npos);
    LearningTask reparsed = parse_task(text);
    CHECK(reparsed.examples.empty());
    CHECK(reparsed.modes.size() == task.modes.size());
}

TEST_CASE("full fixture yields 16 head and 32 body declarations", "[taskgen][hrp]") {
    LearningTask task = hrp_task();
    CHECK(task.head_modes().size() == 16);
    CHECK(task.body_modes().size() == 32);
    std::vector<std::string> texts = mode_texts(task.modes);
    CHECK(std::find(texts.begin(), texts.end(),
                    "#modeh(cabinetTOthing(var(cabinetDomain), var(thing))).") != texts.end());
    CHECK(std::find(texts.begin(), texts.end(),
                    "#modeh(roomTOcabinet(var(roomDomain), var(cabinetDomain))).") != texts.end());
    CHECK(std::find(texts.begin(), texts.end(), "#modeb(thing(var(thing))).") != texts.end());
}

TEST_CASE("serialized tasks parse back", "[taskgen][hrp]") {
    LearningTask task = hrp_task();
    std::string text = serialize_task(task);
    LearningTask reparsed = parse_task(text);
    CHECK(reparsed.modes.size() == task.modes.size());
    CHECK(reparsed.examples.size() == task.examples.size());
    CHECK(reparsed.background.all_rules().size() == task.background.all_rules().size());
    for (std::size_t i = 0; i < task.examples.size(); ++i) {
        CHECK(reparsed.examples[i].id == task.examples[i].id);
        CHECK(reparsed.examples[i].inclusions == task.examples[i].inclusions);
        CHECK(reparsed.examples[i].context.size() == task.examples[i].context.size());
    }
    CHECK(serialize_task(reparsed) == text);
}

TEST_CASE("multi-line example blocks parse", "[taskgen]") {
    LearningTask task = parse_task("#modeh(pick(var(dom))).\n"
                                   "#modeb(dom(var(dom))).\n"
                                   "#pos(e1, {\n"
                                   "    pick(1)\n"
                                   "}, {}, {\n"
                                   "    dom(1). dom(2).  % context facts\n"
                                   "}).\n");
    REQUIRE(task.examples.size() == 1);
    CHECK(task.examples[0].id == "e1");
    REQUIRE(task.examples[0].inclusions.size() == 1);
    CHECK(to_string(task.examples[0].inclusions[0]) == "pick(1)");
    CHECK(task.examples[0].context.size() == 2);
}

TEST_CASE("const placeholders parse but are flagged downstream", "[taskgen]") {
    LearningTask task = parse_task("#modeh(pick(const(dom))).\n#modeb(dom(var(dom))).\n");
    REQUIRE(task.modes.size() == 2);
    CHECK(task.modes[0].placeholders[0].kind == Placeholder::Kind::Const);
}
