#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "kgfuse/enrich_api.hpp"
#include "kgfuse/error.hpp"

using namespace kgfuse;
using kgfuse::testing::text;

namespace {

const std::vector<SentencePattern>& shipped() {
  static auto p = parse_pattern_file(read_file(std::string(KGFUSE_DATA_DIR) + "/patterns.dsl"));
  return p;
}

struct Found {
  std::string category;
  std::string ae1;
  std::string ae2;
  friend bool operator<(const Found& a, const Found& b) {
    return std::tie(a.category, a.ae1, a.ae2) < std::tie(b.category, b.ae1, b.ae2);
  }
  friend bool operator==(const Found&, const Found&) = default;
};

std::set<Found> run(std::string_view text_in) {
  const auto& tp = text();
  auto s = tp.make_sentence(text_in);
  auto mentions = tp.detect_api_mentions(s);
  std::set<Found> out;
  for (const auto& m : match_patterns(s, mentions, shipped()))
    out.insert({std::string(to_string(m.category)), mentions[m.mention1].text, mentions[m.mention2].text});
  return out;
}

ErrorCode code_of(std::string_view spec) {
  try {
    compile_pattern(spec);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIoError;
}

}  // namespace

TEST_CASE("relation categories") {
  CHECK(to_string(RelationCategory::kBehaviorDifference) == "BehaviorDifference");
  CHECK(parse_relation_category("functionsimilarity") == RelationCategory::kFunctionSimilarity);
  CHECK(parse_relation_category("EC") == RelationCategory::kEfficiencyComparison);
  CHECK_FALSE(parse_relation_category("Friendship"));
  std::set<std::string_view> names;
  for (std::size_t i = 0; i < kRelationCategoryCount; ++i) names.insert(to_string(static_cast<RelationCategory>(i)));
  CHECK(names.size() == 9);
}

TEST_CASE("compile_pattern") {
  auto fs = compile_pattern("FunctionSimilarity :: AE1 [like/similar/same] AE2", "x");
  CHECK(fs.category == RelationCategory::kFunctionSimilarity);
  REQUIRE(fs.elements.size() == 3);
  CHECK(fs.elements[1].alternatives.size() == 3);

  auto fo = compile_pattern("FunctionOpposite :: AE1 opposite (ADP) AE2");
  REQUIRE(fo.elements.size() == 4);
  CHECK(fo.elements[2].kind == PatternElement::Kind::kOptional);
  CHECK(fo.elements[2].group[0].pos == Pos::kADP);

  auto fr = compile_pattern("FunctionReplace :: VB ((ADP) NP) AE1 [instead of/rather than/not] AE2");
  CHECK(fr.elements[1].group[0].kind == PatternElement::Kind::kOptional);
  CHECK(fr.elements[3].alternatives[0] == std::vector<std::string>{"instead", "of"});

  CHECK(code_of("FunctionSimilarity :: AE1 AE1") == ErrorCode::kPatternSyntaxError);
  CHECK(code_of("FunctionSimilarity :: AE1 like") == ErrorCode::kPatternSyntaxError);
  CHECK(code_of("FunctionSimilarity :: AE1 [like/] AE2") == ErrorCode::kPatternSyntaxError);
  CHECK(code_of("FunctionSimilarity :: AE1 [like AE2") == ErrorCode::kPatternSyntaxError);
  CHECK(code_of("FunctionSimilarity :: AE1 (like AE2") == ErrorCode::kPatternSyntaxError);
  CHECK(code_of("FunctionSimilarity :: AE1 like) AE2") == ErrorCode::kPatternSyntaxError);
  CHECK(code_of("FunctionSimilarity :: AE1 () AE2") == ErrorCode::kPatternSyntaxError);
  CHECK(code_of("FunctionSimilarity :: (AE1) like AE2") == ErrorCode::kPatternSyntaxError);
  CHECK(code_of("FunctionSimilarity :: AE1 XYZ AE2") == ErrorCode::kPatternSyntaxError);
  CHECK(code_of("Friendship :: AE1 like AE2") == ErrorCode::kPatternSyntaxError);
  CHECK(code_of("AE1 like AE2") == ErrorCode::kPatternSyntaxError);

  try {
    compile_pattern("FunctionSimilarity :: AE1 AE1");
    FAIL("expected an error");
  } catch (const Error& e) {
    // "AE1 AE1" starts at column 23; the second slot is at column 27.
    CHECK(std::string(e.what()).find("column 27") != std::string::npos);
  }
}

TEST_CASE("the shipped pattern file") {
  const auto& ps = shipped();
  CHECK(ps.size() == 23);
  std::set<RelationCategory> cats;
  std::set<std::string> ids;
  for (const auto& p : ps) {
    cats.insert(p.category);
    ids.insert(p.id);
  }
  CHECK(cats.size() == 9);
  CHECK(ids.size() == ps.size());
  CHECK(ids.count("BD5"));
  CHECK_THROWS_AS(parse_pattern_file("FunctionSimilarity :: AE1 [like AE2\n"), Error);
}

TEST_CASE("the nine table sentences yield exactly their category") {
  CHECK(run("Deque.pop() is similar to how the removeFirst() works") ==
        std::set<Found>{{"FunctionSimilarity", "Deque.pop()", "removeFirst()"}});
  CHECK(run("The floor() does the opposite of the ceiling(), meaning floor() returns the greatest element") ==
        std::set<Found>{{"FunctionOpposite", "floor()", "ceiling()"}});
  CHECK(run("The add() and offer() methods differ in how the behave if the Queue is full so no more elements can "
            "be added") == std::set<Found>{{"BehaviorDifference", "add()", "offer()"}});
  CHECK(run("if some of the operations in the transaction fail, you would call the rollback() instead of commit().") ==
        std::set<Found>{{"FunctionReplace", "rollback()", "commit()"}});
  CHECK(run("DataInputStream is often used together with DataOutputStream") ==
        std::set<Found>{{"FunctionCollaboration", "DataInputStream", "DataOutputStream"}});
  CHECK(run("Convert List to Set") == std::set<Found>{{"TypeConversion", "List", "Set"}});
  CHECK(run("remove() method will use equals() to decide") ==
        std::set<Found>{{"ImplementConstraint", "remove()", "equals()"}});
  CHECK(run("run() is executed by the thread after call start()") ==
        std::set<Found>{{"LogicConstraint", "run()", "start()"}});
  CHECK(run("HashMap is typically faster than TreeMap") ==
        std::set<Found>{{"EfficiencyComparison", "HashMap", "TreeMap"}});
}

TEST_CASE("one sentence can carry two relations") {
  CHECK(run("The ConcurrentHashMap is very similar to the java.util.HashTable class, except that ConcurrentHashMap "
            "offers better concurrency than HashTable does.") ==
        std::set<Found>{{"BehaviorDifference", "ConcurrentHashMap", "java.util.HashTable"},
                        {"EfficiencyComparison", "ConcurrentHashMap", "HashTable"}});
}

TEST_CASE("other patterns from the full pattern list") {
  CHECK(run("getAndAdd() does the same as addAndGet(), except getAndAdd() returns the old value") ==
        std::set<Found>{{"BehaviorDifference", "getAndAdd()", "addAndGet()"}});
  CHECK(run("listing all files in a directory via the list() or listFiles()") ==
        std::set<Found>{{"FunctionSimilarity", "list()", "listFiles()"}});
  CHECK(run("each element is removed from the List then pushed onto the Stack") ==
        std::set<Found>{{"LogicConstraint", "List", "Stack"}});
}

TEST_CASE("match details") {
  const auto& tp = text();
  SUBCASE("stem-matched literals") {
    CHECK(run("The add() and offer() methods are different in behaviour").count(
        {"BehaviorDifference", "add()", "offer()"}));
    CHECK(run("getFirst() works like peekFirst()").count({"FunctionSimilarity", "getFirst()", "peekFirst()"}));
  }
  SUBCASE("elements too far apart do not match") {
    CHECK(run("HashMap is in all of the typical and common cases faster than TreeMap").empty());
  }
  SUBCASE("fewer than two mentions never match") {
    auto s = tp.make_sentence("Returns the size.");
    CHECK(match_patterns(s, tp.detect_api_mentions(s), shipped()).empty());
  }
  SUBCASE("matched tokens are reported") {
    auto s = tp.make_sentence("Convert List to Set");
    auto ms = match_patterns(s, tp.detect_api_mentions(s), shipped());
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].pattern_id == "TC1");
    CHECK(ms[0].tokens == std::vector<std::size_t>{0, 1, 2, 3});
  }
}

TEST_CASE("select_relation_sentences keeps sentences with two or more mentions") {
  std::vector<TaskSentence> in = {
      {"d#s1", "run() is executed by the thread after call start()", {}, std::nullopt},
      {"d#s1", "Returns the size.", {}, std::nullopt},
      {"d#s2", "Call add(), remove() and clear() in order.", {}, std::nullopt},
  };
  auto out = select_relation_sentences(in, text());
  REQUIRE(out.size() == 2);
  CHECK(out[0].mentions.size() == 2);
  CHECK(out[1].mentions.size() == 3);
}

namespace {

ApiEntity ent(std::string qn, ApiKind kind, ApiPacket packet) {
  ApiEntity e;
  e.qualified_name = std::move(qn);
  e.id = api_entity_id(e.qualified_name);
  e.kind = kind;
  e.simple_name = *packet.name;
  e.packet = std::move(packet);
  return e;
}

}  // namespace

TEST_CASE("add_api_semantic_relations links both mentions") {
  std::vector<ApiEntity> es = {
      ent("java.lang.Thread.run()", ApiKind::kMethod, {"run()", "java.lang.Thread", 0}),
      ent("java.lang.Thread.start()", ApiKind::kMethod, {"start()", "java.lang.Thread", 0}),
      ent("java.util.List", ApiKind::kInterface, {"List", "java.util", std::nullopt}),
      ent("java.util.Set", ApiKind::kInterface, {"Set", "java.util", std::nullopt}),
  };
  ApiPacketIndex index(es);
  TypeTable types = type_table(es);
  EmbeddingModel model = train_embeddings(std::vector<std::string>{"convert list to set"}, text(), EmbeddingConfig{});
  ApiLinker linker{&index, &model, &text(), &types};

  std::vector<TaskSentence> in = {
      {"d#s1", "run() is executed by the thread after call start()", {}, std::nullopt},
      {"d#s2", "Convert List to Set", {}, std::nullopt},
      {"d#s3", "First convert List to Set", {}, std::nullopt},
      {"d#s4", "run() is executed by the thread after call dostop()", {}, std::nullopt},
      {"d#s5", "Convert List to List", {}, std::nullopt},
  };
  auto r = add_api_semantic_relations(select_relation_sentences(in, text()), shipped(), linker);
  REQUIRE(r.relations.size() == 2);
  CHECK(r.relations[0].src == "api:java.lang.Thread.run()");
  CHECK(r.relations[0].dst == "api:java.lang.Thread.start()");
  CHECK(r.relations[0].category == RelationCategory::kLogicConstraint);
  CHECK(r.relations[0].evidence ==
        std::vector<RelationEvidence>{{"run() is executed by the thread after call start()", "LC3"}});
  CHECK(r.relations[1].src == "api:java.util.List");
  CHECK(r.relations[1].dst == "api:java.util.Set");
  CHECK(r.relations[1].evidence.size() == 2);

  REQUIRE(r.diagnostics.size() == 2);
  CHECK(r.diagnostics[0] == "unlinked\tdostop()\tLC3\trun() is executed by the thread after call dostop()");
  CHECK(r.diagnostics[1] == "self\tapi:java.util.List\tTC1\tConvert List to List");

  // Every stored relation replays through its own pattern.
  for (const auto& rel : r.relations) {
    for (const auto& ev : rel.evidence) {
      auto s = text().make_sentence(ev.sentence);
      bool replayed = false;
      for (const auto& m : match_patterns(s, text().detect_api_mentions(s), shipped()))
        replayed = replayed || (m.pattern_id == ev.pattern_id && m.category == rel.category);
      CHECK(replayed);
    }
  }
}
