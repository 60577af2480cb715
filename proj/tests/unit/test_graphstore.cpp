#include <doctest.h>

#include "kgfuse/error.hpp"
#include "kgfuse/graphstore.hpp"

using namespace kgfuse;

namespace {

ApiEntity api(std::string qn, ApiKind kind = ApiKind::kInterface) {
  ApiEntity e;
  e.qualified_name = std::move(qn);
  e.id = api_entity_id(e.qualified_name);
  e.kind = kind;
  e.simple_name = e.qualified_name.substr(e.qualified_name.rfind('.') + 1);
  e.packet = {e.simple_name, "java.util", std::nullopt};
  return e;
}

TaskEntity task(std::string id) {
  TaskEntity t;
  t.id = std::move(id);
  t.action = "add";
  t.object = "an element";
  t.phrase = "add an element";
  t.source = "doc#s1";
  return t;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIoError;
}

KnowledgeGraph sample() {
  KnowledgeGraph g;
  g.metadata = {"c0ffee", "beef", "0.1.0"};
  ApiEntity list = api("java.util.List");
  list.function_sentence = "An ordered collection\twith tabs, commas; = and ~ and | and %.";
  list.directive_sentences = {"Use it only if you must.", "", "Second\nline"};
  g.put_node(make_node(list));
  g.put_node(make_node(api("java.util.Collection")));
  ApiEntity add = api("java.util.List.add(E)", ApiKind::kMethod);
  add.simple_name = "add()";
  add.param_count = 1;
  add.packet = {"add()", "java.util.List", 1};
  g.put_node(make_node(add));
  TaskEntity t = task("task:doc/add-an-element");
  t.notes = "";
  t.code_snippet = "List<String> l = new ArrayList<>();\n\tl.add(\"x\");";
  t.api_packets = {{"add()", std::nullopt, std::nullopt}, {"add()", "java.util.List", 1}};
  t.packet_contexts = {"Call add().", "Then add(x, y)"};
  g.put_node(make_node(t));
  g.put_node(make_node(task("task:doc/b")));
  g.put_edge({"api:java.util.List", "api:java.util.Collection", "extend", {}});
  g.put_edge({"api:java.util.List", "api:java.util.List.add(E)", "hasMethod", {}});
  g.put_edge({"task:doc/add-an-element", "api:java.util.List.add(E)", "FusionLink",
              {{"via_packet", {"<add(), null, null>"}}, {"disambiguated", {"false"}}}});
  g.put_edge({"task:doc/b", "task:doc/add-an-element", "TaskAlign", {{"score", {"1.75"}}}});
  return g;
}

}  // namespace

TEST_CASE("put_node") {
  KnowledgeGraph g;
  g.put_node(make_node(api("java.util.List")));
  g.put_node(make_node(api("java.util.List")));
  CHECK(g.nodes().size() == 1);
  ApiEntity other = api("java.util.List");
  other.function_sentence = "different";
  CHECK(code_of([&] { g.put_node(make_node(other)); }) == ErrorCode::kIdCollision);
  CHECK(g.node("api:java.util.List")->family() == NodeFamily::kApi);
  CHECK(g.node("nope") == nullptr);
}

TEST_CASE("put_edge") {
  KnowledgeGraph g;
  g.put_node(make_node(api("java.util.List")));
  g.put_node(make_node(api("java.util.Collection")));
  CHECK(code_of([&] { g.put_edge({"api:java.util.List", "api:missing", "extend", {}}); }) == ErrorCode::kDanglingEdge);
  CHECK(code_of([&] { g.put_edge({"api:java.util.List", "api:java.util.Collection", "likes", {}}); }) ==
        ErrorCode::kUnknownLabel);

  g.put_edge({"api:java.util.List", "api:java.util.Collection", "FunctionSimilarity",
              {{"evidence", {"first sentence"}}, {"pattern", {"FS1"}}}});
  g.put_edge({"api:java.util.List", "api:java.util.Collection", "FunctionSimilarity",
              {{"evidence", {"second sentence"}}, {"pattern", {"FS1"}}}});
  REQUIRE(g.edges().size() == 1);
  const Edge* e = g.edge("api:java.util.List", "api:java.util.Collection", "FunctionSimilarity");
  REQUIRE(e);
  CHECK(e->attrs.at("evidence") == std::set<std::string>{"first sentence", "second sentence"});
  CHECK(e->attrs.at("pattern") == std::set<std::string>{"FS1"});

  // Symmetric labels are stored once, smaller id first.
  g.put_node(make_node(task("task:z")));
  g.put_node(make_node(task("task:a")));
  g.put_edge({"task:z", "task:a", "sibling", {}});
  g.put_edge({"task:a", "task:z", "sibling", {}});
  CHECK(g.edges().size() == 2);
  CHECK(g.edge("task:a", "task:z", "sibling"));
  CHECK(g.edge("task:z", "task:a", "sibling"));
  CHECK(g.edges().count({"task:a", "task:z", "sibling"}) == 1);

  CHECK(edge_labels().size() == 23);
}

TEST_CASE("neighbors") {
  auto g = sample();
  auto out = g.neighbors("api:java.util.List", std::nullopt, Direction::kOut);
  REQUIRE(out.size() == 2);
  CHECK(out[0].edge->label == "extend");
  CHECK(out[1].edge->label == "hasMethod");
  CHECK(g.neighbors("api:java.util.List", std::set<std::string>{"extend"}, Direction::kOut).size() == 1);
  CHECK(g.neighbors("api:java.util.List", std::nullopt, Direction::kIn).empty());

  // A symmetric relation is visible from both endpoints.
  auto a = g.neighbors("task:doc/add-an-element", std::set<std::string>{"TaskAlign"});
  auto b = g.neighbors("task:doc/b", std::set<std::string>{"TaskAlign"});
  REQUIRE(a.size() == 1);
  REQUIRE(b.size() == 1);
  CHECK(a[0].node->id == "task:doc/b");
  CHECK(b[0].node->id == "task:doc/add-an-element");

  auto both = g.neighbors("api:java.util.List.add(E)");
  REQUIRE(both.size() == 2);
  CHECK(both[0].edge->label == "FusionLink");
  CHECK_FALSE(both[0].outgoing);
  CHECK(both[1].edge->label == "hasMethod");

  CHECK(code_of([&] { g.neighbors("api:nope"); }) == ErrorCode::kUnknownNode);
}

TEST_CASE("snapshot round trip") {
  auto g = sample();
  const std::string text = g.serialize();
  auto back = KnowledgeGraph::parse(text);
  CHECK(back == g);
  CHECK(back.serialize() == text);
  CHECK(text.rfind("KGSNAP\t1\tcorpus=c0ffee\tconfig=beef\ttool=0.1.0\tnodes=5\tedges=4\n", 0) == 0);

  // Canonical: insertion order does not matter.
  KnowledgeGraph h;
  h.metadata = g.metadata;
  std::vector<Node> nodes;
  for (const auto& [id, n] : g.nodes()) nodes.push_back(n);
  std::reverse(nodes.begin(), nodes.end());
  for (auto& n : nodes) h.put_node(n);
  std::vector<Edge> edges;
  for (const auto& [k, e] : g.edges()) edges.push_back(e);
  std::reverse(edges.begin(), edges.end());
  for (auto& e : edges) h.put_edge(e);
  CHECK(h.serialize() == text);

  // Every record is one line.
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 1 + 5 + 4);

  KnowledgeGraph empty;
  CHECK(KnowledgeGraph::parse(empty.serialize()) == empty);
  auto stats = graph_stats(empty);
  CHECK(stats.api_nodes == 0);
  CHECK(stats.edges_by_label.size() == 23);
  for (const auto& [l, n] : stats.edges_by_label) CHECK(n == 0);

  auto st = graph_stats(g);
  CHECK(st.api_nodes == 3);
  CHECK(st.task_nodes == 2);
  CHECK(st.edges_by_label.at("FusionLink") == 1);
}

TEST_CASE("corrupt snapshots") {
  const std::string text = sample().serialize();
  auto code = [](std::string_view s) { return code_of([&] { KnowledgeGraph::parse(s); }); };

  CHECK(code(text.substr(0, text.size() - 1)) == ErrorCode::kCorruptSnapshot);
  CHECK(code(text.substr(0, text.size() / 2)) == ErrorCode::kCorruptSnapshot);
  // Whole lines missing: the header counts catch it.
  const auto cut = text.rfind('\n', text.size() - 2);
  CHECK(code(text.substr(0, cut + 1)) == ErrorCode::kCorruptSnapshot);
  CHECK(code("") == ErrorCode::kCorruptSnapshot);
  CHECK(code("hello\n") == ErrorCode::kCorruptSnapshot);

  std::string v2 = text;
  v2.replace(7, 1, "2");
  CHECK(code(v2) == ErrorCode::kVersionMismatch);

  std::string bad = text;
  bad.replace(bad.find("\nE\t") + 1, 1, "X");
  try {
    KnowledgeGraph::parse(bad);
    FAIL("expected CorruptSnapshot");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCorruptSnapshot);
    CHECK(std::string(e.what()).find("line 7") != std::string::npos);
  }

  std::string dangling = text;
  dangling.insert(dangling.size(), "E\tapi:a\tapi:b\textend\t\n");
  CHECK(code(dangling) == ErrorCode::kCorruptSnapshot);
}
