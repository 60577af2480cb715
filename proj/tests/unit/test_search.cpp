#include <doctest.h>

#include <json.hpp>

#include "fixtures.hpp"
#include "kgfuse/error.hpp"
#include "kgfuse/search.hpp"
#include "kgfuse/service.hpp"

using namespace kgfuse;
using nlohmann::json;

namespace {

ApiEntity type(std::string qn) {
  ApiEntity e;
  e.qualified_name = std::move(qn);
  e.id = api_entity_id(e.qualified_name);
  e.kind = ApiKind::kInterface;
  e.simple_name = e.qualified_name.substr(e.qualified_name.rfind('.') + 1);
  e.packet = {e.simple_name, "java.util", std::nullopt};
  return e;
}

TaskEntity task(std::string id, std::string action, std::string object) {
  TaskEntity t;
  t.id = std::move(id);
  t.action = std::move(action);
  t.object = std::move(object);
  t.phrase = t.action + " " + t.object;
  t.source = "doc#s1";
  return t;
}

// List -extend-> Collection, List -hasMethod-> add(E), a task fused to add(E)
// and a second task aligned with the first.
std::shared_ptr<const KnowledgeGraph> small_graph() {
  auto g = std::make_shared<KnowledgeGraph>();
  g->put_node(make_node(type("java.util.List")));
  g->put_node(make_node(type("java.util.Collection")));
  ApiEntity add;
  add.qualified_name = "java.util.List.add(E)";
  add.id = api_entity_id(add.qualified_name);
  add.kind = ApiKind::kMethod;
  add.simple_name = "add()";
  add.param_count = 1;
  add.packet = {"add()", "java.util.List", 1};
  g->put_node(make_node(add));
  g->put_node(make_node(task("task:doc/add", "add", "an element")));
  g->put_node(make_node(task("task:doc/remove", "remove", "an element")));
  g->put_edge({"api:java.util.List", "api:java.util.Collection", "extend", {}});
  g->put_edge({"api:java.util.List", "api:java.util.List.add(E)", "hasMethod", {}});
  g->put_edge({"task:doc/add", "api:java.util.List.add(E)", "FusionLink", {}});
  g->put_edge({"task:doc/add", "task:doc/remove", "TaskAlign", {{"score", {"1.6"}}}});
  return g;
}

std::shared_ptr<const EmbeddingModel> small_model() {
  // Orthogonal "add" and "remove" so act scores are 1 and 0.
  return std::make_shared<const EmbeddingModel>(
      3, std::vector<std::string>{"add", "remove", "element"},
      std::vector<float>{1, 0, 0, 0, 1, 0, 0, 0, 1});
}

const SearchEngine& engine() {
  static SearchEngine e(small_graph(), small_model(),
                        std::make_shared<const TextProcessor>(testing::default_text_resources()));
  return e;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIoError;
}

ServiceResponse get(const std::string& path, std::map<std::string, std::string> params = {}) {
  return handle_request(engine(), {"GET", path, std::move(params), ""});
}

}  // namespace

TEST_CASE("fragment radius and budget") {
  const KnowledgeGraph& g = engine().graph();
  auto f0 = assemble_fragment(g, {"api:java.util.List"}, 0, 40);
  CHECK(f0.nodes == std::vector<std::string>{"api:java.util.List"});
  CHECK(f0.edges.empty());

  auto f1 = assemble_fragment(g, {"api:java.util.List"}, 1, 40);
  CHECK(f1.nodes == std::vector<std::string>{"api:java.util.Collection", "api:java.util.List",
                                             "api:java.util.List.add(E)"});
  CHECK(f1.edges.size() == 2);

  auto f2 = assemble_fragment(g, {"api:java.util.List"}, 2, 40);
  CHECK(f2.nodes.size() == 4);
  CHECK(std::count(f2.nodes.begin(), f2.nodes.end(), "task:doc/add") == 1);

  // Neighbors come in label order, so "extend" is taken before "hasMethod".
  auto tight = assemble_fragment(g, {"api:java.util.List"}, 2, 2);
  CHECK(tight.nodes == std::vector<std::string>{"api:java.util.Collection", "api:java.util.List"});

  auto anchors = assemble_fragment(g, {"task:doc/remove", "api:java.util.List", "task:doc/remove"}, 3, 1);
  CHECK(anchors.anchors == std::vector<std::string>{"task:doc/remove", "api:java.util.List"});
  CHECK(anchors.nodes.size() == 2);

  CHECK(code_of([&] { assemble_fragment(g, {"api:nope"}, 1, 10); }) == ErrorCode::kUnknownNode);
}

TEST_CASE("text query parsing") {
  const SearchConfig cfg;
  auto p = parse_text_query("How to add an element?", testing::text(), cfg);
  CHECK(p.phrase == "add an element");
  REQUIRE(p.task.has_value());
  CHECK(p.task->action == "add");
  CHECK(code_of([&] { parse_text_query("how to", testing::text(), cfg); }) == ErrorCode::kUnparsableQuery);
  CHECK(code_of([&] { parse_text_query("   ", testing::text(), cfg); }) == ErrorCode::kUnparsableQuery);
}

TEST_CASE("text search ranks by action") {
  SearchResult r = engine().search_text("how to add an element");
  REQUIRE(r.best_task.has_value());
  CHECK(r.best_task->id == "task:doc/add");
  CHECK(r.best_task->relation == "bestMatch");
  bool aligned = false;
  for (const auto& t : r.related_tasks) aligned |= t.id == "task:doc/remove" && t.relation == "TaskAlign";
  CHECK(aligned);
  bool fused = false;
  for (const auto& h : r.api_knowledge) fused |= h.id == "api:java.util.List.add(E)";
  CHECK(fused);
}

TEST_CASE("code search") {
  SearchResult r = engine().search_code("List<String> items = load();\nitems.add(\"x\");\n");
  bool linked = false;
  for (const auto& h : r.api_knowledge) linked |= h.id == "api:java.util.List.add(E)";
  CHECK(linked);
  REQUIRE(r.best_task.has_value());
  CHECK(r.best_task->id == "task:doc/add");
  CHECK(code_of([] { engine().search_code("int x = 1;"); }) == ErrorCode::kNoApiFound);
}

TEST_CASE("service routes") {
  auto health = get("/api/health");
  CHECK(health.status == 200);
  CHECK(json::parse(health.body)["nodes"] == 5);

  auto search = get("/api/search", {{"q", "how to add an element"}});
  CHECK(search.status == 200);
  CHECK(json::parse(search.body)["best_task"]["task"]["id"] == "task:doc/add");

  auto node = get("/api/node/api:java.util.List.add(E)");
  CHECK(node.status == 200);

  auto frag = get("/api/node/api:java.util.List/fragment", {{"radius", "0"}, {"budget", "5"}});
  CHECK(frag.status == 200);
  CHECK(json::parse(frag.body)["nodes"].size() == 1);

  auto code = handle_request(engine(), {"POST", "/api/search/code", {}, "int x = 1;"});
  CHECK(code.status == 400);
  CHECK(json::parse(code.body)["code"] == "NoApiFound");
}

TEST_CASE("service errors carry a code and message") {
  auto missing = get("/api/node/api:nope");
  CHECK(missing.status == 404);
  auto j = json::parse(missing.body);
  CHECK(j["code"] == "UnknownNode");
  CHECK(j["message"].is_string());

  CHECK(get("/api/node/api:nope/fragment").status == 404);
  CHECK(json::parse(get("/api/search").body)["code"] == "UnparsableQuery");
  CHECK(get("/api/search").status == 400);
  CHECK(get("/api/node/api:java.util.List/fragment", {{"radius", "-1"}}).status == 400);
  CHECK(get("/api/node/api:java.util.List/fragment", {{"budget", "x"}}).status == 400);
  CHECK(get("/api/elsewhere").status == 404);
  CHECK(handle_request(engine(), {"POST", "/api/health", {}, ""}).status == 404);
}
