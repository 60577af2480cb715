#include <doctest.h>

#include "fixtures.hpp"

using namespace kgfuse;
using kgfuse::testing::java_types;
using kgfuse::testing::text;

namespace {

const std::set<std::string>& kw() { return text().resources().code_keywords; }

ApiPacket mention(std::string_view m, std::string_view code) {
  CodeResolver r(code, kw());
  return packet_for_mention(m, &r, java_types());
}

}  // namespace

TEST_CASE("count_arguments") {
  CHECK(count_arguments("()") == 0);
  CHECK(count_arguments("(  )") == 0);
  CHECK(count_arguments("(a)") == 1);
  CHECK(count_arguments("(\"a, b\", f(x, y), 'c')") == 3);
  CHECK(count_arguments("(new HashMap<String, Integer>(), x)") == 2);
}

TEST_CASE("declarations build the variable table") {
  CodeResolver r("List<String> list = new ArrayList<>();\nMap<String, List<Integer>> m = null;\n"
                 "for (String s : list) {}\nvoid f(Deque d, int n) {}",
                 kw());
  CHECK(r.variable_type("list") == "List");
  CHECK(r.variable_type("m") == "Map");
  CHECK(r.variable_type("s") == "String");
  CHECK(r.variable_type("d") == "Deque");
  CHECK_FALSE(r.variable_type("n"));
}

TEST_CASE("call sites") {
  CodeResolver r(
      "List list = new ArrayList<String>(10);\n"
      "list.add(\"element\");\n"
      "if (list.isEmpty()) { Collections.sort(list); }\n"
      "a.b().c(1, 2);\n"
      "// list.remove(0);\n"
      "String s = \"x.fake(1)\";\n"
      "helper(x);",
      kw());
  std::vector<std::string> names;
  for (const auto& c : r.calls()) names.push_back(c.name);
  CHECK(names == std::vector<std::string>{"ArrayList()", "add()", "isEmpty()", "sort()", "b()", "c()", "helper()"});
  const auto& c = r.calls();
  CHECK(c[0].constructor);
  CHECK(c[0].param_count == 1);
  CHECK(c[1].receiver_type == "List");
  CHECK(c[3].receiver_type == "Collections");
  CHECK(c[4].receiver_unknown);
  CHECK(c[5].receiver_unknown);
  CHECK(c[5].param_count == 2);
  CHECK_FALSE(c[6].receiver_type);
}

TEST_CASE("packets for mentions") {
  CHECK(mention("add()", "List list = new ArrayList(); list.add(\"element\");") ==
        ApiPacket{"add()", "java.util.List", 1});
  // The container comes from the type table, so it keeps the declared casing
  // rather than the variable's.
  CHECK(mention("put()", "SortedMap sortedMap = new TreeMap(); sortedMap.put(\"a\", \"one\");") ==
        ApiPacket{"put()", "java.util.SortedMap", 2});
  CHECK(packet_for_mention("parse()", nullptr, java_types()) == ApiPacket{"parse()", std::nullopt, std::nullopt});
  CHECK(packet_for_mention("Deque.pop()", nullptr, java_types()) == ApiPacket{"pop()", "java.util.Deque", std::nullopt});
  CHECK(packet_for_mention("java.util.HashTable", nullptr, java_types()) ==
        ApiPacket{"HashTable", "java.util", std::nullopt});
  CHECK(packet_for_mention("add(index, E)", nullptr, java_types()) == ApiPacket{"add()", std::nullopt, 2});
  CHECK(packet_for_mention("List", nullptr, java_types()) == ApiPacket{"List", std::nullopt, std::nullopt});
  CHECK(mention("it.hasNext()", "Iterator it = list.iterator(); while (it.hasNext()) {}") ==
        ApiPacket{"hasNext()", "Iterator", 0});
  CHECK(mention("executeQuery()", "Statement st = conn.createStatement();\nResultSet rs = st.executeQuery(sql);") ==
        ApiPacket{"executeQuery()", "java.sql.Statement", 1});
  CHECK(mention("next()", "conn.createStatement().executeQuery(sql).next();") ==
        ApiPacket{"next()", std::nullopt, 0});
}

TEST_CASE("type table qualification") {
  TypeTable t;
  t.add("java.util.List");
  t.add("java.awt.List");
  t.add("java.util.Map");
  CHECK(t.qualify("Map") == "java.util.Map");
  CHECK(t.qualify("List") == "List");
  CHECK(t.qualify("List", {"java.awt.List"}) == "java.awt.List");
  CHECK(t.qualify("List", {"java.util.*"}) == "java.util.List");
  CHECK(t.qualify("Map<K, V>") == "java.util.Map");
}

TEST_CASE("packets_from_code keeps keywords out") {
  auto ps = packets_from_code("while (it.hasNext()) { if (x) return list.get(0); }", text().resources().code_keywords,
                              java_types());
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].name == "hasNext()");
  CHECK(ps[1].name == "get()");
}
