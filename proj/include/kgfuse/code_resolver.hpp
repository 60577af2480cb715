#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kgfuse/model.hpp"

namespace kgfuse {

// Known type names, simple -> qualified, usually taken from the API graph.
class TypeTable {
 public:
  void add(std::string_view qualified_name);
  // Explicit imports first, then wildcard imports, then a unique table
  // entry; otherwise the name is returned unchanged.
  std::string qualify(std::string_view simple, const std::vector<std::string>& imports = {}) const;

 private:
  std::map<std::string, std::set<std::string>, std::less<>> by_simple_;
  std::set<std::string, std::less<>> qualified_;
};

struct CallSite {
  std::string name;  // "add()"
  std::optional<std::string> receiver_type;  // as declared in the snippet, generics removed
  bool receiver_unknown = false;             // chained or unresolvable receiver
  bool constructor = false;
  int param_count = 0;
  std::size_t offset = 0;
};

// Lightweight resolver over a Java-like snippet: declarations build a
// variable -> type table; "var.m(..)" resolves through it, "Type.m(..)" is a
// static call, "new T(..)" a constructor; chained receivers stay unknown.
class CodeResolver {
 public:
  CodeResolver(std::string_view code, const std::set<std::string>& keywords);

  const std::vector<CallSite>& calls() const { return calls_; }
  const std::map<std::string, std::string>& variables() const { return vars_; }
  const std::vector<std::string>& imports() const { return imports_; }

  std::optional<std::string> variable_type(std::string_view var) const;

 private:
  std::vector<CallSite> calls_;
  std::map<std::string, std::string> vars_;
  std::vector<std::string> imports_;
};

// Number of top-level arguments in "(...)" (0 for empty parentheses);
// commas inside nested brackets and string or char literals are ignored.
int count_arguments(std::string_view parenthesized);

// Packet for one call site; the container is qualified through the table.
ApiPacket packet_for_call(const CallSite& call, const CodeResolver& code, const TypeTable& types);

// Packet for a prose mention, resolved against an optional snippet.
ApiPacket packet_for_mention(std::string_view mention, const CodeResolver* code, const TypeTable& types);

// All packets of a snippet in call order (keywords are never APIs).
std::vector<ApiPacket> packets_from_code(std::string_view code, const std::set<std::string>& keywords,
                                         const TypeTable& types);

}  // namespace kgfuse
