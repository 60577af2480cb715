#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kgfuse {

// <API name, container, parameter count>. Any slot may be absent on the query
// side; packets attached to graph entities always carry a name.
struct ApiPacket {
  std::optional<std::string> name;
  std::optional<std::string> container;
  std::optional<int> param_count;

  friend bool operator==(const ApiPacket&, const ApiPacket&) = default;
};

std::string to_string(const ApiPacket& p);

// Query-side match: the name must be present and equal; container and
// parameter count only constrain when present on the query.
bool match_api_packet(const ApiPacket& query, const ApiPacket& candidate);

enum class ApiKind { kPackage, kClass, kInterface, kException, kMethod, kConstructor, kField, kParameter };

std::string_view to_string(ApiKind kind);
std::optional<ApiKind> parse_api_kind(std::string_view s);

struct ApiEntity {
  std::string id;
  ApiKind kind = ApiKind::kClass;
  std::string qualified_name;
  std::string simple_name;
  std::optional<int> param_count;  // methods and constructors only
  std::optional<std::string> function_sentence;
  std::vector<std::string> directive_sentences;
  ApiPacket packet;

  friend bool operator==(const ApiEntity&, const ApiEntity&) = default;
};

std::string api_entity_id(std::string_view qualified_name);

enum class DeclKind { kContain, kExtend, kImplement, kThrow, kHasMethod, kHasParameter, kHasField, kHasConstructor };

std::string_view to_string(DeclKind kind);

struct DeclRelation {
  std::string src;
  std::string dst;
  DeclKind kind = DeclKind::kContain;

  friend bool operator==(const DeclRelation&, const DeclRelation&) = default;
};

struct TaskEntity {
  std::string id;
  std::string action;
  std::string object;
  std::string phrase;
  std::optional<std::string> notes;
  std::optional<std::string> code_snippet;
  std::optional<std::string> code_summary;
  std::vector<ApiPacket> api_packets;
  // Sentence each packet's mention came from; parallel to api_packets.
  std::vector<std::string> packet_contexts;
  std::string source;

  friend bool operator==(const TaskEntity&, const TaskEntity&) = default;
};

enum class TaskDeclKind { kParentChild, kSibling, kTemporal };

std::string_view to_string(TaskDeclKind kind);

struct TaskDeclRelation {
  std::string src;
  std::string dst;
  TaskDeclKind kind = TaskDeclKind::kParentChild;

  friend bool operator==(const TaskDeclRelation&, const TaskDeclRelation&) = default;
};

}  // namespace kgfuse
