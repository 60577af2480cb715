#include "kgfuse/model.hpp"

#include "kgfuse/util.hpp"

namespace kgfuse {

std::string to_string(const ApiPacket& p) {
  std::string out = "<";
  out += p.name.value_or("null");
  out += ", ";
  out += p.container.value_or("null");
  out += ", ";
  out += p.param_count ? std::to_string(*p.param_count) : "null";
  out += ">";
  return out;
}

bool match_api_packet(const ApiPacket& query, const ApiPacket& candidate) {
  if (!query.name || !candidate.name || *query.name != *candidate.name) return false;
  if (query.container) {
    if (!candidate.container || trim(*query.container) != trim(*candidate.container)) return false;
  }
  if (query.param_count) {
    if (!candidate.param_count || *query.param_count != *candidate.param_count) return false;
  }
  return true;
}

std::string_view to_string(ApiKind kind) {
  switch (kind) {
    case ApiKind::kPackage: return "Package";
    case ApiKind::kClass: return "Class";
    case ApiKind::kInterface: return "Interface";
    case ApiKind::kException: return "Exception";
    case ApiKind::kMethod: return "Method";
    case ApiKind::kConstructor: return "Constructor";
    case ApiKind::kField: return "Field";
    case ApiKind::kParameter: return "Parameter";
  }
  return "Class";
}

std::optional<ApiKind> parse_api_kind(std::string_view s) {
  const std::string l = to_lower(s);
  if (l == "package") return ApiKind::kPackage;
  if (l == "class") return ApiKind::kClass;
  if (l == "interface") return ApiKind::kInterface;
  if (l == "exception") return ApiKind::kException;
  if (l == "method") return ApiKind::kMethod;
  if (l == "constructor") return ApiKind::kConstructor;
  if (l == "field") return ApiKind::kField;
  if (l == "parameter") return ApiKind::kParameter;
  return std::nullopt;
}

std::string api_entity_id(std::string_view qualified_name) { return "api:" + std::string(qualified_name); }

std::string_view to_string(DeclKind kind) {
  switch (kind) {
    case DeclKind::kContain: return "contain";
    case DeclKind::kExtend: return "extend";
    case DeclKind::kImplement: return "implement";
    case DeclKind::kThrow: return "throw";
    case DeclKind::kHasMethod: return "hasMethod";
    case DeclKind::kHasParameter: return "hasParameter";
    case DeclKind::kHasField: return "hasField";
    case DeclKind::kHasConstructor: return "hasConstructor";
  }
  return "contain";
}

std::string_view to_string(TaskDeclKind kind) {
  switch (kind) {
    case TaskDeclKind::kParentChild: return "parentChild";
    case TaskDeclKind::kSibling: return "sibling";
    case TaskDeclKind::kTemporal: return "temporal";
  }
  return "parentChild";
}

}  // namespace kgfuse
