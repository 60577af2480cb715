#include "kgfuse/service.hpp"

#include <filesystem>
#include <json.hpp>

#include "kgfuse/error.hpp"
#include "kgfuse/util.hpp"

namespace kgfuse {

namespace {

using nlohmann::json;

ServiceResponse error_response(ErrorCode code, const std::string& message) {
  return {http_status_for(code), json{{"code", std::string(to_string(code))}, {"message", message}}.dump()};
}

ServiceResponse ok(const json& j) { return {200, j.dump()}; }

std::optional<long> int_param(const ServiceRequest& req, const std::string& key) {
  auto it = req.params.find(key);
  if (it == req.params.end() || it->second.empty()) return std::nullopt;
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size() || v < 0)
    throw Error(ErrorCode::kConfigError, key + " must be a non-negative integer");
  return v;
}

ServiceResponse route(const SearchEngine& engine, const ServiceRequest& req) {
  const std::string& p = req.path;
  if (req.method == "GET" && p == "/api/health") {
    const auto& md = engine.graph().metadata;
    return ok({{"status", "ok"},
               {"nodes", engine.graph().nodes().size()},
               {"edges", engine.graph().edges().size()},
               {"corpus_hash", md.corpus_hash},
               {"config_hash", md.config_hash},
               {"tool_version", md.tool_version}});
  }
  if (req.method == "GET" && p == "/api/search") {
    auto it = req.params.find("q");
    const std::string q = it == req.params.end() ? "" : it->second;
    return ok(result_to_json(engine.search_text(q), engine.graph()));
  }
  if (req.method == "POST" && p == "/api/search/code") {
    return ok(result_to_json(engine.search_code(req.body), engine.graph()));
  }
  const std::string prefix = "/api/node/";
  if (req.method == "GET" && p.starts_with(prefix)) {
    std::string rest = p.substr(prefix.size());
    const std::string suffix = "/fragment";
    if (rest.ends_with(suffix)) {
      const std::string id = rest.substr(0, rest.size() - suffix.size());
      auto radius = int_param(req, "radius");
      auto budget = int_param(req, "budget");
      std::optional<int> r;
      std::optional<std::size_t> b;
      if (radius) r = static_cast<int>(*radius);
      if (budget) b = static_cast<std::size_t>(*budget);
      return ok(fragment_to_json(engine.fragment({id}, r, b), engine.graph()));
    }
    const Node* n = engine.graph().node(rest);
    if (!n) throw Error(ErrorCode::kUnknownNode, "no node " + rest);
    return ok(node_to_json(*n));
  }
  return {404, json{{"code", "NotFound"}, {"message", req.method + " " + p + " is not an endpoint"}}.dump()};
}

}  // namespace

std::string model_path_for(const std::string& snapshot_path) { return snapshot_path + ".vec"; }

SearchIndex open_index(const PipelineConfig& cfg, const std::string& snapshot_path) {
  namespace fs = std::filesystem;
  if (!fs::is_regular_file(snapshot_path)) throw Error(ErrorCode::kIoError, "snapshot not found: " + snapshot_path);
  const std::string model_path = model_path_for(snapshot_path);
  if (!fs::is_regular_file(model_path)) throw Error(ErrorCode::kIoError, "model not found: " + model_path);
  SearchIndex ix;
  ix.graph = std::make_shared<const KnowledgeGraph>(KnowledgeGraph::load(snapshot_path));
  ix.model = std::make_shared<const EmbeddingModel>(EmbeddingModel::load(model_path));
  ix.tp = make_text_processor(cfg);
  ix.engine = std::make_unique<SearchEngine>(ix.graph, ix.model, ix.tp, cfg.search);
  return ix;
}

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownNode: return 404;
    case ErrorCode::kUnparsableQuery:
    case ErrorCode::kNoApiFound:
    case ErrorCode::kConfigError: return 400;
    case ErrorCode::kEmptyGraph: return 409;
    default: return 500;
  }
}

ServiceResponse handle_request(const SearchEngine& engine, const ServiceRequest& req) {
  try {
    return route(engine, req);
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  } catch (const std::exception& e) {
    return {500, json{{"code", "Internal"}, {"message", e.what()}}.dump()};
  }
}

}  // namespace kgfuse
