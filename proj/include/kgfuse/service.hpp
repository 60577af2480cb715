#pragma once

#include <map>
#include <memory>
#include <string>

#include "kgfuse/pipeline.hpp"
#include "kgfuse/search.hpp"

namespace kgfuse {

// A loaded snapshot plus everything needed to answer queries over it.
struct SearchIndex {
  std::shared_ptr<const KnowledgeGraph> graph;
  std::shared_ptr<const EmbeddingModel> model;
  std::shared_ptr<const TextProcessor> tp;
  std::unique_ptr<SearchEngine> engine;
};

// The model is read from "<snapshot>.vec", written next to the snapshot by
// the enrich stage. IoError when either file is missing.
SearchIndex open_index(const PipelineConfig& cfg, const std::string& snapshot_path);

std::string model_path_for(const std::string& snapshot_path);

struct ServiceRequest {
  std::string method;  // "GET" or "POST"
  std::string path;
  std::map<std::string, std::string> params;
  std::string body;
};

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

// Routes one request. No state is kept between calls.
ServiceResponse handle_request(const SearchEngine& engine, const ServiceRequest& req);

int http_status_for(ErrorCode code);

}  // namespace kgfuse
