#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kgfuse/embedding.hpp"
#include "kgfuse/enrich_task.hpp"
#include "kgfuse/fusion.hpp"
#include "kgfuse/graphstore.hpp"
#include "kgfuse/text.hpp"

namespace kgfuse {

struct SearchConfig {
  std::vector<std::string> lead_ins{"how to", "how do i", "what is", "can i"};
  int radius = 2;
  std::size_t budget = 40;
};

struct ParsedQuery {
  std::optional<ActionObject> task;
  std::string phrase;  // text after the lead-in
  std::vector<Mention> mentions;
};

// UnparsableQuery when neither a task phrase nor a mention is found.
ParsedQuery parse_text_query(std::string_view q, const TextProcessor& tp, const SearchConfig& cfg);

struct RankedTask {
  std::string id;
  std::string relation;  // edge label, or "bestMatch" / "apiOverlap"
  double score = 0;
};

struct ApiHit {
  std::string id;
  std::string provenance;
};

struct ExtendedItem {
  std::string label;
  std::string src;
  std::string dst;
  std::vector<std::string> evidence;
};

struct GraphFragment {
  std::vector<std::string> anchors;
  std::vector<std::string> nodes;  // sorted
  std::vector<EdgeKey> edges;      // sorted, induced by `nodes`
};

struct SearchResult {
  std::string kind;  // "text" or "code"
  std::string query;
  std::optional<RankedTask> best_task;
  std::vector<RankedTask> related_tasks;  // score descending, then id
  std::vector<ApiHit> api_knowledge;
  std::vector<ExtendedItem> extended;
  GraphFragment fragment;
};

// Breadth-first over edges in both directions. The budget caps the total
// node count but never drops an anchor. UnknownNode for a missing anchor.
GraphFragment assemble_fragment(const KnowledgeGraph& g, const std::vector<std::string>& anchors, int radius,
                                std::size_t budget);

// Read-only search state over one snapshot and model; safe to share across
// threads once built.
class SearchEngine {
 public:
  SearchEngine(std::shared_ptr<const KnowledgeGraph> graph, std::shared_ptr<const EmbeddingModel> model,
               std::shared_ptr<const TextProcessor> tp, SearchConfig cfg = {});
  SearchEngine(const SearchEngine&) = delete;
  SearchEngine& operator=(const SearchEngine&) = delete;

  // EmptyGraph, UnparsableQuery.
  SearchResult search_text(std::string_view q) const;
  // NoApiFound when the code has no call that links to an API.
  SearchResult search_code(std::string_view code) const;
  GraphFragment fragment(const std::vector<std::string>& anchors, std::optional<int> radius = {},
                         std::optional<std::size_t> budget = {}) const;

  const KnowledgeGraph& graph() const { return *graph_; }
  const SearchConfig& config() const { return cfg_; }
  const TaskScorer& scorer() const { return scorer_; }

 private:
  std::vector<ExtendedItem> extended_for(const std::vector<std::string>& anchors) const;
  void finish(SearchResult& r) const;

  std::shared_ptr<const KnowledgeGraph> graph_;
  std::shared_ptr<const EmbeddingModel> model_;
  std::shared_ptr<const TextProcessor> tp_;
  SearchConfig cfg_;
  std::vector<ApiEntity> api_entities_;
  std::vector<const TaskEntity*> tasks_;  // sorted by id
  ApiPacketIndex index_;
  TypeTable types_;
  ApiAdjacency adjacency_;
  ApiLinker linker_;
  TaskScorer scorer_;
  std::map<std::string, std::set<std::string>> task_apis_;  // fused plus snippet APIs
};

nlohmann::json node_to_json(const Node& n);
nlohmann::json fragment_to_json(const GraphFragment& f, const KnowledgeGraph& g);
nlohmann::json result_to_json(const SearchResult& r, const KnowledgeGraph& g);
// Human-readable rendering used by the CLI.
std::string render_result(const SearchResult& r, const KnowledgeGraph& g);

}  // namespace kgfuse
