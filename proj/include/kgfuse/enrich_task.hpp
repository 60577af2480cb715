#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgfuse/fusion.hpp"
#include "kgfuse/model.hpp"

namespace kgfuse {

struct EnrichConfig {
  double align_threshold = 1.5;
  double overlap_threshold = 0.6;
  // Only score pairs sharing a head-verb stem or a fused API.
  bool blocking = false;

  // Throws ConfigError unless align is in (0, 2] and overlap in (0, 1].
  void validate() const;
};

enum class TaskRelationKind { kTaskAlign, kTaskOverlap };

std::string_view to_string(TaskRelationKind k);  // "TaskAlign", "TaskOverlap"

struct TaskSemanticRelation {
  std::string a;  // a < b
  std::string b;
  TaskRelationKind kind = TaskRelationKind::kTaskAlign;
  double score = 0;
  double threshold_used = 0;
};

// Unordered API entity pairs joined by any declaration or semantic relation.
class ApiAdjacency {
 public:
  void add(const std::string& x, const std::string& y);
  bool connected(const std::string& x, const std::string& y) const;
  std::size_t size() const { return pairs_.size(); }

 private:
  std::set<std::pair<std::string, std::string>> pairs_;
};

struct TaskScorer {
  const ApiLinker* linker = nullptr;
  const ApiAdjacency* relations = nullptr;

  double act_score(std::string_view a1, std::string_view a2) const;
  // 1/0 by linked-API relatedness when both objects mention an API, else the
  // cosine of the object phrases.
  double obj_score(std::string_view o1, std::string_view o2) const;
  double align_score(const TaskEntity& t1, const TaskEntity& t2) const;
  // Linked APIs of the snippet, usage counts dropped. Throws NoCodeSnippet.
  std::set<std::string> code_api_set(const TaskEntity& t) const;
};

// (|A1∩A2|/|A1| + |A1∩A2|/|A2|) / 2. Throws EmptyApiSet.
double overlap_score(const std::set<std::string>& a1, const std::set<std::string>& a2);

std::optional<TaskSemanticRelation> task_align(const TaskEntity& t1, const TaskEntity& t2, const TaskScorer& s,
                                               const EnrichConfig& cfg);
std::optional<TaskSemanticRelation> task_overlap(const TaskEntity& t1, const TaskEntity& t2, const TaskScorer& s,
                                                 const EnrichConfig& cfg);

struct TaskEnrichResult {
  std::vector<TaskSemanticRelation> relations;  // sorted by (a, b, kind)
  std::size_t pairs_scored = 0;
  std::vector<std::string> diagnostics;
};

// All unordered task pairs (or the blocked subset). `fused` maps task id to
// its fused API ids and only matters for blocking.
TaskEnrichResult enrich_tasks(const std::vector<TaskEntity>& tasks, const TaskScorer& s, const EnrichConfig& cfg,
                              const std::map<std::string, std::set<std::string>>& fused = {});

}  // namespace kgfuse
