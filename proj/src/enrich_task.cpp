#include "kgfuse/enrich_task.hpp"

#include <algorithm>

#include "kgfuse/code_resolver.hpp"
#include "kgfuse/error.hpp"
#include "kgfuse/stem.hpp"
#include "kgfuse/util.hpp"

namespace kgfuse {

namespace {

std::optional<std::string> link_object(std::string_view object, const ApiLinker& linker) {
  // Objects are fragments cut from a title, so a leading capitalised word is
  // not sentence-initial there; a neutral lead word keeps "List" a mention.
  const Sentence s = linker.tp->make_sentence("the " + std::string(object));
  const auto mentions = linker.tp->detect_api_mentions(s);
  if (mentions.empty()) return std::nullopt;
  auto r = linker.link(mentions.front().text, object);
  return r.api ? r.api : std::optional<std::string>("");
}

std::string head_stem(const TaskEntity& t) {
  const auto words = split(t.action, ' ');
  return words.empty() ? std::string() : stem(to_lower(words.front()));
}

}  // namespace

void EnrichConfig::validate() const {
  if (!(align_threshold > 0 && align_threshold <= 2))
    throw Error(ErrorCode::kConfigError, "align threshold must be in (0, 2]");
  if (!(overlap_threshold > 0 && overlap_threshold <= 1))
    throw Error(ErrorCode::kConfigError, "overlap threshold must be in (0, 1]");
}

std::string_view to_string(TaskRelationKind k) {
  return k == TaskRelationKind::kTaskAlign ? "TaskAlign" : "TaskOverlap";
}

void ApiAdjacency::add(const std::string& x, const std::string& y) {
  if (x < y) pairs_.emplace(x, y);
  else pairs_.emplace(y, x);
}

bool ApiAdjacency::connected(const std::string& x, const std::string& y) const {
  return pairs_.count(x < y ? std::make_pair(x, y) : std::make_pair(y, x)) > 0;
}

double TaskScorer::act_score(std::string_view a1, std::string_view a2) const {
  return sentence_similarity(a1, a2, *linker->model, *linker->tp);
}

double TaskScorer::obj_score(std::string_view o1, std::string_view o2) const {
  const auto e1 = link_object(o1, *linker);
  const auto e2 = link_object(o2, *linker);
  if (!e1 || !e2) return sentence_similarity(o1, o2, *linker->model, *linker->tp);
  // An empty id is a mention that failed to link.
  if (e1->empty() || e2->empty()) return 0;
  if (*e1 == *e2) return 1;
  return relations && relations->connected(*e1, *e2) ? 1 : 0;
}

double TaskScorer::align_score(const TaskEntity& t1, const TaskEntity& t2) const {
  return act_score(t1.action, t2.action) + obj_score(t1.object, t2.object);
}

std::set<std::string> TaskScorer::code_api_set(const TaskEntity& t) const {
  if (!t.code_snippet || trim(*t.code_snippet).empty())
    throw Error(ErrorCode::kNoCodeSnippet, "task " + t.id + " has no code snippet");
  static const TypeTable kEmpty;
  const auto packets =
      packets_from_code(*t.code_snippet, linker->tp->resources().code_keywords, linker->types ? *linker->types : kEmpty);
  std::string context = t.code_summary.value_or("");
  if (t.notes) context += (context.empty() ? "" : " ") + *t.notes;
  std::set<std::string> out;
  for (const auto& p : packets) {
    auto r = link_api_mention({p, context}, *linker->index, *linker->model, *linker->tp);
    if (r.api) out.insert(*r.api);
  }
  return out;
}

double overlap_score(const std::set<std::string>& a1, const std::set<std::string>& a2) {
  if (a1.empty() || a2.empty()) throw Error(ErrorCode::kEmptyApiSet, "task code uses no linked API");
  std::size_t common = 0;
  for (const auto& x : a1) common += a2.count(x);
  const double c = static_cast<double>(common);
  return (c / static_cast<double>(a1.size()) + c / static_cast<double>(a2.size())) / 2;
}

std::optional<TaskSemanticRelation> task_align(const TaskEntity& t1, const TaskEntity& t2, const TaskScorer& s,
                                               const EnrichConfig& cfg) {
  if (t1.id == t2.id) return std::nullopt;
  const double score = s.align_score(t1, t2);
  if (!(score > cfg.align_threshold)) return std::nullopt;
  const bool ordered = t1.id < t2.id;
  return TaskSemanticRelation{ordered ? t1.id : t2.id, ordered ? t2.id : t1.id, TaskRelationKind::kTaskAlign, score,
                              cfg.align_threshold};
}

std::optional<TaskSemanticRelation> task_overlap(const TaskEntity& t1, const TaskEntity& t2, const TaskScorer& s,
                                                 const EnrichConfig& cfg) {
  if (t1.id == t2.id) return std::nullopt;
  const double score = overlap_score(s.code_api_set(t1), s.code_api_set(t2));
  if (!(score > cfg.overlap_threshold)) return std::nullopt;
  const bool ordered = t1.id < t2.id;
  return TaskSemanticRelation{ordered ? t1.id : t2.id, ordered ? t2.id : t1.id, TaskRelationKind::kTaskOverlap, score,
                              cfg.overlap_threshold};
}

TaskEnrichResult enrich_tasks(const std::vector<TaskEntity>& tasks, const TaskScorer& s, const EnrichConfig& cfg,
                              const std::map<std::string, std::set<std::string>>& fused) {
  TaskEnrichResult r;
  std::vector<const TaskEntity*> order;
  for (const auto& t : tasks) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const TaskEntity* a, const TaskEntity* b) { return a->id < b->id; });

  // API sets are computed once; tasks without one take no part in overlap.
  std::vector<std::optional<std::set<std::string>>> api_sets(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!order[i]->code_snippet) continue;
    auto set = s.code_api_set(*order[i]);
    if (set.empty()) r.diagnostics.push_back("empty_api_set\t" + order[i]->id);
    else api_sets[i] = std::move(set);
  }

  static const std::set<std::string> kNone;
  auto fused_of = [&](const std::string& id) -> const std::set<std::string>& {
    auto it = fused.find(id);
    return it == fused.end() ? kNone : it->second;
  };

  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const TaskEntity& a = *order[i];
      const TaskEntity& b = *order[j];
      if (cfg.blocking && head_stem(a) != head_stem(b)) {
        const auto& fa = fused_of(a.id);
        const auto& fb = fused_of(b.id);
        if (std::none_of(fa.begin(), fa.end(), [&](const std::string& x) { return fb.count(x) > 0; })) continue;
      }
      ++r.pairs_scored;
      const double align = s.align_score(a, b);
      if (align > cfg.align_threshold)
        r.relations.push_back({a.id, b.id, TaskRelationKind::kTaskAlign, align, cfg.align_threshold});
      if (api_sets[i] && api_sets[j]) {
        const double ov = overlap_score(*api_sets[i], *api_sets[j]);
        if (ov > cfg.overlap_threshold)
          r.relations.push_back({a.id, b.id, TaskRelationKind::kTaskOverlap, ov, cfg.overlap_threshold});
      }
    }
  }
  return r;
}

}  // namespace kgfuse
