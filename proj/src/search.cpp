#include "kgfuse/search.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "kgfuse/code_resolver.hpp"
#include "kgfuse/error.hpp"
#include "kgfuse/util.hpp"

namespace kgfuse {

namespace {

const std::set<std::string> kTaskLabels{"parentChild", "sibling", "temporal", "TaskAlign", "TaskOverlap"};

const std::set<std::string> kSemanticLabels{
    "FunctionSimilarity", "FunctionOpposite", "BehaviorDifference", "FunctionReplace",    "FunctionCollaboration",
    "TypeConversion",     "ImplementConstraint", "LogicConstraint", "EfficiencyComparison", "TaskAlign",
    "TaskOverlap"};

bool ranked_before(const RankedTask& a, const RankedTask& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.id != b.id) return a.id < b.id;
  return a.relation < b.relation;
}

void add_hit(std::vector<ApiHit>& hits, const std::string& id, std::string provenance) {
  for (const auto& h : hits)
    if (h.id == id) return;
  hits.push_back({id, std::move(provenance)});
}

std::string display_name(const Node& n) { return n.api() ? n.api()->qualified_name : n.task()->phrase; }

nlohmann::json packet_json(const ApiPacket& p) {
  nlohmann::json j;
  j["name"] = p.name ? nlohmann::json(*p.name) : nlohmann::json(nullptr);
  j["container"] = p.container ? nlohmann::json(*p.container) : nlohmann::json(nullptr);
  j["param_count"] = p.param_count ? nlohmann::json(*p.param_count) : nlohmann::json(nullptr);
  return j;
}

template <typename T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

ParsedQuery parse_text_query(std::string_view q, const TextProcessor& tp, const SearchConfig& cfg) {
  std::string body = trim(q);
  while (!body.empty() && body.back() == '?') body.pop_back();
  const std::string lower = to_lower(body);
  for (const auto& lead : cfg.lead_ins) {
    const std::string l = to_lower(lead);
    if (lower.rfind(l, 0) == 0 && (lower.size() == l.size() || lower[l.size()] == ' ')) {
      body = trim(std::string_view(body).substr(l.size()));
      break;
    }
  }
  ParsedQuery p;
  p.phrase = body;
  if (body.empty()) throw Error(ErrorCode::kUnparsableQuery, "empty query");
  const Sentence s = tp.make_sentence(body);
  for (const auto& vp : tp.extract_verb_phrases(s)) {
    try {
      p.task = chunk_action_object(vp);
      break;
    } catch (const Error&) {
    }
  }
  p.mentions = tp.detect_api_mentions(s);
  if (!p.task && p.mentions.empty())
    throw Error(ErrorCode::kUnparsableQuery, "no task phrase or API mention in \"" + std::string(q) + "\"");
  return p;
}

GraphFragment assemble_fragment(const KnowledgeGraph& g, const std::vector<std::string>& anchors, int radius,
                                std::size_t budget) {
  GraphFragment f;
  std::set<std::string> selected;
  for (const auto& a : anchors) {
    if (!g.node(a)) throw Error(ErrorCode::kUnknownNode, "unknown node " + a);
    if (selected.insert(a).second) f.anchors.push_back(a);
  }
  std::vector<std::string> frontier = f.anchors;
  bool full = false;
  for (int depth = 0; depth < radius && !full; ++depth) {
    std::vector<std::string> next;
    for (const auto& id : frontier) {
      for (const auto& nb : g.neighbors(id)) {
        if (selected.count(nb.node->id)) continue;
        if (selected.size() >= budget) {
          full = true;
          break;
        }
        selected.insert(nb.node->id);
        next.push_back(nb.node->id);
      }
      if (full) break;
    }
    frontier = std::move(next);
  }
  f.nodes.assign(selected.begin(), selected.end());
  for (const auto& id : f.nodes)
    for (const auto& nb : g.neighbors(id, std::nullopt, Direction::kOut))
      if (selected.count(nb.node->id)) f.edges.emplace_back(nb.edge->src, nb.edge->dst, nb.edge->label);
  std::sort(f.edges.begin(), f.edges.end());
  return f;
}

SearchEngine::SearchEngine(std::shared_ptr<const KnowledgeGraph> graph, std::shared_ptr<const EmbeddingModel> model,
                           std::shared_ptr<const TextProcessor> tp, SearchConfig cfg)
    : graph_(std::move(graph)), model_(std::move(model)), tp_(std::move(tp)), cfg_(std::move(cfg)) {
  for (const auto& [id, n] : graph_->nodes()) {
    if (const ApiEntity* e = n.api()) api_entities_.push_back(*e);
    if (const TaskEntity* t = n.task()) tasks_.push_back(t);
  }
  index_ = ApiPacketIndex(api_entities_);
  types_ = type_table(api_entities_);
  for (const auto& [key, e] : graph_->edges()) {
    const Node* a = graph_->node(e.src);
    const Node* b = graph_->node(e.dst);
    if (a->api() && b->api()) adjacency_.add(e.src, e.dst);
    if (e.label == "FusionLink") task_apis_[e.src].insert(e.dst);
  }
  linker_ = ApiLinker{&index_, model_.get(), tp_.get(), &types_};
  scorer_ = TaskScorer{&linker_, &adjacency_};
  for (const TaskEntity* t : tasks_) {
    if (!t->code_snippet) continue;
    for (const auto& id : scorer_.code_api_set(*t)) task_apis_[t->id].insert(id);
  }
}

std::vector<ExtendedItem> SearchEngine::extended_for(const std::vector<std::string>& anchors) const {
  std::map<EdgeKey, ExtendedItem> items;
  for (const auto& a : anchors) {
    for (const auto& nb : graph_->neighbors(a, kSemanticLabels)) {
      const Edge& e = *nb.edge;
      EdgeKey key{e.src, e.dst, e.label};
      if (items.count(key)) continue;
      ExtendedItem it{e.label, e.src, e.dst, {}};
      if (auto ev = e.attrs.find("evidence"); ev != e.attrs.end()) it.evidence.assign(ev->second.begin(), ev->second.end());
      items.emplace(std::move(key), std::move(it));
    }
  }
  std::vector<ExtendedItem> out;
  for (auto& [k, v] : items) out.push_back(std::move(v));
  return out;
}

void SearchEngine::finish(SearchResult& r) const {
  std::vector<std::string> anchors;
  if (r.best_task) anchors.push_back(r.best_task->id);
  for (const auto& h : r.api_knowledge) anchors.push_back(h.id);
  r.extended = extended_for(anchors);
  r.fragment = assemble_fragment(*graph_, anchors, cfg_.radius, cfg_.budget);
}

SearchResult SearchEngine::search_text(std::string_view q) const {
  if (graph_->nodes().empty()) throw Error(ErrorCode::kEmptyGraph, "the snapshot has no nodes");
  const ParsedQuery p = parse_text_query(q, *tp_, cfg_);
  SearchResult r;
  r.kind = "text";
  r.query = std::string(q);

  if (p.task && !tasks_.empty()) {
    std::vector<RankedTask> ranked;
    for (const TaskEntity* t : tasks_) {
      const double s = scorer_.act_score(p.task->action, t->action) + scorer_.obj_score(p.task->object, t->object);
      ranked.push_back({t->id, "bestMatch", s});
    }
    std::sort(ranked.begin(), ranked.end(), ranked_before);
    r.best_task = ranked.front();

    for (const auto& nb : graph_->neighbors(r.best_task->id, kTaskLabels)) {
      if (!nb.node->task()) continue;
      double score = 1.0;
      if (auto s = nb.edge->attrs.find("score"); s != nb.edge->attrs.end() && !s->second.empty())
        score = std::stod(*s->second.begin());
      r.related_tasks.push_back({nb.node->id, nb.edge->label, score});
    }
    std::sort(r.related_tasks.begin(), r.related_tasks.end(), ranked_before);
  }

  for (const auto& m : p.mentions) {
    auto link = linker_.link(m.text, p.phrase);
    if (link.api) add_hit(r.api_knowledge, *link.api, "mention " + m.text);
  }
  if (r.best_task) {
    for (const auto& nb : graph_->neighbors(r.best_task->id, std::set<std::string>{"FusionLink"}, Direction::kOut))
      add_hit(r.api_knowledge, nb.node->id, "fused to " + r.best_task->id);
  }
  finish(r);
  return r;
}

SearchResult SearchEngine::search_code(std::string_view code) const {
  if (graph_->nodes().empty()) throw Error(ErrorCode::kEmptyGraph, "the snapshot has no nodes");
  SearchResult r;
  r.kind = "code";
  r.query = std::string(code);
  const auto packets = packets_from_code(code, tp_->resources().code_keywords, types_);
  std::set<std::string> query_apis;
  for (const auto& pk : packets) {
    auto link = link_api_mention({pk, ""}, index_, *model_, *tp_);
    if (!link.api) continue;
    query_apis.insert(*link.api);
    add_hit(r.api_knowledge, *link.api, "call " + to_string(pk));
  }
  if (query_apis.empty()) throw Error(ErrorCode::kNoApiFound, "no API call in the code links to a known API");

  std::vector<RankedTask> ranked;
  for (const auto& [task, apis] : task_apis_) {
    if (apis.empty() || std::none_of(apis.begin(), apis.end(), [&](const auto& a) { return query_apis.count(a); }))
      continue;
    ranked.push_back({task, "apiOverlap", overlap_score(query_apis, apis)});
  }
  std::sort(ranked.begin(), ranked.end(), ranked_before);
  if (!ranked.empty()) {
    r.best_task = ranked.front();
    r.best_task->relation = "bestMatch";
    r.related_tasks.assign(ranked.begin() + 1, ranked.end());
  }
  finish(r);
  return r;
}

GraphFragment SearchEngine::fragment(const std::vector<std::string>& anchors, std::optional<int> radius,
                                     std::optional<std::size_t> budget) const {
  return assemble_fragment(*graph_, anchors, radius.value_or(cfg_.radius), budget.value_or(cfg_.budget));
}

nlohmann::json node_to_json(const Node& n) {
  nlohmann::json j;
  j["id"] = n.id;
  j["family"] = std::string(to_string(n.family()));
  if (const ApiEntity* e = n.api()) {
    j["kind"] = std::string(to_string(e->kind));
    j["qualified_name"] = e->qualified_name;
    j["simple_name"] = e->simple_name;
    j["param_count"] = opt_json(e->param_count);
    j["function_sentence"] = opt_json(e->function_sentence);
    j["directive_sentences"] = e->directive_sentences;
    j["packet"] = packet_json(e->packet);
  } else {
    const TaskEntity& t = *n.task();
    j["action"] = t.action;
    j["object"] = t.object;
    j["phrase"] = t.phrase;
    j["notes"] = opt_json(t.notes);
    j["code_snippet"] = opt_json(t.code_snippet);
    j["code_summary"] = opt_json(t.code_summary);
    j["source"] = t.source;
    j["api_packets"] = nlohmann::json::array();
    for (const auto& p : t.api_packets) j["api_packets"].push_back(packet_json(p));
  }
  return j;
}

nlohmann::json fragment_to_json(const GraphFragment& f, const KnowledgeGraph& g) {
  nlohmann::json j;
  j["anchors"] = f.anchors;
  j["nodes"] = nlohmann::json::array();
  for (const auto& id : f.nodes) {
    const Node& n = *g.node(id);
    j["nodes"].push_back({{"id", id}, {"family", std::string(to_string(n.family()))}, {"name", display_name(n)}});
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& [src, dst, label] : f.edges) j["edges"].push_back({{"src", src}, {"dst", dst}, {"label", label}});
  return j;
}

nlohmann::json result_to_json(const SearchResult& r, const KnowledgeGraph& g) {
  nlohmann::json j;
  j["kind"] = r.kind;
  j["query"] = r.query;
  if (r.best_task) j["best_task"] = {{"task", node_to_json(*g.node(r.best_task->id))}, {"score", r.best_task->score}};
  else j["best_task"] = nullptr;
  j["related_tasks"] = nlohmann::json::array();
  for (const auto& t : r.related_tasks)
    j["related_tasks"].push_back({{"task", node_to_json(*g.node(t.id))}, {"relation", t.relation}, {"score", t.score}});
  j["api_knowledge"] = nlohmann::json::array();
  for (const auto& h : r.api_knowledge)
    j["api_knowledge"].push_back({{"api", node_to_json(*g.node(h.id))}, {"provenance", h.provenance}});
  j["extended"] = nlohmann::json::array();
  for (const auto& x : r.extended) {
    j["extended"].push_back({{"label", x.label},
                             {"src", x.src},
                             {"dst", x.dst},
                             {"src_name", display_name(*g.node(x.src))},
                             {"dst_name", display_name(*g.node(x.dst))},
                             {"evidence", x.evidence}});
  }
  j["fragment"] = fragment_to_json(r.fragment, g);
  return j;
}

namespace {
std::string short_score(double v) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(3);
  o << v;
  return o.str();
}
}  // namespace

std::string render_result(const SearchResult& r, const KnowledgeGraph& g) {
  std::ostringstream out;
  out << "Query (" << r.kind << "): " << r.query << "\n\n";
  if (r.best_task) {
    const TaskEntity& t = *g.node(r.best_task->id)->task();
    out << "Best matched task: " << t.phrase << "  [" << t.id << ", score " << short_score(r.best_task->score)
        << "]\n";
    if (t.notes) out << "  notes: " << *t.notes << "\n";
    if (t.code_summary) out << "  summary: " << *t.code_summary << "\n";
    if (t.code_snippet) {
      out << "  code:\n";
      for (const auto& line : split(*t.code_snippet, '\n')) out << "    " << line << "\n";
    }
  } else {
    out << "Best matched task: none\n";
  }
  if (!r.related_tasks.empty()) {
    out << "\nRelated tasks:\n";
    for (const auto& t : r.related_tasks)
      out << "  " << g.node(t.id)->task()->phrase << "  [" << t.relation << ", " << short_score(t.score) << "]\n";
  }
  if (!r.api_knowledge.empty()) {
    out << "\nAPI knowledge:\n";
    for (const auto& h : r.api_knowledge) {
      const ApiEntity& e = *g.node(h.id)->api();
      out << "  " << e.qualified_name << " (" << to_string(e.kind) << ", " << h.provenance << ")\n";
      if (e.function_sentence) out << "    " << *e.function_sentence << "\n";
      for (const auto& d : e.directive_sentences) out << "    ! " << d << "\n";
    }
  }
  if (!r.extended.empty()) {
    out << "\nExtended knowledge:\n";
    for (const auto& x : r.extended) {
      out << "  " << display_name(*g.node(x.src)) << " --" << x.label << "--> " << display_name(*g.node(x.dst)) << "\n";
      for (const auto& ev : x.evidence) out << "    \"" << ev << "\"\n";
    }
  }
  out << "\nFragment: " << r.fragment.nodes.size() << " nodes, " << r.fragment.edges.size() << " edges\n";
  return out.str();
}

}  // namespace kgfuse
