#include "kgfuse/fusion.hpp"

#include <algorithm>

#include "kgfuse/util.hpp"

namespace kgfuse {

namespace {

std::string tsv_field(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '\t', ' ');
  std::replace(out.begin(), out.end(), '\n', ' ');
  return out;
}

}  // namespace

ApiPacketIndex::ApiPacketIndex(const std::vector<ApiEntity>& entities) {
  for (const auto& e : entities) {
    if (e.kind == ApiKind::kParameter || e.kind == ApiKind::kPackage || !e.packet.name) continue;
    by_id_.emplace(e.id, entities_.size());
    entities_.push_back(e);
  }
  for (std::size_t i = 0; i < entities_.size(); ++i) by_name_[*entities_[i].packet.name].push_back(i);
  for (auto& [name, ids] : by_name_) {
    std::sort(ids.begin(), ids.end(), [this](std::size_t a, std::size_t b) {
      return entities_[a].qualified_name < entities_[b].qualified_name;
    });
  }
}

std::vector<const ApiEntity*> ApiPacketIndex::candidates(const ApiPacket& query) const {
  std::vector<const ApiEntity*> out;
  if (!query.name) return out;
  auto it = by_name_.find(*query.name);
  if (it == by_name_.end()) return out;
  for (std::size_t i : it->second)
    if (match_api_packet(query, entities_[i].packet)) out.push_back(&entities_[i]);
  return out;
}

const ApiEntity* ApiPacketIndex::find(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &entities_[it->second];
}

LinkOutcome link_api_mention(const ApiReferenceTuple& t, const ApiPacketIndex& index, const EmbeddingModel& m,
                             const TextProcessor& tp) {
  LinkOutcome out;
  const auto cands = index.candidates(t.packet);
  out.candidates = cands.size();
  if (cands.empty()) return out;
  if (cands.size() == 1) {
    out.api = cands.front()->id;
    return out;
  }
  // Candidates arrive sorted by qualified name, so keeping the first strict
  // maximum is the tie-break.
  const auto query = sentence_vector(t.sentence, m, tp);
  const ApiEntity* best = nullptr;
  double best_score = 0;
  for (const ApiEntity* c : cands) {
    double s = 0;
    if (c->function_sentence) {
      const auto v = sentence_vector(*c->function_sentence, m, tp);
      s = cosine(std::span<const double>(query), std::span<const double>(v));
    }
    if (!best || s > best_score) {
      best = c;
      best_score = s;
    }
  }
  out.api = best->id;
  out.disambiguated = true;
  return out;
}

LinkOutcome ApiLinker::link(std::string_view mention, std::string_view sentence, const CodeResolver* code) const {
  static const TypeTable kEmpty;
  ApiReferenceTuple t{packet_for_mention(mention, code, types ? *types : kEmpty), std::string(sentence)};
  return link_api_mention(t, *index, *model, *tp);
}

TypeTable type_table(const std::vector<ApiEntity>& entities) {
  TypeTable t;
  for (const auto& e : entities) {
    if (e.kind == ApiKind::kClass || e.kind == ApiKind::kInterface || e.kind == ApiKind::kException)
      t.add(e.qualified_name);
  }
  return t;
}

FusionResult fuse(const ApiPacketIndex& index, const TaskGraph& tasks, const EmbeddingModel& m,
                  const TextProcessor& tp) {
  FusionResult r;
  for (const auto& task : tasks.tasks) {
    for (std::size_t i = 0; i < task.api_packets.size(); ++i) {
      ApiReferenceTuple t{task.api_packets[i], i < task.packet_contexts.size() ? task.packet_contexts[i] : ""};
      auto link = link_api_mention(t, index, m, tp);
      if (link.api) {
        r.links.push_back({task.id, *link.api, t.packet, link.disambiguated});
      } else {
        r.diagnostics.push_back("unlinked\t" + task.id + "\t" + to_string(t.packet) + "\t" + tsv_field(t.sentence));
      }
    }
  }
  return r;
}

}  // namespace kgfuse
