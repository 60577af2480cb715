#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgfuse/apikg.hpp"
#include "kgfuse/code_resolver.hpp"
#include "kgfuse/embedding.hpp"
#include "kgfuse/model.hpp"
#include "kgfuse/taskkg.hpp"
#include "kgfuse/text.hpp"

namespace kgfuse {

struct ApiReferenceTuple {
  ApiPacket packet;
  std::string sentence;  // context of the mention, may be empty
};

struct FusionLink {
  std::string task;
  std::string api;
  ApiPacket via_packet;
  bool disambiguated = false;

  friend bool operator==(const FusionLink&, const FusionLink&) = default;
};

// Linkable entities by packet name. Parameters and packages are left out:
// prose never refers to them by packet.
class ApiPacketIndex {
 public:
  ApiPacketIndex() = default;
  explicit ApiPacketIndex(const std::vector<ApiEntity>& entities);

  // Entities whose packet matches `query`, ordered by qualified name.
  std::vector<const ApiEntity*> candidates(const ApiPacket& query) const;
  const ApiEntity* find(const std::string& id) const;
  std::size_t size() const { return entities_.size(); }

 private:
  std::vector<ApiEntity> entities_;
  std::map<std::string, std::vector<std::size_t>> by_name_;
  std::map<std::string, std::size_t> by_id_;
};

struct LinkOutcome {
  std::optional<std::string> api;
  bool disambiguated = false;
  std::size_t candidates = 0;
};

// One candidate wins outright; several are ranked by the similarity of their
// function sentence to the tuple's sentence, ties to the smallest qualified
// name.
LinkOutcome link_api_mention(const ApiReferenceTuple& t, const ApiPacketIndex& index, const EmbeddingModel& m,
                             const TextProcessor& tp);

// Links prose mentions: packet from the mention text (resolved against an
// optional snippet), then link_api_mention with the sentence as context.
struct ApiLinker {
  const ApiPacketIndex* index = nullptr;
  const EmbeddingModel* model = nullptr;
  const TextProcessor* tp = nullptr;
  const TypeTable* types = nullptr;

  LinkOutcome link(std::string_view mention, std::string_view sentence, const CodeResolver* code = nullptr) const;
};

TypeTable type_table(const std::vector<ApiEntity>& entities);

struct FusionResult {
  std::vector<FusionLink> links;
  // "unlinked<TAB>task<TAB>packet<TAB>sentence"
  std::vector<std::string> diagnostics;
};

FusionResult fuse(const ApiPacketIndex& index, const TaskGraph& tasks, const EmbeddingModel& m,
                  const TextProcessor& tp);

}  // namespace kgfuse
