#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "kgfuse/model.hpp"

namespace kgfuse {

enum class NodeFamily { kApi, kTask };

std::string_view to_string(NodeFamily f);

struct Node {
  std::string id;
  std::variant<ApiEntity, TaskEntity> payload;

  NodeFamily family() const { return payload.index() == 0 ? NodeFamily::kApi : NodeFamily::kTask; }
  const ApiEntity* api() const { return std::get_if<ApiEntity>(&payload); }
  const TaskEntity* task() const { return std::get_if<TaskEntity>(&payload); }

  friend bool operator==(const Node&, const Node&) = default;
};

Node make_node(ApiEntity e);
Node make_node(TaskEntity t);

// Multi-valued attributes are sets of lines: merging takes the union.
using EdgeAttrs = std::map<std::string, std::set<std::string>>;

struct Edge {
  std::string src;
  std::string dst;
  std::string label;
  EdgeAttrs attrs;

  friend bool operator==(const Edge&, const Edge&) = default;
};

using EdgeKey = std::tuple<std::string, std::string, std::string>;

// Closed label set: declaration kinds, task declaration kinds, the nine
// semantic categories, TaskAlign, TaskOverlap and FusionLink.
const std::vector<std::string>& edge_labels();
bool is_edge_label(std::string_view label);
// sibling, TaskAlign and TaskOverlap are stored once with src < dst.
bool is_symmetric_label(std::string_view label);

struct GraphMetadata {
  std::string corpus_hash = "-";
  std::string config_hash = "-";
  std::string tool_version = "-";

  friend bool operator==(const GraphMetadata&, const GraphMetadata&) = default;
};

enum class Direction { kOut, kIn, kBoth };

struct Neighbor {
  const Edge* edge = nullptr;
  const Node* node = nullptr;  // the other endpoint
  bool outgoing = true;
};

inline constexpr int kSnapshotVersion = 1;

class KnowledgeGraph {
 public:
  // Idempotent for an identical payload; IdCollision otherwise.
  void put_node(Node n);
  // DanglingEdge for a missing endpoint, UnknownLabel outside the label set.
  // A repeated (src, dst, label) merges attributes.
  void put_edge(Edge e);

  const Node* node(std::string_view id) const;
  const Edge* edge(const std::string& src, const std::string& dst, const std::string& label) const;
  const std::map<std::string, Node, std::less<>>& nodes() const { return nodes_; }
  const std::map<EdgeKey, Edge>& edges() const { return edges_; }

  // Ordered by edge label, then the other endpoint's id. UnknownNode.
  std::vector<Neighbor> neighbors(std::string_view id, const std::optional<std::set<std::string>>& labels = {},
                                  Direction dir = Direction::kBoth) const;

  GraphMetadata metadata;

  // Line format: a header, then "N" records sorted by id, then "E" records
  // sorted by (src, dst, label); tab-separated percent-escaped fields.
  std::string serialize() const;
  // CorruptSnapshot (with the line number) or VersionMismatch.
  static KnowledgeGraph parse(std::string_view contents);
  void save(const std::string& path) const;
  static KnowledgeGraph load(const std::string& path);

  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    return a.metadata == b.metadata && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::map<std::string, Node, std::less<>> nodes_;
  std::map<EdgeKey, Edge> edges_;
  std::map<std::string, std::vector<EdgeKey>, std::less<>> out_;
  std::map<std::string, std::vector<EdgeKey>, std::less<>> in_;
};

struct GraphStats {
  std::size_t api_nodes = 0;
  std::size_t task_nodes = 0;
  std::map<std::string, std::size_t> edges_by_label;  // every label, zeros included
};

GraphStats graph_stats(const KnowledgeGraph& g);

}  // namespace kgfuse
