#include "kgfuse/graphstore.hpp"

#include <algorithm>
#include <charconv>

#include "kgfuse/error.hpp"
#include "kgfuse/util.hpp"

namespace kgfuse {

namespace {

constexpr std::string_view kSpecial = "\t\n\r|,=;~";
constexpr std::string_view kMagic = "KGSNAP";

std::string esc(std::string_view s) { return percent_escape(s, kSpecial); }

std::string opt(const std::optional<std::string>& s) { return s ? esc(*s) : "~"; }
std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : "~"; }

std::string list(const std::vector<std::string>& items) {
  std::string out = std::to_string(items.size());
  for (const auto& i : items) out += "|" + esc(i);
  return out;
}

std::string packet_field(const ApiPacket& p) {
  return opt(p.name) + "," + opt(p.container) + "," + opt(p.param_count);
}

class Reader {
 public:
  Reader(std::vector<std::string> fields, std::size_t line) : f_(std::move(fields)), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kCorruptSnapshot, "snapshot line " + std::to_string(line_) + ": " + what);
  }

  std::size_t size() const { return f_.size(); }
  const std::string& raw(std::size_t i) const { return f_[i]; }

  std::string str(std::string_view s) const {
    try {
      return percent_unescape(s);
    } catch (const Error&) {
      fail("bad escape");
    }
  }
  std::string str(std::size_t i) const { return str(f_[i]); }

  std::optional<std::string> opt_str(std::string_view s) const {
    if (s == "~") return std::nullopt;
    return str(s);
  }
  std::optional<std::string> opt_str(std::size_t i) const { return opt_str(f_[i]); }

  std::optional<int> opt_int(std::string_view s) const {
    if (s == "~") return std::nullopt;
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail("bad integer '" + std::string(s) + "'");
    return v;
  }
  std::optional<int> opt_int(std::size_t i) const { return opt_int(f_[i]); }

  std::vector<std::string> list_of(std::string_view s) const {
    auto parts = split(s, '|');
    auto n = opt_int(parts[0]);
    if (!n || static_cast<std::size_t>(*n) + 1 != parts.size()) fail("bad list");
    std::vector<std::string> out;
    for (std::size_t i = 1; i < parts.size(); ++i) out.push_back(str(parts[i]));
    return out;
  }
  std::vector<std::string> list_of(std::size_t i) const { return list_of(f_[i]); }

  ApiPacket packet(std::string_view s) const {
    auto parts = split(s, ',');
    if (parts.size() != 3) fail("bad packet");
    return {opt_str(parts[0]), opt_str(parts[1]), opt_int(parts[2])};
  }

 private:
  std::vector<std::string> f_;
  std::size_t line_;
};

std::string node_record(const Node& n) {
  std::string r = "N\t" + esc(n.id) + "\t" + std::string(to_string(n.family()));
  if (const ApiEntity* e = n.api()) {
    r += "\t" + esc(to_string(e->kind)) + "\t" + esc(e->qualified_name) + "\t" + esc(e->simple_name) + "\t" +
         opt(e->param_count) + "\t" + opt(e->function_sentence) + "\t" + list(e->directive_sentences) + "\t" +
         packet_field(e->packet);
  } else {
    const TaskEntity& t = *n.task();
    std::vector<std::string> packets;
    for (const auto& p : t.api_packets) packets.push_back(packet_field(p));
    r += "\t" + esc(t.action) + "\t" + esc(t.object) + "\t" + esc(t.phrase) + "\t" + opt(t.notes) + "\t" +
         opt(t.code_snippet) + "\t" + opt(t.code_summary) + "\t" + esc(t.source) + "\t" + list(packets) + "\t" +
         list(t.packet_contexts);
  }
  return r;
}

Node parse_node(const Reader& rd) {
  if (rd.size() < 3) rd.fail("short node record");
  const std::string id = rd.str(1);
  if (rd.raw(2) == "api") {
    if (rd.size() != 10) rd.fail("api node needs 10 fields");
    ApiEntity e;
    e.id = id;
    auto kind = parse_api_kind(rd.str(3));
    if (!kind) rd.fail("unknown api kind");
    e.kind = *kind;
    e.qualified_name = rd.str(4);
    e.simple_name = rd.str(5);
    e.param_count = rd.opt_int(6);
    e.function_sentence = rd.opt_str(7);
    e.directive_sentences = rd.list_of(8);
    e.packet = rd.packet(rd.raw(9));
    return make_node(std::move(e));
  }
  if (rd.raw(2) == "task") {
    if (rd.size() != 12) rd.fail("task node needs 12 fields");
    TaskEntity t;
    t.id = id;
    t.action = rd.str(3);
    t.object = rd.str(4);
    t.phrase = rd.str(5);
    t.notes = rd.opt_str(6);
    t.code_snippet = rd.opt_str(7);
    t.code_summary = rd.opt_str(8);
    t.source = rd.str(9);
    for (const auto& p : rd.list_of(10)) t.api_packets.push_back(rd.packet(p));
    t.packet_contexts = rd.list_of(11);
    return make_node(std::move(t));
  }
  rd.fail("unknown node family '" + rd.raw(2) + "'");
}

std::string edge_record(const Edge& e) {
  std::string attrs;
  for (const auto& [k, vs] : e.attrs) {
    if (!attrs.empty()) attrs += ";";
    attrs += esc(k) + "=" + list(std::vector<std::string>(vs.begin(), vs.end()));
  }
  return "E\t" + esc(e.src) + "\t" + esc(e.dst) + "\t" + esc(e.label) + "\t" + attrs;
}

Edge parse_edge(const Reader& rd) {
  if (rd.size() != 5) rd.fail("edge needs 5 fields");
  Edge e{rd.str(1), rd.str(2), rd.str(3), {}};
  if (!rd.raw(4).empty()) {
    for (const auto& kv : split(rd.raw(4), ';')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) rd.fail("bad attribute");
      auto values = rd.list_of(std::string_view(kv).substr(eq + 1));
      e.attrs[rd.str(std::string_view(kv).substr(0, eq))].insert(values.begin(), values.end());
    }
  }
  return e;
}

std::string meta_value(const Reader& rd, std::size_t i, std::string_view key) {
  const std::string& f = rd.raw(i);
  if (f.rfind(std::string(key) + "=", 0) != 0) rd.fail("header field " + std::to_string(i + 1) + " should be " + std::string(key));
  return rd.str(std::string_view(f).substr(key.size() + 1));
}

}  // namespace

std::string_view to_string(NodeFamily f) { return f == NodeFamily::kApi ? "api" : "task"; }

Node make_node(ApiEntity e) {
  std::string id = e.id;
  return Node{std::move(id), std::move(e)};
}

Node make_node(TaskEntity t) {
  std::string id = t.id;
  return Node{std::move(id), std::move(t)};
}

const std::vector<std::string>& edge_labels() {
  static const std::vector<std::string> labels = {
      "contain", "extend", "implement", "throw", "hasMethod", "hasParameter", "hasField", "hasConstructor",
      "parentChild", "sibling", "temporal",
      "FunctionSimilarity", "FunctionOpposite", "BehaviorDifference", "FunctionReplace", "FunctionCollaboration",
      "TypeConversion", "ImplementConstraint", "LogicConstraint", "EfficiencyComparison",
      "TaskAlign", "TaskOverlap", "FusionLink",
  };
  return labels;
}

bool is_edge_label(std::string_view label) {
  const auto& ls = edge_labels();
  return std::find(ls.begin(), ls.end(), label) != ls.end();
}

bool is_symmetric_label(std::string_view label) {
  return label == "sibling" || label == "TaskAlign" || label == "TaskOverlap";
}

void KnowledgeGraph::put_node(Node n) {
  auto it = nodes_.find(n.id);
  if (it != nodes_.end()) {
    if (it->second == n) return;
    throw Error(ErrorCode::kIdCollision, "node " + n.id + " already exists with a different payload");
  }
  std::string id = n.id;
  nodes_.emplace(std::move(id), std::move(n));
}

void KnowledgeGraph::put_edge(Edge e) {
  if (!is_edge_label(e.label)) throw Error(ErrorCode::kUnknownLabel, "unknown edge label '" + e.label + "'");
  for (const auto* end : {&e.src, &e.dst})
    if (!nodes_.count(*end)) throw Error(ErrorCode::kDanglingEdge, "edge endpoint " + *end + " is not a node");
  if (is_symmetric_label(e.label) && e.dst < e.src) std::swap(e.src, e.dst);
  EdgeKey key{e.src, e.dst, e.label};
  auto it = edges_.find(key);
  if (it != edges_.end()) {
    for (auto& [k, vs] : e.attrs) it->second.attrs[k].insert(vs.begin(), vs.end());
    return;
  }
  out_[e.src].push_back(key);
  in_[e.dst].push_back(key);
  edges_.emplace(std::move(key), std::move(e));
}

const Node* KnowledgeGraph::node(std::string_view id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Edge* KnowledgeGraph::edge(const std::string& src, const std::string& dst, const std::string& label) const {
  auto it = edges_.find({src, dst, label});
  if (it == edges_.end() && is_symmetric_label(label)) it = edges_.find({dst, src, label});
  return it == edges_.end() ? nullptr : &it->second;
}

std::vector<Neighbor> KnowledgeGraph::neighbors(std::string_view id, const std::optional<std::set<std::string>>& labels,
                                                Direction dir) const {
  if (!node(id)) throw Error(ErrorCode::kUnknownNode, "unknown node " + std::string(id));
  std::vector<Neighbor> out;
  auto collect = [&](const auto& index, bool outgoing) {
    auto it = index.find(id);
    if (it == index.end()) return;
    for (const auto& key : it->second) {
      const Edge& e = edges_.at(key);
      if (labels && !labels->count(e.label)) continue;
      const std::string& other = outgoing ? e.dst : e.src;
      out.push_back({&e, &nodes_.at(other), outgoing});
    }
  };
  if (dir != Direction::kIn) collect(out_, true);
  if (dir != Direction::kOut) collect(in_, false);
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    return std::tie(a.edge->label, a.node->id, b.outgoing) < std::tie(b.edge->label, b.node->id, a.outgoing);
  });
  return out;
}

std::string KnowledgeGraph::serialize() const {
  std::string out = std::string(kMagic) + "\t" + std::to_string(kSnapshotVersion) + "\tcorpus=" +
                    esc(metadata.corpus_hash) + "\tconfig=" + esc(metadata.config_hash) +
                    "\ttool=" + esc(metadata.tool_version) + "\tnodes=" + std::to_string(nodes_.size()) +
                    "\tedges=" + std::to_string(edges_.size()) + "\n";
  for (const auto& [id, n] : nodes_) out += node_record(n) + "\n";
  for (const auto& [key, e] : edges_) out += edge_record(e) + "\n";
  return out;
}

KnowledgeGraph KnowledgeGraph::parse(std::string_view contents) {
  auto lines = split(contents, '\n');
  // A complete file ends with a newline, leaving one empty trailing piece.
  if (lines.empty() || !lines.back().empty()) {
    Reader(std::vector<std::string>{}, std::max<std::size_t>(lines.size(), 1)).fail("truncated record");
  }
  lines.pop_back();
  if (lines.empty()) Reader({}, 1).fail("missing header");

  Reader header(split(lines[0], '\t'), 1);
  if (header.size() != 7 || header.raw(0) != kMagic) header.fail("not a snapshot header");
  if (header.raw(1) != std::to_string(kSnapshotVersion))
    throw Error(ErrorCode::kVersionMismatch,
                "snapshot version " + header.raw(1) + ", expected " + std::to_string(kSnapshotVersion));
  KnowledgeGraph g;
  g.metadata.corpus_hash = meta_value(header, 2, "corpus");
  g.metadata.config_hash = meta_value(header, 3, "config");
  g.metadata.tool_version = meta_value(header, 4, "tool");
  const auto n_nodes = header.opt_int(meta_value(header, 5, "nodes"));
  const auto n_edges = header.opt_int(meta_value(header, 6, "edges"));
  if (!n_nodes || !n_edges) header.fail("missing counts");

  for (std::size_t i = 1; i < lines.size(); ++i) {
    Reader rd(split(lines[i], '\t'), i + 1);
    try {
      if (rd.raw(0) == "N") {
        if (!g.edges_.empty()) rd.fail("node record after edge records");
        g.put_node(parse_node(rd));
      } else if (rd.raw(0) == "E") {
        g.put_edge(parse_edge(rd));
      } else {
        rd.fail("unknown record kind '" + rd.raw(0) + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kCorruptSnapshot) throw;
      rd.fail(e.what());
    }
  }
  if (g.nodes_.size() != static_cast<std::size_t>(*n_nodes) || g.edges_.size() != static_cast<std::size_t>(*n_edges))
    Reader({}, lines.size()).fail("record count does not match the header (truncated file?)");
  return g;
}

void KnowledgeGraph::save(const std::string& path) const { write_file(path, serialize()); }

KnowledgeGraph KnowledgeGraph::load(const std::string& path) { return parse(read_file(path)); }

GraphStats graph_stats(const KnowledgeGraph& g) {
  GraphStats s;
  for (const auto& l : edge_labels()) s.edges_by_label[l] = 0;
  for (const auto& [id, n] : g.nodes()) (n.family() == NodeFamily::kApi ? s.api_nodes : s.task_nodes)++;
  for (const auto& [key, e] : g.edges()) ++s.edges_by_label[e.label];
  return s;
}

}  // namespace kgfuse
