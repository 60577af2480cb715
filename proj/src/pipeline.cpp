#include "kgfuse/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "kgfuse/error.hpp"
#include "kgfuse/html.hpp"
#include "kgfuse/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace kgfuse {

namespace {

// ---- JSON forms of the stage artifacts -------------------------------------

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json packet_json(const ApiPacket& p) { return json::array({opt(p.name), opt(p.container), opt(p.param_count)}); }

ApiPacket packet_from(const json& j) {
  ApiPacket p;
  if (!j[0].is_null()) p.name = j[0].get<std::string>();
  if (!j[1].is_null()) p.container = j[1].get<std::string>();
  if (!j[2].is_null()) p.param_count = j[2].get<int>();
  return p;
}

json api_json(const ApiEntity& e) {
  return {{"id", e.id},
          {"kind", std::string(to_string(e.kind))},
          {"qualified_name", e.qualified_name},
          {"simple_name", e.simple_name},
          {"param_count", opt(e.param_count)},
          {"function_sentence", opt(e.function_sentence)},
          {"directive_sentences", e.directive_sentences},
          {"packet", packet_json(e.packet)}};
}

ApiEntity api_from(const json& j) {
  ApiEntity e;
  e.id = j.at("id").get<std::string>();
  auto kind = parse_api_kind(j.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::kConfigError, "bad api kind in artifact");
  e.kind = *kind;
  e.qualified_name = j.at("qualified_name").get<std::string>();
  e.simple_name = j.at("simple_name").get<std::string>();
  e.param_count = get_opt<int>(j, "param_count");
  e.function_sentence = get_opt<std::string>(j, "function_sentence");
  e.directive_sentences = j.at("directive_sentences").get<std::vector<std::string>>();
  e.packet = packet_from(j.at("packet"));
  return e;
}

json task_json(const TaskEntity& t) {
  json packets = json::array();
  for (const auto& p : t.api_packets) packets.push_back(packet_json(p));
  return {{"id", t.id},
          {"action", t.action},
          {"object", t.object},
          {"phrase", t.phrase},
          {"notes", opt(t.notes)},
          {"code_snippet", opt(t.code_snippet)},
          {"code_summary", opt(t.code_summary)},
          {"api_packets", packets},
          {"packet_contexts", t.packet_contexts},
          {"source", t.source}};
}

TaskEntity task_from(const json& j) {
  TaskEntity t;
  t.id = j.at("id").get<std::string>();
  t.action = j.at("action").get<std::string>();
  t.object = j.at("object").get<std::string>();
  t.phrase = j.at("phrase").get<std::string>();
  t.notes = get_opt<std::string>(j, "notes");
  t.code_snippet = get_opt<std::string>(j, "code_snippet");
  t.code_summary = get_opt<std::string>(j, "code_summary");
  for (const auto& p : j.at("api_packets")) t.api_packets.push_back(packet_from(p));
  t.packet_contexts = j.at("packet_contexts").get<std::vector<std::string>>();
  t.source = j.at("source").get<std::string>();
  return t;
}

json api_graph_json(const ApiGraph& g) {
  json j;
  j["entities"] = json::array();
  for (const auto& e : g.entities) j["entities"].push_back(api_json(e));
  j["relations"] = json::array();
  for (const auto& r : g.relations) j["relations"].push_back({r.src, r.dst, std::string(to_string(r.kind))});
  j["diagnostics"] = g.diagnostics;
  j["sentences"] = g.sentences;
  return j;
}

DeclKind decl_kind_from(const std::string& s) {
  for (auto k : {DeclKind::kContain, DeclKind::kExtend, DeclKind::kImplement, DeclKind::kThrow, DeclKind::kHasMethod,
                 DeclKind::kHasParameter, DeclKind::kHasField, DeclKind::kHasConstructor})
    if (to_string(k) == s) return k;
  throw Error(ErrorCode::kConfigError, "bad relation kind in artifact: " + s);
}

TaskDeclKind task_decl_kind_from(const std::string& s) {
  for (auto k : {TaskDeclKind::kParentChild, TaskDeclKind::kSibling, TaskDeclKind::kTemporal})
    if (to_string(k) == s) return k;
  throw Error(ErrorCode::kConfigError, "bad task relation kind in artifact: " + s);
}

ApiGraph api_graph_from(const json& j) {
  ApiGraph g;
  for (const auto& e : j.at("entities")) g.entities.push_back(api_from(e));
  for (const auto& r : j.at("relations"))
    g.relations.push_back({r[0].get<std::string>(), r[1].get<std::string>(), decl_kind_from(r[2].get<std::string>())});
  g.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  g.sentences = j.at("sentences").get<std::vector<std::string>>();
  return g;
}

json task_graph_json(const TaskGraph& g) {
  json j;
  j["tasks"] = json::array();
  for (const auto& t : g.tasks) j["tasks"].push_back(task_json(t));
  j["relations"] = json::array();
  for (const auto& r : g.relations) j["relations"].push_back({r.src, r.dst, std::string(to_string(r.kind))});
  j["diagnostics"] = g.diagnostics;
  j["sentences"] = json::array();
  for (const auto& s : g.sentences) {
    json spans = json::array();
    for (const auto& m : s.markup) spans.push_back({m.begin, m.end});
    j["sentences"].push_back({{"source", s.source}, {"text", s.text}, {"markup", spans}, {"code", opt(s.code_snippet)}});
  }
  return j;
}

TaskGraph task_graph_from(const json& j) {
  TaskGraph g;
  for (const auto& t : j.at("tasks")) g.tasks.push_back(task_from(t));
  for (const auto& r : j.at("relations"))
    g.relations.push_back(
        {r[0].get<std::string>(), r[1].get<std::string>(), task_decl_kind_from(r[2].get<std::string>())});
  g.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  for (const auto& s : j.at("sentences")) {
    TaskSentence ts;
    ts.source = s.at("source").get<std::string>();
    ts.text = s.at("text").get<std::string>();
    for (const auto& m : s.at("markup")) ts.markup.push_back({m[0].get<std::size_t>(), m[1].get<std::size_t>()});
    ts.code_snippet = get_opt<std::string>(s, "code");
    g.sentences.push_back(std::move(ts));
  }
  return g;
}

json fusion_json(const FusionResult& f) {
  json j;
  j["links"] = json::array();
  for (const auto& l : f.links)
    j["links"].push_back({{"task", l.task}, {"api", l.api}, {"via", packet_json(l.via_packet)}, {"disambiguated", l.disambiguated}});
  j["diagnostics"] = f.diagnostics;
  return j;
}

FusionResult fusion_from(const json& j) {
  FusionResult f;
  for (const auto& l : j.at("links"))
    f.links.push_back({l.at("task").get<std::string>(), l.at("api").get<std::string>(), packet_from(l.at("via")),
                       l.at("disambiguated").get<bool>()});
  f.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  return f;
}

// ---- stage plumbing ---------------------------------------------------------

std::string artifact(const PipelineConfig& cfg, std::string_view name) {
  return (fs::path(cfg.work_dir) / std::string(name)).string();
}

json read_artifact(const PipelineConfig& cfg, std::string_view name, std::string_view needed_by) {
  const std::string path = artifact(cfg, name);
  if (!fs::exists(path))
    throw Error(ErrorCode::kMissingPrerequisite,
                std::string(needed_by) + " needs " + path + "; run the earlier stages first");
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptSnapshot, path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) { write_file(path, j.dump(1) + "\n"); }

std::vector<fs::path> html_files(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kConfigError, "not a directory: " + dir);
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    const auto ext = to_lower(e.path().extension().string());
    if (e.is_regular_file() && (ext == ".html" || ext == ".htm")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string doc_id(const fs::path& file, const std::string& root) {
  std::string rel = fs::relative(file, root).generic_string();
  const auto dot = rel.rfind('.');
  return dot == std::string::npos ? rel : rel.substr(0, dot);
}

TypeTable types_of(const ApiGraph& g) { return type_table(g.entities); }

std::unique_ptr<TaskClassifier> make_classifier(const PipelineConfig& cfg, const TextProcessor& tp) {
  if (cfg.classifier == "rule")
    return std::make_unique<RuleTaskClassifier>(RuleTaskClassifier::parse_action_verbs(read_file(cfg.action_verbs)));
  return std::make_unique<LinearTaskClassifier>(
      LinearTaskClassifier::train(parse_labeled_phrases(read_file(cfg.task_phrases)), tp));
}

StageSummary build_api(const PipelineConfig& cfg, const TextProcessor& tp) {
  const KeywordSet keywords = KeywordSet::parse(read_file(cfg.directive_keywords));
  std::vector<ApiPageResult> pages;
  std::vector<std::string> skipped;
  for (const auto& f : html_files(cfg.api_dir)) {
    const std::string id = fs::relative(f, cfg.api_dir).generic_string();
    try {
      pages.push_back(parse_api_reference(parse_html(read_file(f.string())), id, tp, keywords));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMalformedDocument) throw;
      skipped.push_back(std::string("malformed\t") + e.what());
    }
  }
  if (pages.empty()) throw Error(ErrorCode::kEmptyCorpus, "no API reference page in " + cfg.api_dir);
  const std::size_t n_pages = pages.size();
  ApiGraph g = assemble_api_graph(std::move(pages));
  g.diagnostics.insert(g.diagnostics.begin(), skipped.begin(), skipped.end());
  fs::create_directories(cfg.work_dir);
  write_json(artifact(cfg, kApiArtifact), api_graph_json(g));
  return {"build-api",
          {{"pages", n_pages}, {"entities", g.entities.size()}, {"relations", g.relations.size()}},
          g.diagnostics.size(),
          artifact(cfg, kApiArtifact)};
}

StageSummary build_task(const PipelineConfig& cfg, const TextProcessor& tp) {
  const ApiGraph api = api_graph_from(read_artifact(cfg, kApiArtifact, "build-task"));
  const TypeTable types = types_of(api);
  const auto classifier = make_classifier(cfg, tp);
  TaskBuildContext ctx;
  ctx.tp = &tp;
  ctx.classifier = classifier.get();
  ctx.types = &types;
  ctx.threshold = cfg.task_threshold;
  std::vector<TaskDocResult> docs;
  std::vector<std::string> skipped;
  const auto files = html_files(cfg.tutorials_dir);
  for (const auto& f : files) {
    const std::string id = doc_id(f, cfg.tutorials_dir);
    docs.push_back(build_task_document(parse_tutorial(parse_html(read_file(f.string())), id, cfg.code_tag), ctx));
  }
  if (docs.empty()) throw Error(ErrorCode::kEmptyCorpus, "no tutorial page in " + cfg.tutorials_dir);
  TaskGraph g = assemble_task_graph(std::move(docs));
  fs::create_directories(cfg.work_dir);
  write_json(artifact(cfg, kTaskArtifact), task_graph_json(g));
  return {"build-task",
          {{"documents", files.size()}, {"tasks", g.tasks.size()}, {"relations", g.relations.size()}},
          g.diagnostics.size(),
          artifact(cfg, kTaskArtifact)};
}

std::vector<std::string> training_corpus(const ApiGraph& api, const TaskGraph& tasks) {
  std::vector<std::string> out = api.sentences;
  for (const auto& s : tasks.sentences) out.push_back(s.text);
  return out;
}

StageSummary train_embed(const PipelineConfig& cfg, const TextProcessor& tp) {
  const ApiGraph api = api_graph_from(read_artifact(cfg, kApiArtifact, "train-embed"));
  const TaskGraph tasks = task_graph_from(read_artifact(cfg, kTaskArtifact, "train-embed"));
  const auto corpus = training_corpus(api, tasks);
  EmbeddingModel m = train_embeddings(corpus, tp, cfg.embedding);
  m.save(artifact(cfg, kModelArtifact));
  return {"train-embed", {{"sentences", corpus.size()}, {"vocabulary", m.size()}, {"dim", static_cast<std::size_t>(m.dim())}}, 0,
          artifact(cfg, kModelArtifact)};
}

EmbeddingModel load_model(const PipelineConfig& cfg, std::string_view needed_by) {
  const std::string path = artifact(cfg, kModelArtifact);
  if (!fs::exists(path))
    throw Error(ErrorCode::kMissingPrerequisite, std::string(needed_by) + " needs " + path + "; run train-embed first");
  return EmbeddingModel::load(path);
}

StageSummary fuse_stage(const PipelineConfig& cfg, const TextProcessor& tp) {
  const ApiGraph api = api_graph_from(read_artifact(cfg, kApiArtifact, "fuse"));
  const TaskGraph tasks = task_graph_from(read_artifact(cfg, kTaskArtifact, "fuse"));
  const EmbeddingModel m = load_model(cfg, "fuse");
  const ApiPacketIndex index(api.entities);
  const FusionResult f = fuse(index, tasks, m, tp);
  write_json(artifact(cfg, kFusionArtifact), fusion_json(f));
  return {"fuse", {{"links", f.links.size()}}, f.diagnostics.size(), artifact(cfg, kFusionArtifact)};
}

std::string format_score(double v) { return format_double(v); }

StageSummary enrich_stage(const PipelineConfig& cfg, const TextProcessor& tp) {
  const ApiGraph api = api_graph_from(read_artifact(cfg, kApiArtifact, "enrich"));
  const TaskGraph tasks = task_graph_from(read_artifact(cfg, kTaskArtifact, "enrich"));
  const FusionResult fusion = fusion_from(read_artifact(cfg, kFusionArtifact, "enrich"));
  const EmbeddingModel m = load_model(cfg, "enrich");
  const auto patterns = parse_pattern_file(read_file(cfg.patterns));

  const ApiPacketIndex index(api.entities);
  const TypeTable types = types_of(api);
  const ApiLinker linker{&index, &m, &tp, &types};
  const ApiEnrichResult api_rel =
      add_api_semantic_relations(select_relation_sentences(tasks.sentences, tp), patterns, linker);

  ApiAdjacency adjacency;
  for (const auto& r : api.relations) adjacency.add(r.src, r.dst);
  for (const auto& r : api_rel.relations) adjacency.add(r.src, r.dst);
  std::map<std::string, std::set<std::string>> fused;
  for (const auto& l : fusion.links) fused[l.task].insert(l.api);
  const TaskScorer scorer{&linker, &adjacency};
  const TaskEnrichResult task_rel = enrich_tasks(tasks.tasks, scorer, cfg.enrich, fused);

  KnowledgeGraph g;
  g.metadata.corpus_hash = corpus_hash(cfg);
  g.metadata.config_hash = cfg.hash();
  g.metadata.tool_version = KGFUSE_VERSION;
  for (const auto& e : api.entities) g.put_node(make_node(e));
  for (const auto& t : tasks.tasks) g.put_node(make_node(t));
  for (const auto& r : api.relations) g.put_edge({r.src, r.dst, std::string(to_string(r.kind)), {}});
  for (const auto& r : tasks.relations) g.put_edge({r.src, r.dst, std::string(to_string(r.kind)), {}});
  for (const auto& l : fusion.links) {
    g.put_edge({l.task, l.api, "FusionLink",
                {{"via_packet", {to_string(l.via_packet)}}, {"disambiguated", {l.disambiguated ? "true" : "false"}}}});
  }
  for (const auto& r : api_rel.relations) {
    Edge e{r.src, r.dst, std::string(to_string(r.category)), {}};
    for (const auto& ev : r.evidence) {
      e.attrs["evidence"].insert(ev.sentence);
      e.attrs["pattern"].insert(ev.pattern_id);
    }
    g.put_edge(std::move(e));
  }
  for (const auto& r : task_rel.relations) {
    g.put_edge({r.a, r.b, std::string(to_string(r.kind)),
                {{"score", {format_score(r.score)}}, {"threshold", {format_score(r.threshold_used)}}}});
  }

  const std::string snap = cfg.snapshot_path();
  if (fs::path(snap).has_parent_path()) fs::create_directories(fs::path(snap).parent_path());
  g.save(snap);
  m.save(snap + ".vec");

  std::vector<std::string> diags;
  for (const auto& d : api.diagnostics) diags.push_back("build-api\t" + d);
  for (const auto& d : tasks.diagnostics) diags.push_back("build-task\t" + d);
  for (const auto& d : fusion.diagnostics) diags.push_back("fuse\t" + d);
  for (const auto& d : api_rel.diagnostics) diags.push_back("enrich\t" + d);
  for (const auto& d : task_rel.diagnostics) diags.push_back("enrich\t" + d);
  std::string report;
  for (const auto& d : diags) report += d + "\n";
  write_file(artifact(cfg, kDiagnosticsArtifact), report);

  std::size_t api_sem = 0;
  for (const auto& r : api_rel.relations) (void)r, ++api_sem;
  std::size_t align = 0, overlap = 0;
  for (const auto& r : task_rel.relations) (r.kind == TaskRelationKind::kTaskAlign ? align : overlap)++;
  return {"enrich",
          {{"nodes", g.nodes().size()},
           {"edges", g.edges().size()},
           {"api_semantic_relations", api_sem},
           {"task_align", align},
           {"task_overlap", overlap}},
          api_rel.diagnostics.size() + task_rel.diagnostics.size(),
          snap};
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty()) return p;
  fs::path path(p);
  if (path.is_absolute()) return path.lexically_normal().string();
  return (fs::path(base) / path).lexically_normal().string();
}

}  // namespace

// ---- configuration ------------------------------------------------------------

PipelineConfig PipelineConfig::load(const std::string& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kConfigError, "config file not found: " + path);
  std::string base = fs::absolute(path).parent_path().string();
  return parse(read_file(path), base);
}

PipelineConfig PipelineConfig::parse(std::string_view text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("config: ") + e.what());
  }
  PipelineConfig c;
  try {
    auto str = [&](const json& o, const char* key, std::string& out) {
      if (o.contains(key)) out = resolve(base_dir, o.at(key).get<std::string>());
    };
    if (j.contains("corpus")) {
      str(j["corpus"], "api_dir", c.api_dir);
      str(j["corpus"], "tutorials_dir", c.tutorials_dir);
    }
    if (j.contains("resources")) {
      const json& r = j["resources"];
      str(r, "lexicon", c.lexicon);
      str(r, "orthography", c.orthography);
      str(r, "directive_keywords", c.directive_keywords);
      str(r, "patterns", c.patterns);
      str(r, "task_phrases", c.task_phrases);
      str(r, "action_verbs", c.action_verbs);
    }
    if (j.contains("tasks")) {
      const json& t = j["tasks"];
      c.classifier = t.value("classifier", c.classifier);
      c.task_threshold = t.value("threshold", c.task_threshold);
      c.code_tag = t.value("code_tag", c.code_tag);
    }
    if (j.contains("enrich")) {
      const json& e = j["enrich"];
      c.enrich.align_threshold = e.value("align_threshold", c.enrich.align_threshold);
      c.enrich.overlap_threshold = e.value("overlap_threshold", c.enrich.overlap_threshold);
      c.enrich.blocking = e.value("blocking", c.enrich.blocking);
    }
    if (j.contains("embedding")) {
      const json& e = j["embedding"];
      c.embedding.dim = e.value("dim", c.embedding.dim);
      c.embedding.window = e.value("window", c.embedding.window);
      c.embedding.epochs = e.value("epochs", c.embedding.epochs);
      c.embedding.min_count = e.value("min_count", c.embedding.min_count);
      c.embedding.negative = e.value("negative", c.embedding.negative);
      c.embedding.alpha = e.value("alpha", c.embedding.alpha);
      c.embedding.sample = e.value("sample", c.embedding.sample);
      c.embedding.seed = e.value("seed", c.embedding.seed);
      c.embedding.threads = e.value("threads", c.embedding.threads);
    }
    if (j.contains("search")) {
      const json& s = j["search"];
      c.search.lead_ins = s.value("lead_ins", c.search.lead_ins);
      c.search.radius = s.value("radius", c.search.radius);
      c.search.budget = s.value("budget", c.search.budget);
    }
    if (j.contains("output")) {
      str(j["output"], "work_dir", c.work_dir);
      str(j["output"], "snapshot", c.snapshot);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("config: ") + e.what());
  }
  if (!fs::path(c.work_dir).is_absolute()) c.work_dir = resolve(base_dir, c.work_dir);
  return c;
}

void PipelineConfig::validate() const {
  auto need_dir = [](const std::string& p, const char* what) {
    if (p.empty() || !fs::is_directory(p)) throw Error(ErrorCode::kConfigError, std::string(what) + " not found: " + p);
  };
  auto need_file = [](const std::string& p, const char* what) {
    if (p.empty() || !fs::is_regular_file(p)) throw Error(ErrorCode::kConfigError, std::string(what) + " not found: " + p);
  };
  need_dir(api_dir, "corpus.api_dir");
  need_dir(tutorials_dir, "corpus.tutorials_dir");
  need_file(lexicon, "resources.lexicon");
  need_file(orthography, "resources.orthography");
  need_file(directive_keywords, "resources.directive_keywords");
  need_file(patterns, "resources.patterns");
  if (classifier == "linear") need_file(task_phrases, "resources.task_phrases");
  else if (classifier == "rule") need_file(action_verbs, "resources.action_verbs");
  else throw Error(ErrorCode::kConfigError, "tasks.classifier must be \"linear\" or \"rule\"");
  if (!(task_threshold >= 0 && task_threshold <= 1)) throw Error(ErrorCode::kConfigError, "tasks.threshold must be in [0, 1]");
  enrich.validate();
  if (embedding.dim <= 0 || embedding.window <= 0 || embedding.epochs <= 0 || embedding.negative < 0 ||
      embedding.min_count < 1 || embedding.threads < 1 || !(embedding.alpha > 0))
    throw Error(ErrorCode::kConfigError, "embedding settings out of range");
  if (search.radius < 0 || search.budget == 0) throw Error(ErrorCode::kConfigError, "search settings out of range");
}

std::string PipelineConfig::hash() const {
  json settings = {{"classifier", classifier},
                   {"task_threshold", task_threshold},
                   {"code_tag", code_tag},
                   {"align", enrich.align_threshold},
                   {"overlap", enrich.overlap_threshold},
                   {"blocking", enrich.blocking},
                   {"dim", embedding.dim},
                   {"window", embedding.window},
                   {"epochs", embedding.epochs},
                   {"min_count", embedding.min_count},
                   {"negative", embedding.negative},
                   {"alpha", embedding.alpha},
                   {"sample", embedding.sample},
                   {"seed", embedding.seed},
                   {"threads", embedding.threads}};
  Fnv1a h;
  h.update(settings.dump());
  for (const auto* p : {&lexicon, &orthography, &directive_keywords, &patterns, &task_phrases, &action_verbs}) {
    h.update("\x1f");
    if (!p->empty() && fs::is_regular_file(*p)) h.update(read_file(*p));
  }
  return h.hex();
}

std::string PipelineConfig::snapshot_path() const {
  return snapshot.empty() ? (fs::path(work_dir) / "graph.kgsnap").string() : snapshot;
}

std::string corpus_hash(const PipelineConfig& cfg) {
  Fnv1a h;
  for (const auto* dir : {&cfg.api_dir, &cfg.tutorials_dir}) {
    h.update("\x1e");
    for (const auto& f : html_files(*dir)) {
      h.update(fs::relative(f, *dir).generic_string());
      h.update("\x1f");
      h.update(read_file(f.string()));
      h.update("\x1f");
    }
  }
  return h.hex();
}

std::optional<Stage> parse_stage(std::string_view s) {
  for (auto st : {Stage::kBuildApi, Stage::kBuildTask, Stage::kTrainEmbed, Stage::kFuse, Stage::kEnrich, Stage::kAll})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kBuildApi: return "build-api";
    case Stage::kBuildTask: return "build-task";
    case Stage::kTrainEmbed: return "train-embed";
    case Stage::kFuse: return "fuse";
    case Stage::kEnrich: return "enrich";
    case Stage::kAll: return "all";
  }
  return "?";
}

std::string StageSummary::render() const {
  std::ostringstream out;
  out << stage << ":";
  for (const auto& [k, v] : counts) out << " " << k << "=" << v;
  out << " diagnostics=" << diagnostics;
  if (!artifact.empty()) out << " -> " << artifact;
  return out.str();
}

std::shared_ptr<const TextProcessor> make_text_processor(const PipelineConfig& cfg) {
  auto res = std::make_shared<const TextResources>(TextResources::load(cfg.lexicon, cfg.orthography));
  return std::make_shared<const TextProcessor>(res);
}

std::vector<StageSummary> run_stage(Stage stage, const PipelineConfig& cfg, const SummarySink& sink) {
  cfg.validate();
  const auto tp = make_text_processor(cfg);
  std::vector<StageSummary> out;
  auto run = [&](Stage s) {
    StageSummary r;
    try {
      switch (s) {
        case Stage::kBuildApi: r = build_api(cfg, *tp); break;
        case Stage::kBuildTask: r = build_task(cfg, *tp); break;
        case Stage::kTrainEmbed: r = train_embed(cfg, *tp); break;
        case Stage::kFuse: r = fuse_stage(cfg, *tp); break;
        case Stage::kEnrich: r = enrich_stage(cfg, *tp); break;
        case Stage::kAll: break;
      }
    } catch (const Error& e) {
      throw Error(e.code(), std::string(to_string(s)) + ": " + e.what());
    }
    if (sink) sink(r);
    out.push_back(std::move(r));
  };
  if (stage == Stage::kAll) {
    for (auto s : {Stage::kBuildApi, Stage::kBuildTask, Stage::kTrainEmbed, Stage::kFuse, Stage::kEnrich}) run(s);
  } else {
    run(stage);
  }
  return out;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kMissingPrerequisite:
    case ErrorCode::kUnparsableQuery:
    case ErrorCode::kNoApiFound:
    case ErrorCode::kIoError:
    case ErrorCode::kUnknownNode:
    case ErrorCode::kPatternSyntaxError:
    case ErrorCode::kBindError:
    case ErrorCode::kVersionMismatch:
    case ErrorCode::kCorruptSnapshot:
      return 1;
    case ErrorCode::kMalformedDocument:
    case ErrorCode::kEmptyCorpus:
    case ErrorCode::kEmptyGraph:
      return 2;
    default:
      return 3;
  }
}

}  // namespace kgfuse
