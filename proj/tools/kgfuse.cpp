// kgfuse command-line driver: pipeline stages, queries, stats and the HTTP service.
#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <iostream>
#include <json.hpp>

#include "kgfuse/error.hpp"
#include "kgfuse/pipeline.hpp"
#include "kgfuse/service.hpp"
#include "kgfuse/util.hpp"

using namespace kgfuse;

namespace {

struct Overrides {
  std::string config = "kgfuse.json";
  std::string work_dir;
  std::string snapshot;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> align;
  std::optional<double> overlap;
  std::optional<bool> blocking;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "pipeline configuration file (JSON, comments allowed)")
      ->capture_default_str();
  cmd->add_option("--work-dir", o.work_dir, "directory for intermediate artifacts");
  cmd->add_option("--snapshot", o.snapshot, "snapshot path (default <work-dir>/graph.kgsnap)");
}

void add_build_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "embedding training seed");
  cmd->add_option("--threads", o.threads, "embedding training threads (1 is bit-reproducible)");
  cmd->add_option("--align-threshold", o.align, "TaskAlign threshold, in [0, 2]");
  cmd->add_option("--overlap-threshold", o.overlap, "TaskOverlap threshold, in [0, 1]");
  cmd->add_option("--blocking", o.blocking, "only score task pairs sharing a head stem or fused API");
}

PipelineConfig load_config(const Overrides& o) {
  PipelineConfig cfg = PipelineConfig::load(o.config);
  if (!o.work_dir.empty()) cfg.work_dir = o.work_dir;
  if (!o.snapshot.empty()) cfg.snapshot = o.snapshot;
  if (o.seed) cfg.embedding.seed = *o.seed;
  if (o.threads) cfg.embedding.threads = *o.threads;
  if (o.align) cfg.enrich.align_threshold = *o.align;
  if (o.overlap) cfg.enrich.overlap_threshold = *o.overlap;
  if (o.blocking) cfg.enrich.blocking = *o.blocking;
  return cfg;
}

int run_pipeline(Stage stage, const Overrides& o) {
  PipelineConfig cfg = load_config(o);
  run_stage(stage, cfg, [](const StageSummary& s) { std::cout << s.render() << std::endl; });
  return 0;
}

std::string read_body(const std::string& body, const std::string& file) {
  if (!file.empty()) return file == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_file(file);
  return body;
}

void print_stats(const KnowledgeGraph& g, bool machine) {
  const GraphStats s = graph_stats(g);
  if (machine) {
    nlohmann::json j{{"api_nodes", s.api_nodes}, {"task_nodes", s.task_nodes}, {"edges", s.edges_by_label}};
    std::cout << j.dump(1) << "\n";
    return;
  }
  std::cout << "nodes\n";
  std::cout << "  api\t" << s.api_nodes << "\n";
  std::cout << "  task\t" << s.task_nodes << "\n";
  std::cout << "edges\n";
  for (const auto& [label, n] : s.edges_by_label) std::cout << "  " << label << "\t" << n << "\n";
}

int serve(const SearchEngine& engine, const std::string& host, int port, int threads) {
  httplib::Server server;
  server.new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<std::size_t>(threads)); };
  auto reply = [&engine](const httplib::Request& req, httplib::Response& res) {
    ServiceRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.params.emplace(k, v);
    r.body = req.body;
    ServiceResponse out = handle_request(engine, r);
    res.status = out.status;
    res.set_content(out.body, "application/json; charset=utf-8");
  };
  server.Get(R"(/api/.*)", reply);
  server.Post(R"(/api/.*)", reply);
  if (!server.bind_to_port(host, port)) throw Error(ErrorCode::kBindError, "cannot bind " + host + ":" + std::to_string(port));
  std::cerr << "listening on http://" << host << ":" << port << std::endl;
  server.listen_after_bind();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build, fuse and search API and programming-task knowledge graphs."};
  app.set_version_flag("--version", std::string(KGFUSE_VERSION));
  app.require_subcommand(1);

  Overrides o;
  std::vector<std::pair<CLI::App*, Stage>> stages;
  for (auto st : {Stage::kBuildApi, Stage::kBuildTask, Stage::kTrainEmbed, Stage::kFuse, Stage::kEnrich, Stage::kAll}) {
    static const std::map<Stage, std::string> help{
        {Stage::kBuildApi, "parse API reference pages into the API graph"},
        {Stage::kBuildTask, "extract programming tasks from tutorial pages"},
        {Stage::kTrainEmbed, "train word embeddings over both corpora"},
        {Stage::kFuse, "link task API mentions to API entities"},
        {Stage::kEnrich, "add semantic relations and write the snapshot"},
        {Stage::kAll, "run every stage in order"}};
    auto* cmd = app.add_subcommand(std::string(to_string(st)), help.at(st));
    add_common(cmd, o);
    add_build_flags(cmd, o);
    stages.emplace_back(cmd, st);
  }

  std::string kind = "text", body, body_file, format = "human";
  auto* query = app.add_subcommand("query", "search the snapshot with a text or code query");
  add_common(query, o);
  query->add_option("kind", kind, "text or code")->check(CLI::IsMember({"text", "code"}))->required();
  query->add_option("body", body, "query text or code");
  query->add_option("-f,--file", body_file, "read the query body from a file ('-' for stdin)");
  query->add_option("--format", format, "human or machine")->check(CLI::IsMember({"human", "machine"}));

  auto* stats = app.add_subcommand("stats", "print node and edge counts of a snapshot");
  add_common(stats, o);
  stats->add_option("--format", format, "human or machine")->check(CLI::IsMember({"human", "machine"}));

  std::string host = "127.0.0.1";
  int port = 8080, http_threads = 4;
  auto* srv = app.add_subcommand("serve", "answer search requests over HTTP");
  add_common(srv, o);
  srv->add_option("--host", host)->capture_default_str();
  srv->add_option("--port", port)->capture_default_str();
  srv->add_option("--http-threads", http_threads, "request worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [cmd, st] : stages)
      if (cmd->parsed()) return run_pipeline(st, o);

    if (stats->parsed()) {
      std::string snap = o.snapshot;
      if (snap.empty()) snap = load_config(o).snapshot_path();
      print_stats(KnowledgeGraph::load(snap), format == "machine");
      return 0;
    }

    const PipelineConfig cfg = load_config(o);
    SearchIndex ix = open_index(cfg, cfg.snapshot_path());
    if (query->parsed()) {
      const std::string text = read_body(body, body_file);
      SearchResult r = kind == "text" ? ix.engine->search_text(text) : ix.engine->search_code(text);
      if (format == "machine")
        std::cout << result_to_json(r, *ix.graph).dump(1) << "\n";
      else
        std::cout << render_result(r, *ix.graph);
      return 0;
    }
    if (srv->parsed()) return serve(*ix.engine, host, port, http_threads);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << std::endl;
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << std::endl;
    return 3;
  }
  return 0;
}
