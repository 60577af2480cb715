#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgfuse/apikg.hpp"
#include "kgfuse/embedding.hpp"
#include "kgfuse/enrich_api.hpp"
#include "kgfuse/enrich_task.hpp"
#include "kgfuse/error.hpp"
#include "kgfuse/fusion.hpp"
#include "kgfuse/graphstore.hpp"
#include "kgfuse/search.hpp"
#include "kgfuse/taskkg.hpp"

namespace kgfuse {

// One declarative file (JSON, comments allowed). Relative paths resolve
// against the file's directory.
struct PipelineConfig {
  std::string api_dir;
  std::string tutorials_dir;
  std::string lexicon;
  std::string orthography;
  std::string directive_keywords;
  std::string patterns;
  std::string task_phrases;
  std::string action_verbs;
  std::string classifier = "linear";  // or "rule"
  double task_threshold = 0.5;
  std::string code_tag = "pre";
  EnrichConfig enrich;
  EmbeddingConfig embedding;
  SearchConfig search;
  std::string work_dir = "kgfuse-work";
  std::string snapshot;  // default: <work_dir>/graph.kgsnap

  static PipelineConfig load(const std::string& path);
  static PipelineConfig parse(std::string_view json, const std::string& base_dir);
  // ConfigError naming the first missing file or out-of-range value.
  void validate() const;
  // Fingerprint of every setting and data file that shapes the graph; paths
  // themselves are left out so the hash survives moving the tree.
  std::string hash() const;
  std::string snapshot_path() const;
};

// Hash over the sorted relative names and contents of both corpus folders.
std::string corpus_hash(const PipelineConfig& cfg);

enum class Stage { kBuildApi, kBuildTask, kTrainEmbed, kFuse, kEnrich, kAll };

std::optional<Stage> parse_stage(std::string_view s);
std::string_view to_string(Stage s);

struct StageSummary {
  std::string stage;
  std::vector<std::pair<std::string, std::size_t>> counts;
  std::size_t diagnostics = 0;
  std::string artifact;

  std::string render() const;
};

using SummarySink = std::function<void(const StageSummary&)>;

// Runs a stage (or every stage for kAll), writing artifacts under work_dir.
// MissingPrerequisite if an earlier stage's artifact is absent.
std::vector<StageSummary> run_stage(Stage stage, const PipelineConfig& cfg, const SummarySink& sink = {});

std::shared_ptr<const TextProcessor> make_text_processor(const PipelineConfig& cfg);

// Artifact names inside work_dir.
inline constexpr std::string_view kApiArtifact = "api.kg.json";
inline constexpr std::string_view kTaskArtifact = "task.kg.json";
inline constexpr std::string_view kModelArtifact = "model.vec";
inline constexpr std::string_view kFusionArtifact = "fusion.json";
inline constexpr std::string_view kDiagnosticsArtifact = "diagnostics.tsv";

// Process exit code for an error: 1 user/config, 2 corpus, 3 internal.
int exit_code_for(ErrorCode code);

}  // namespace kgfuse
