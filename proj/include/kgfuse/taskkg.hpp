#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgfuse/code_resolver.hpp"
#include "kgfuse/html.hpp"
#include "kgfuse/model.hpp"
#include "kgfuse/text.hpp"

namespace kgfuse {

class TaskClassifier {
 public:
  virtual ~TaskClassifier() = default;
  virtual std::string name() const = 0;
  // Probability-like score in [0, 1]; the phrase is known to be non-empty.
  virtual double score(const VerbPhrase& phrase) const = 0;
};

struct LabeledPhrase {
  bool is_task = false;
  std::string phrase;
};

// "task<TAB>phrase" / "non-task<TAB>phrase" lines; "#" comments.
std::vector<LabeledPhrase> parse_labeled_phrases(std::string_view contents);

// Logistic regression over lower-cased tokens plus a head-verb feature,
// trained by plain SGD in file order so the weights are reproducible.
class LinearTaskClassifier : public TaskClassifier {
 public:
  struct Options {
    int epochs = 40;
    double learning_rate = 0.2;
    double l2 = 1e-4;
  };

  static LinearTaskClassifier train(const std::vector<LabeledPhrase>& data, const TextProcessor& tp, Options opts);
  static LinearTaskClassifier train(const std::vector<LabeledPhrase>& data, const TextProcessor& tp) {
    return train(data, tp, Options{});
  }

  std::string name() const override { return "linear"; }
  double score(const VerbPhrase& phrase) const override;

 private:
  std::map<std::string, double> weights_;
  double bias_ = 0.0;
};

// Imperative head verb from an action-verb list and an object containing a
// noun.
class RuleTaskClassifier : public TaskClassifier {
 public:
  explicit RuleTaskClassifier(std::set<std::string> action_verbs) : verbs_(std::move(action_verbs)) {}
  static std::set<std::string> parse_action_verbs(std::string_view contents);

  std::string name() const override { return "rule"; }
  double score(const VerbPhrase& phrase) const override;

 private:
  std::set<std::string> verbs_;
};

// Throws EmptyPhrase for a phrase without tokens.
double classify_task_phrase(const VerbPhrase& phrase, const TaskClassifier& classifier);

struct ActionObject {
  std::string action;
  std::string object;
};

// Verb+Noun* -> (verb, nouns); Verb+Noun*+ADP+Noun* -> (verb nouns, nouns),
// the longer pattern first. Throws NoPatternMatch.
ActionObject chunk_action_object(const VerbPhrase& phrase);

struct TaskKeywords {
  std::vector<std::string> notes{"if", "note", "must", "remember", "instead", "only", "except", "notice"};
  std::vector<std::string> summary{"first", "second", "third", "then", "finally", "this example", "in this case"};
  std::vector<std::string> temporal{"before", "after", "once", "then", "until"};
};

struct SectionText {
  std::string text;  // flattened prose
  std::vector<MarkupSpan> code_spans;
};

// A candidate task location in a tutorial: a heading section or list item.
struct TutorialSection {
  std::string anchor;  // stable within the document, e.g. "s3"
  int level = 0;       // 1-3 for headings, 4+ for list items
  SectionText title;
  std::vector<SectionText> body;
  std::vector<std::string> code_boxes;
  std::vector<std::size_t> children;  // indices into TutorialDocument::sections
  std::optional<std::size_t> parent;
};

struct TutorialDocument {
  std::string id;
  std::vector<TutorialSection> sections;  // document order
};

TutorialDocument parse_tutorial(const HtmlNode& doc, std::string_view doc_id, const std::string& code_tag = "pre");

struct TaskAttributes {
  std::optional<std::string> notes;
  std::optional<std::string> code_snippet;
  std::optional<std::string> code_summary;
  std::vector<ApiPacket> api_packets;
  std::vector<std::string> packet_contexts;
};

struct TaskBuildContext {
  const TextProcessor* tp = nullptr;
  const TaskClassifier* classifier = nullptr;
  const TypeTable* types = nullptr;
  TaskKeywords keywords;
  double threshold = 0.5;
};

// Packets for the API mentions of one sentence, in mention order.
std::vector<ApiPacket> extract_api_packets(const Sentence& sentence, std::span<const MarkupSpan> markup,
                                           const std::optional<std::string>& code_snippet,
                                           const TaskBuildContext& ctx);

TaskAttributes extract_task_attributes(const TutorialSection& section, const TaskBuildContext& ctx);

// A tutorial sentence kept for relation mining and embedding training.
struct TaskSentence {
  std::string source;  // "doc#anchor"
  std::string text;
  std::vector<MarkupSpan> markup;  // relative to text
  std::optional<std::string> code_snippet;

  friend bool operator==(const TaskSentence&, const TaskSentence&) = default;
};

struct TaskGraph {
  std::vector<TaskEntity> tasks;  // sorted by id
  std::vector<TaskDeclRelation> relations;
  std::vector<std::string> diagnostics;
  std::vector<TaskSentence> sentences;

  const TaskEntity* find(std::string_view id) const;
};

struct TaskDocResult {
  std::vector<TaskEntity> tasks;
  std::vector<TaskDeclRelation> relations;
  std::vector<std::string> diagnostics;
  std::vector<TaskSentence> sentences;
};

// Tasks of one document and their parent_child / sibling / temporal edges.
TaskDocResult build_task_document(const TutorialDocument& doc, const TaskBuildContext& ctx);

// task_ids[i] is the task extracted from doc.sections[i], or empty. Tasks
// attach to their nearest task ancestor; siblings share that ancestor.
std::vector<TaskDeclRelation> extract_task_relations(const TutorialDocument& doc,
                                                     const std::vector<std::string>& task_ids,
                                                     const TaskBuildContext& ctx);

TaskGraph assemble_task_graph(std::vector<TaskDocResult> docs);

std::string slugify(std::string_view s);

}  // namespace kgfuse
