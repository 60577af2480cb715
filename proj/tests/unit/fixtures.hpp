#pragma once

#include <memory>
#include <string>

#include "kgfuse/apikg.hpp"
#include "kgfuse/taskkg.hpp"
#include "kgfuse/text.hpp"
#include "kgfuse/util.hpp"

namespace kgfuse::testing {

inline std::shared_ptr<const TextResources> default_text_resources() {
  static auto res = std::make_shared<const TextResources>(TextResources::load(
      std::string(KGFUSE_DATA_DIR) + "/lexicon.tsv", std::string(KGFUSE_DATA_DIR) + "/orthography.txt"));
  return res;
}

inline const TextProcessor& text() {
  static TextProcessor tp(default_text_resources());
  return tp;
}

inline const KeywordSet& directive_keywords() {
  static KeywordSet ks = KeywordSet::parse(read_file(std::string(KGFUSE_DATA_DIR) + "/directive_keywords.txt"));
  return ks;
}

inline const LinearTaskClassifier& task_classifier() {
  static LinearTaskClassifier c = LinearTaskClassifier::train(
      parse_labeled_phrases(read_file(std::string(KGFUSE_DATA_DIR) + "/task_phrases.tsv")), text());
  return c;
}

inline const TypeTable& java_types() {
  static TypeTable t = [] {
    TypeTable tt;
    for (const char* q : {"java.util.List", "java.util.ArrayList", "java.util.Collection", "java.util.SortedMap",
                          "java.util.Deque", "java.sql.Statement", "java.sql.Connection", "java.sql.ResultSet"})
      tt.add(q);
    return tt;
  }();
  return t;
}

inline TaskBuildContext task_context() {
  TaskBuildContext ctx;
  ctx.tp = &text();
  ctx.classifier = &task_classifier();
  ctx.types = &java_types();
  return ctx;
}

}  // namespace kgfuse::testing
