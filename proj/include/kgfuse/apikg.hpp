#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kgfuse/html.hpp"
#include "kgfuse/model.hpp"
#include "kgfuse/text.hpp"

namespace kgfuse {

// Directive keywords, one per line; "#" comments; "differ*" style prefixes.
struct KeywordSet {
  std::vector<std::string> keywords;

  static KeywordSet parse(std::string_view contents);
  bool matches(std::string_view word) const;
  bool matches_any(const Sentence& s) const;
};

// A relation whose target is named in the markup but may live on another
// page; resolved when pages are assembled.
struct PendingRelation {
  std::string src;
  std::string target_name;  // as written: simple or qualified
  DeclKind kind = DeclKind::kExtend;
  std::string context_package;
};

struct ApiPageResult {
  std::string page_id;
  std::vector<ApiEntity> entities;
  std::vector<DeclRelation> relations;
  std::vector<PendingRelation> pending;
  std::vector<std::string> sentences;  // every description sentence, page order
};

struct ApiGraph {
  std::vector<ApiEntity> entities;  // sorted by id
  std::vector<DeclRelation> relations;
  std::vector<std::string> diagnostics;
  std::vector<std::string> sentences;  // description sentences, for embedding training

  const ApiEntity* find(std::string_view id) const;
};

std::vector<Sentence> identify_function_sentences(const ApiEntity& entity, const std::vector<Sentence>& description);
std::vector<Sentence> identify_directive_sentences(const std::vector<Sentence>& description, const KeywordSet& keywords);
ApiEntity attach_sentence_attributes(ApiEntity entity, const std::vector<Sentence>& fn, const std::vector<Sentence>& dir);

// Parses one type page. Throws MalformedDocument naming the page and the
// missing marker.
ApiPageResult parse_api_reference(const HtmlNode& doc, std::string_view page_id, const TextProcessor& tp,
                                  const KeywordSet& keywords);

// Merges pages, deduplicates package entities and resolves cross-page
// references. Unresolvable targets are reported, never invented.
ApiGraph assemble_api_graph(std::vector<ApiPageResult> pages);

// Parameter types of a Java-style signature with generics erased, e.g.
// "void add(int index, List<E> e)" -> {"int", "List"}.
std::vector<std::string> erased_parameter_types(std::string_view signature);

}  // namespace kgfuse
