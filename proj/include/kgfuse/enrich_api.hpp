#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgfuse/fusion.hpp"
#include "kgfuse/taskkg.hpp"
#include "kgfuse/text.hpp"

namespace kgfuse {

enum class RelationCategory {
  kFunctionSimilarity,
  kFunctionOpposite,
  kBehaviorDifference,
  kFunctionReplace,
  kFunctionCollaboration,
  kTypeConversion,
  kImplementConstraint,
  kLogicConstraint,
  kEfficiencyComparison,
};

inline constexpr std::size_t kRelationCategoryCount = 9;

std::string_view to_string(RelationCategory c);  // "FunctionSimilarity"
std::string_view abbreviation(RelationCategory c);  // "FS"
std::optional<RelationCategory> parse_relation_category(std::string_view s);

struct PatternElement {
  enum class Kind { kSlot, kPos, kNounPhrase, kWords, kOptional };
  Kind kind = Kind::kWords;
  int slot = 0;  // 1 or 2
  Pos pos = Pos::kOTHER;
  std::vector<std::vector<std::string>> alternatives;  // each a word sequence
  std::vector<PatternElement> group;                   // kOptional
};

struct SentencePattern {
  std::string id;
  RelationCategory category = RelationCategory::kFunctionSimilarity;
  std::string source;  // template as written
  std::vector<PatternElement> elements;
};

// "CATEGORY :: template". Throws PatternSyntaxError with the column.
SentencePattern compile_pattern(std::string_view spec, std::string id = {});

// One pattern per line, "#" comments. Ids are the category abbreviation plus
// a running number per category ("BD2").
std::vector<SentencePattern> parse_pattern_file(std::string_view contents);

struct PatternMatch {
  RelationCategory category = RelationCategory::kFunctionSimilarity;
  std::size_t mention1 = 0;  // indices into the sentence's mentions
  std::size_t mention2 = 0;
  std::string pattern_id;
  std::vector<std::size_t> tokens;  // tokens consumed by pattern elements
};

// Elements may be separated by at most this many skipped tokens, none of
// them part of an API mention.
inline constexpr std::size_t kPatternGap = 6;

// Every pattern is tried; within one pattern the leftmost match wins. A match
// whose consumed tokens are a strict subset of another match on the same
// mention pair is dropped.
std::vector<PatternMatch> match_patterns(const Sentence& sentence, const std::vector<Mention>& mentions,
                                         const std::vector<SentencePattern>& patterns);

struct RelationSentence {
  Sentence sentence;
  std::vector<Mention> mentions;
  std::optional<std::string> code_snippet;
};

// Sentences with at least two API mentions.
std::vector<RelationSentence> select_relation_sentences(const std::vector<TaskSentence>& sentences,
                                                        const TextProcessor& tp);

struct RelationEvidence {
  std::string sentence;
  std::string pattern_id;

  friend bool operator==(const RelationEvidence&, const RelationEvidence&) = default;
};

struct ApiSemanticRelation {
  std::string src;  // AE1
  std::string dst;  // AE2
  RelationCategory category = RelationCategory::kFunctionSimilarity;
  std::vector<RelationEvidence> evidence;
};

struct ApiEnrichResult {
  std::vector<ApiSemanticRelation> relations;  // sorted by (src, dst, category)
  // "unlinked<TAB>mention<TAB>sentence" or "self<TAB>id<TAB>sentence"
  std::vector<std::string> diagnostics;
};

ApiEnrichResult add_api_semantic_relations(const std::vector<RelationSentence>& sentences,
                                           const std::vector<SentencePattern>& patterns, const ApiLinker& linker);

}  // namespace kgfuse
