#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <regex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kgfuse {

enum class TokenKind { kWord, kApiToken, kCodeKeyword, kPunct, kNumber };

enum class Pos { kVB, kVBN, kNN, kNpPart, kADP, kADV, kADJ, kDET, kCONJ, kPRON, kOTHER };

std::string_view to_string(TokenKind kind);
std::string_view to_string(Pos pos);
// Accepts the lexicon spellings: VB, VBN, NN, NP-part, ADP, ADV, ADJ, DET, CONJ, PRON, OTHER.
bool parse_pos(std::string_view s, Pos* out);

struct Token {
  std::string text;
  TokenKind kind = TokenKind::kWord;
  Pos pos = Pos::kOTHER;
  std::size_t start = 0;  // byte offsets into the source text
  std::size_t end = 0;
};

struct Sentence {
  std::vector<Token> tokens;
  std::string raw;
  std::size_t begin = 0;  // offset of raw within the source text
  std::string source_id;
};

struct VerbPhrase {
  std::vector<Token> tokens;
  Token head_verb;

  std::string text() const;
};

// A half-open byte range of the source text that was inside code markup.
struct MarkupSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Mention {
  std::string text;
  std::size_t begin = 0;  // byte offsets into the source text
  std::size_t end = 0;
  std::size_t first_token = 0;  // token index range within the sentence
  std::size_t last_token = 0;   // inclusive
};

struct OrthographyPattern {
  std::string name;
  std::string source;
  std::regex re;
};

// Everything the text processor reads from configuration. Shared read-only.
struct TextResources {
  std::string lexicon_version;
  std::map<std::string, std::vector<Pos>> lexicon;  // word -> tags in priority order
  std::vector<OrthographyPattern> orthography;     // context-free API patterns
  std::vector<std::regex> type_name_patterns;      // applied to non-initial words only
  std::set<std::string> conjunctions{"but", "and", "or", "so", "yet"};
  std::set<std::string> code_keywords{"while", "if", "for", "else", "return", "new", "try", "catch"};

  static TextResources load(const std::string& lexicon_path, const std::string& orthography_path);
  void load_lexicon(std::string_view contents);
  void load_orthography(std::string_view contents);
};

class TextProcessor {
 public:
  explicit TextProcessor(std::shared_ptr<const TextResources> resources);

  std::vector<Token> tokenize(std::string_view text) const;
  std::vector<Token> pos_tag(std::vector<Token> tokens) const;
  std::vector<Sentence> split_sentences(std::string_view text, std::string_view source_id = {}) const;
  // Tokenizes and tags the whole text as a single sentence (headings, queries, phrases).
  Sentence make_sentence(std::string_view text, std::string_view source_id = {}) const;
  std::vector<VerbPhrase> extract_verb_phrases(const Sentence& sentence) const;
  std::string resolve_pronouns(std::string_view section_text, std::string_view owner_api) const;
  std::vector<Mention> detect_api_mentions(const Sentence& sentence,
                                           std::span<const MarkupSpan> markup = {}) const;

  // Lower-cased Word/ApiToken/CodeKeyword/Number texts; the unit fed to embeddings.
  std::vector<std::string> embedding_tokens(std::string_view text) const;

  bool is_code_keyword(std::string_view word) const;
  bool is_api_orthography(std::string_view text) const;
  const TextResources& resources() const { return *res_; }

 private:
  Pos tag_word(const std::vector<Token>& tokens, std::size_t i, bool initial) const;
  bool is_closed_class(std::string_view lower_word) const;

  std::shared_ptr<const TextResources> res_;
};

// Last path segment of an API name, keeping a trailing "()" for callables:
// "java.util.Queue.peek()" -> "peek()", "java.util.List" -> "List".
std::string api_simple_name(std::string_view api);

}  // namespace kgfuse
