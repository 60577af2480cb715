#include "kgfuse/text.hpp"

#include <algorithm>
#include <cctype>

#include "kgfuse/error.hpp"
#include "kgfuse/util.hpp"

namespace kgfuse {

namespace {

bool is_word_byte(char c) {
  return is_ident_char(c) || (static_cast<unsigned char>(c) & 0x80);
}

bool is_terminal(std::string_view t) { return t == "." || t == "!" || t == "?"; }

bool tags_contain(const std::vector<Pos>& tags, Pos p) {
  return std::find(tags.begin(), tags.end(), p) != tags.end();
}

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::kWord: return "Word";
    case TokenKind::kApiToken: return "ApiToken";
    case TokenKind::kCodeKeyword: return "CodeKeyword";
    case TokenKind::kPunct: return "Punct";
    case TokenKind::kNumber: return "Number";
  }
  return "Word";
}

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::kVB: return "VB";
    case Pos::kVBN: return "VBN";
    case Pos::kNN: return "NN";
    case Pos::kNpPart: return "NP-part";
    case Pos::kADP: return "ADP";
    case Pos::kADV: return "ADV";
    case Pos::kADJ: return "ADJ";
    case Pos::kDET: return "DET";
    case Pos::kCONJ: return "CONJ";
    case Pos::kPRON: return "PRON";
    case Pos::kOTHER: return "OTHER";
  }
  return "OTHER";
}

bool parse_pos(std::string_view s, Pos* out) {
  static const std::pair<std::string_view, Pos> kNames[] = {
      {"VB", Pos::kVB},     {"VBN", Pos::kVBN},   {"NN", Pos::kNN},   {"NP-part", Pos::kNpPart},
      {"ADP", Pos::kADP},   {"ADV", Pos::kADV},   {"ADJ", Pos::kADJ}, {"DET", Pos::kDET},
      {"CONJ", Pos::kCONJ}, {"PRON", Pos::kPRON}, {"OTHER", Pos::kOTHER}};
  for (const auto& [name, pos] : kNames) {
    if (name == s) {
      *out = pos;
      return true;
    }
  }
  return false;
}

std::string VerbPhrase::text() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty() && t.kind != TokenKind::kPunct) out += ' ';
    out += t.text;
  }
  return out;
}

TextResources TextResources::load(const std::string& lexicon_path,
                                  const std::string& orthography_path) {
  TextResources res;
  res.load_lexicon(read_file(lexicon_path));
  res.load_orthography(read_file(orthography_path));
  return res;
}

void TextResources::load_lexicon(std::string_view contents) {
  lexicon.clear();
  int line_no = 0;
  for (const auto& raw_line : split(contents, '\n')) {
    ++line_no;
    std::string line = trim(raw_line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("#version", 0) == 0) lexicon_version = trim(line.substr(8));
      continue;
    }
    auto fields = split(line, '\t');
    Pos pos;
    if (fields.size() != 2 || !parse_pos(trim(fields[1]), &pos)) {
      throw Error(ErrorCode::kConfigError,
                  "lexicon line " + std::to_string(line_no) + ": expected word<TAB>POS");
    }
    auto& tags = lexicon[to_lower(trim(fields[0]))];
    if (!tags_contain(tags, pos)) tags.push_back(pos);
  }
}

void TextResources::load_orthography(std::string_view contents) {
  orthography.clear();
  type_name_patterns.clear();
  int line_no = 0;
  for (const auto& raw_line : split(contents, '\n')) {
    ++line_no;
    std::string line = trim(raw_line);
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kConfigError,
                  "orthography line " + std::to_string(line_no) + ": expected name<TAB>regex");
    }
    std::string name = trim(line.substr(0, tab));
    std::string source = trim(line.substr(tab + 1));
    try {
      std::regex re(source, std::regex::ECMAScript | std::regex::optimize);
      if (name == "type_name") {
        type_name_patterns.push_back(std::move(re));
      } else {
        orthography.push_back({name, source, std::move(re)});
      }
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::kConfigError, "orthography pattern '" + name + "': " + e.what());
    }
  }
}

TextProcessor::TextProcessor(std::shared_ptr<const TextResources> resources)
    : res_(std::move(resources)) {}

bool TextProcessor::is_code_keyword(std::string_view word) const {
  return res_->code_keywords.count(std::string(word)) > 0;
}

bool TextProcessor::is_api_orthography(std::string_view text) const {
  std::string s(text);
  for (const auto& p : res_->orthography) {
    if (std::regex_match(s, p.re)) return true;
  }
  return false;
}

bool TextProcessor::is_closed_class(std::string_view lower_word) const {
  auto it = res_->lexicon.find(std::string(lower_word));
  if (it == res_->lexicon.end()) return false;
  for (Pos p : it->second) {
    if (p == Pos::kDET || p == Pos::kADP || p == Pos::kPRON || p == Pos::kCONJ) return true;
  }
  return false;
}

std::vector<Token> TextProcessor::tokenize(std::string_view text) const {
  static const std::regex kAbbrev(R"((?:e\.g|i\.e|etc|vs)\.)", std::regex::icase);
  std::vector<Token> tokens;
  const std::string src(text);
  std::size_t i = 0;
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (is_ident_start(src[i]) || (c & 0x80)) {
      std::size_t word_end = i;
      while (word_end < src.size() && is_word_byte(src[word_end])) ++word_end;
      // Internal apostrophe: "don't", "list's".
      std::size_t apos = std::string::npos;
      if (word_end + 1 < src.size() && src[word_end] == '\'' &&
          std::isalpha(static_cast<unsigned char>(src[word_end + 1]))) {
        apos = word_end;
        word_end += 1;
        while (word_end < src.size() && is_word_byte(src[word_end])) ++word_end;
      }
      std::string word = src.substr(i, word_end - i);

      std::smatch m;
      auto begin = src.cbegin() + static_cast<std::ptrdiff_t>(i);
      if (std::regex_search(begin, src.cend(), m, kAbbrev, std::regex_constants::match_continuous)) {
        std::size_t len = static_cast<std::size_t>(m.length(0));
        tokens.push_back({src.substr(i, len), TokenKind::kWord, Pos::kOTHER, i, i + len});
        i += len;
        continue;
      }

      std::size_t api_len = 0;
      for (const auto& p : res_->orthography) {
        if (std::regex_search(begin, src.cend(), m, p.re, std::regex_constants::match_continuous)) {
          api_len = std::max(api_len, static_cast<std::size_t>(m.length(0)));
        }
      }
      if (api_len > 0) {
        std::size_t lead = i;
        while (lead < src.size() && is_ident_char(src[lead])) ++lead;
        std::string lead_word = src.substr(i, lead - i);
        bool keyword_call = is_code_keyword(lead_word) && api_len > lead_word.size() &&
                            src[lead] == '(';
        bool ends_on_boundary = i + api_len >= src.size() || !is_word_byte(src[i + api_len]);
        if (!keyword_call && ends_on_boundary && api_len >= word.size()) {
          tokens.push_back({src.substr(i, api_len), TokenKind::kApiToken, Pos::kNN, i, i + api_len});
          i += api_len;
          continue;
        }
      }

      if (apos != std::string::npos && to_lower(src.substr(apos, word_end - apos)) == "'s") {
        tokens.push_back({src.substr(i, apos - i), TokenKind::kWord, Pos::kOTHER, i, apos});
        tokens.push_back({src.substr(apos, 2), TokenKind::kWord, Pos::kOTHER, apos, word_end});
      } else {
        TokenKind kind = is_code_keyword(to_lower(word)) ? TokenKind::kCodeKeyword : TokenKind::kWord;
        tokens.push_back({word, kind, Pos::kOTHER, i, word_end});
      }
      i = word_end;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      tokens.push_back({src.substr(i, j - i), TokenKind::kNumber, Pos::kOTHER, i, j});
      i = j;
      continue;
    }
    tokens.push_back({src.substr(i, 1), TokenKind::kPunct, Pos::kOTHER, i, i + 1});
    ++i;
  }
  return tokens;
}

Pos TextProcessor::tag_word(const std::vector<Token>& tokens, std::size_t i, bool initial) const {
  const Token& tok = tokens[i];
  if (tok.text == "'s" || tok.text == "'S") return Pos::kNpPart;
  const std::string w = to_lower(tok.text);
  const Pos* prev = nullptr;
  std::string prev_text;
  if (i > 0 && tokens[i - 1].kind != TokenKind::kPunct) {
    prev = &tokens[i - 1].pos;
    prev_text = to_lower(tokens[i - 1].text);
  }

  if (!initial && starts_with_upper(tok.text) && tok.text.size() > 1) {
    // Mid-sentence capitalised words are names; only closed-class words keep their tag.
    auto it = res_->lexicon.find(w);
    if (it == res_->lexicon.end() || !is_closed_class(w)) return Pos::kNN;
  }

  auto it = res_->lexicon.find(w);
  if (it != res_->lexicon.end()) {
    const auto& tags = it->second;
    if (tags.size() > 1 && tags_contain(tags, Pos::kVB) && tags_contain(tags, Pos::kNN)) {
      if (prev && (*prev == Pos::kDET || *prev == Pos::kADJ || *prev == Pos::kNpPart ||
                   (*prev == Pos::kADP && prev_text != "to"))) {
        return Pos::kNN;
      }
      if (initial || (prev && (*prev == Pos::kPRON || *prev == Pos::kVB || *prev == Pos::kCONJ ||
                               *prev == Pos::kADV || prev_text == "to"))) {
        return Pos::kVB;
      }
    }
    return tags.front();
  }

  auto lex_verb = [&](const std::string& base) {
    auto f = res_->lexicon.find(base);
    return f != res_->lexicon.end() && tags_contain(f->second, Pos::kVB);
  };
  auto ends_with = [&](std::string_view suffix) {
    return w.size() > suffix.size() + 1 && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
  };

  if (ends_with("ies") && lex_verb(w.substr(0, w.size() - 3) + "y")) return Pos::kVB;
  if (ends_with("es") && lex_verb(w.substr(0, w.size() - 2))) return Pos::kVB;
  if (ends_with("s") && lex_verb(w.substr(0, w.size() - 1))) return Pos::kVB;
  if (ends_with("ed")) return Pos::kVBN;
  if (ends_with("ing")) return Pos::kVB;
  if (ends_with("ly")) return Pos::kADV;
  for (std::string_view suffix : {"ous", "able", "ible", "ful", "ive", "less"}) {
    if (ends_with(suffix)) return Pos::kADJ;
  }
  return Pos::kNN;
}

std::vector<Token> TextProcessor::pos_tag(std::vector<Token> tokens) const {
  bool seen_word = false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Token& t = tokens[i];
    switch (t.kind) {
      case TokenKind::kApiToken: t.pos = Pos::kNN; break;
      case TokenKind::kNumber: t.pos = Pos::kADJ; break;
      case TokenKind::kPunct: t.pos = Pos::kOTHER; break;
      case TokenKind::kWord:
      case TokenKind::kCodeKeyword:
        t.pos = tag_word(tokens, i, !seen_word);
        break;
    }
    if (t.kind != TokenKind::kPunct) seen_word = true;
  }
  return tokens;
}

Sentence TextProcessor::make_sentence(std::string_view text, std::string_view source_id) const {
  Sentence s;
  s.tokens = pos_tag(tokenize(text));
  s.raw = std::string(text);
  s.begin = 0;
  s.source_id = std::string(source_id);
  return s;
}

std::vector<Sentence> TextProcessor::split_sentences(std::string_view text,
                                                     std::string_view source_id) const {
  std::vector<Token> tokens = tokenize(text);
  std::vector<std::pair<std::size_t, std::size_t>> ranges;  // token index [b, e)
  std::size_t start = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::kPunct || !is_terminal(tokens[i].text)) continue;
    std::size_t after = tokens[i].end;
    // Absorb runs like "?!" or "...".
    while (i + 1 < tokens.size() && tokens[i + 1].kind == TokenKind::kPunct &&
           is_terminal(tokens[i + 1].text) && tokens[i + 1].start == after) {
      ++i;
      after = tokens[i].end;
    }
    bool boundary = after >= text.size() || std::isspace(static_cast<unsigned char>(text[after]));
    if (!boundary) continue;
    ranges.emplace_back(start, i + 1);
    start = i + 1;
  }
  if (start < tokens.size()) ranges.emplace_back(start, tokens.size());

  std::vector<std::pair<std::size_t, std::size_t>> merged;
  for (const auto& r : ranges) {
    bool leads_with_conj = false;
    for (std::size_t k = r.first; k < r.second; ++k) {
      if (tokens[k].kind == TokenKind::kPunct) continue;
      leads_with_conj = res_->conjunctions.count(to_lower(tokens[k].text)) > 0;
      break;
    }
    if (leads_with_conj && !merged.empty()) {
      merged.back().second = r.second;
    } else {
      merged.push_back(r);
    }
  }

  std::vector<Sentence> out;
  for (const auto& [b, e] : merged) {
    Sentence s;
    s.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(b),
                    tokens.begin() + static_cast<std::ptrdiff_t>(e));
    s.tokens = pos_tag(std::move(s.tokens));
    s.begin = s.tokens.front().start;
    s.raw = std::string(text.substr(s.begin, s.tokens.back().end - s.begin));
    s.source_id = std::string(source_id);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<VerbPhrase> TextProcessor::extract_verb_phrases(const Sentence& sentence) const {
  auto continues = [](Pos p) {
    return p == Pos::kDET || p == Pos::kADJ || p == Pos::kNN || p == Pos::kADP || p == Pos::kNpPart;
  };
  std::vector<VerbPhrase> out;
  const auto& toks = sentence.tokens;
  std::size_t i = 0;
  while (i < toks.size()) {
    if (toks[i].pos != Pos::kVB) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < toks.size() && continues(toks[j].pos)) ++j;
    std::size_t end = j;
    while (end > i + 1 && (toks[end - 1].pos == Pos::kADP || toks[end - 1].pos == Pos::kDET)) --end;
    VerbPhrase vp;
    vp.tokens.assign(toks.begin() + static_cast<std::ptrdiff_t>(i),
                     toks.begin() + static_cast<std::ptrdiff_t>(end));
    vp.head_verb = toks[i];
    out.push_back(std::move(vp));
    i = j;
  }
  return out;
}

std::string api_simple_name(std::string_view api) {
  std::string s = trim(api);
  bool callable = false;
  auto paren = s.find('(');
  if (paren != std::string::npos) {
    s = s.substr(0, paren);
    callable = true;
  }
  auto lt = s.find('<');
  if (lt != std::string::npos) s = s.substr(0, lt);
  auto dot = s.rfind('.');
  if (dot != std::string::npos) s = s.substr(dot + 1);
  return callable ? s + "()" : s;
}

std::string TextProcessor::resolve_pronouns(std::string_view section_text,
                                            std::string_view owner_api) const {
  const std::string name = api_simple_name(owner_api);
  struct Replacement {
    std::size_t begin, end;
  };
  std::vector<Replacement> reps;
  for (const auto& s : split_sentences(section_text)) {
    const auto& t = s.tokens;
    std::size_t k = 0;
    while (k < t.size() && t[k].kind == TokenKind::kPunct) ++k;
    if (k >= t.size()) continue;
    std::string first = to_lower(t[k].text);
    if (first == "this" && k + 1 < t.size()) {
      std::string next = to_lower(t[k + 1].text);
      if (next == "method" || next == "class" || next == "interface" || next == "constructor") {
        reps.push_back({t[k].start, t[k + 1].end});
        continue;
      }
      if (t[k + 1].pos == Pos::kVB || t[k + 1].pos == Pos::kVBN) reps.push_back({t[k].start, t[k].end});
    } else if (first == "it") {
      reps.push_back({t[k].start, t[k].end});
    }
  }
  std::string out(section_text);
  for (auto it = reps.rbegin(); it != reps.rend(); ++it) {
    out.replace(it->begin, it->end - it->begin, name);
  }
  return out;
}

std::vector<Mention> TextProcessor::detect_api_mentions(const Sentence& sentence,
                                                        std::span<const MarkupSpan> markup) const {
  std::vector<Mention> out;
  const auto& toks = sentence.tokens;
  std::vector<bool> used(toks.size(), false);
  auto text_of = [&](std::size_t a, std::size_t b) {
    return sentence.raw.substr(toks[a].start - sentence.begin, toks[b].end - toks[a].start);
  };

  for (const auto& span : markup) {
    std::size_t first = toks.size(), last = 0;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (toks[i].start >= span.begin && toks[i].end <= span.end) {
        first = std::min(first, i);
        last = std::max(last, i);
      }
    }
    if (first == toks.size()) continue;
    // Trailing punctuation inside <code> (e.g. "remove();") is not part of the name.
    while (last > first && toks[last].kind == TokenKind::kPunct) --last;
    if (toks[first].kind == TokenKind::kPunct) continue;
    for (std::size_t i = first; i <= last; ++i) used[i] = true;
    out.push_back({text_of(first, last), toks[first].start, toks[last].end, first, last});
  }

  std::size_t first_word = toks.size();
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].kind != TokenKind::kPunct) {
      first_word = i;
      break;
    }
  }
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (used[i]) continue;
    const Token& t = toks[i];
    bool hit = t.kind == TokenKind::kApiToken;
    if (!hit && t.kind == TokenKind::kWord && i != first_word && !is_closed_class(to_lower(t.text))) {
      for (const auto& re : res_->type_name_patterns) {
        if (std::regex_match(t.text, re)) {
          hit = true;
          break;
        }
      }
    }
    if (hit) out.push_back({t.text, t.start, t.end, i, i});
  }
  std::sort(out.begin(), out.end(), [](const Mention& a, const Mention& b) { return a.begin < b.begin; });
  return out;
}

std::vector<std::string> TextProcessor::embedding_tokens(std::string_view text) const {
  std::vector<std::string> out;
  for (const auto& t : tokenize(text)) {
    if (t.kind == TokenKind::kPunct) continue;
    out.push_back(to_lower(t.text));
  }
  return out;
}

}  // namespace kgfuse
