#include "kgfuse/enrich_api.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "kgfuse/error.hpp"
#include "kgfuse/stem.hpp"
#include "kgfuse/util.hpp"

namespace kgfuse {

namespace {

struct CategoryName {
  RelationCategory category;
  std::string_view name;
  std::string_view abbrev;
};

constexpr std::array<CategoryName, kRelationCategoryCount> kCategories{{
    {RelationCategory::kFunctionSimilarity, "FunctionSimilarity", "FS"},
    {RelationCategory::kFunctionOpposite, "FunctionOpposite", "FO"},
    {RelationCategory::kBehaviorDifference, "BehaviorDifference", "BD"},
    {RelationCategory::kFunctionReplace, "FunctionReplace", "FR"},
    {RelationCategory::kFunctionCollaboration, "FunctionCollaboration", "FC"},
    {RelationCategory::kTypeConversion, "TypeConversion", "TC"},
    {RelationCategory::kImplementConstraint, "ImplementConstraint", "IC"},
    {RelationCategory::kLogicConstraint, "LogicConstraint", "LC"},
    {RelationCategory::kEfficiencyComparison, "EfficiencyComparison", "EC"},
}};

const std::set<std::string, std::less<>> kBeForms{"be", "is", "are", "was", "were", "been", "being", "am"};

[[noreturn]] void syntax_error(std::size_t column, const std::string& what) {
  throw Error(ErrorCode::kPatternSyntaxError, "pattern syntax error at column " + std::to_string(column) + ": " + what);
}

class TemplateParser {
 public:
  TemplateParser(std::string_view text, std::size_t column_offset) : s_(text), offset_(column_offset) {}

  std::vector<PatternElement> parse() {
    auto els = parse_seq(0);
    if (pos_ < s_.size()) syntax_error(column(), "unbalanced ')'");
    return els;
  }

  int slot_count(int slot) const { return slot == 1 ? slot1_ : slot2_; }

 private:
  std::size_t column() const { return offset_ + pos_ + 1; }

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == ',')) ++pos_;
  }

  std::vector<PatternElement> parse_seq(int depth) {
    std::vector<PatternElement> out;
    for (;;) {
      skip_space();
      if (pos_ >= s_.size()) {
        if (depth > 0) syntax_error(column(), "unclosed '('");
        return out;
      }
      const char c = s_[pos_];
      if (c == ')') {
        if (depth == 0) syntax_error(column(), "unbalanced ')'");
        return out;
      }
      if (c == '(') {
        const std::size_t open = column();
        ++pos_;
        PatternElement g;
        g.kind = PatternElement::Kind::kOptional;
        g.group = parse_seq(depth + 1);
        ++pos_;  // ')'
        if (g.group.empty()) syntax_error(open, "empty optional group");
        out.push_back(std::move(g));
      } else if (c == '[') {
        out.push_back(parse_alternation());
      } else if (c == ']' || c == '/') {
        syntax_error(column(), std::string("unexpected '") + c + "'");
      } else {
        out.push_back(parse_word(depth));
      }
    }
  }

  PatternElement parse_alternation() {
    const std::size_t open = column();
    const std::size_t close = s_.find(']', pos_);
    if (close == std::string_view::npos) syntax_error(open, "unclosed '['");
    PatternElement e;
    e.kind = PatternElement::Kind::kWords;
    for (const auto& alt : split(s_.substr(pos_ + 1, close - pos_ - 1), '/')) {
      std::vector<std::string> words;
      for (const auto& w : split(normalize_space(alt), ' '))
        if (!w.empty()) words.push_back(to_lower(w));
      if (words.empty()) syntax_error(open, "empty alternative");
      e.alternatives.push_back(std::move(words));
    }
    pos_ = close + 1;
    return e;
  }

  PatternElement parse_word(int depth) {
    const std::size_t start = pos_;
    const std::size_t col = column();
    while (pos_ < s_.size() && std::string_view(" \t,()[]/").find(s_[pos_]) == std::string_view::npos) ++pos_;
    const std::string w(s_.substr(start, pos_ - start));
    PatternElement e;
    if (w == "AE1" || w == "AE2") {
      e.kind = PatternElement::Kind::kSlot;
      e.slot = w == "AE1" ? 1 : 2;
      int& count = e.slot == 1 ? slot1_ : slot2_;
      if (++count > 1) syntax_error(col, w + " appears twice");
      if (depth > 0) syntax_error(col, w + " inside an optional group");
      return e;
    }
    if (w == "NP") {
      e.kind = PatternElement::Kind::kNounPhrase;
      return e;
    }
    Pos p;
    if (w == "VB" || w == "VBN" || w == "ADP" || w == "ADV" || w == "ADJ" || w == "DET" || w == "NN") {
      parse_pos(w, &p);
      e.kind = PatternElement::Kind::kPos;
      e.pos = p;
      return e;
    }
    const bool all_upper =
        w.size() > 1 && std::all_of(w.begin(), w.end(), [](char ch) { return std::isupper(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch)); });
    if (all_upper) syntax_error(col, "unknown element '" + w + "'");
    for (char ch : w) {
      if (!std::isalpha(static_cast<unsigned char>(ch)) && ch != '*' && ch != '-' && ch != '\'')
        syntax_error(col, "bad literal '" + w + "'");
    }
    e.kind = PatternElement::Kind::kWords;
    e.alternatives.push_back({to_lower(w)});
    return e;
  }

  std::string_view s_;
  std::size_t offset_;
  std::size_t pos_ = 0;
  int slot1_ = 0;
  int slot2_ = 0;
};

// A sentence seen as units: each mention is one unit, every other token is
// its own unit.
struct Unit {
  std::optional<std::size_t> mention;
  std::size_t first = 0;
  std::size_t last = 0;
};

class Matcher {
 public:
  Matcher(const Sentence& s, const std::vector<Mention>& mentions) : s_(s) {
    std::vector<std::optional<std::size_t>> owner(s.tokens.size());
    for (std::size_t m = 0; m < mentions.size(); ++m)
      for (std::size_t t = mentions[m].first_token; t <= mentions[m].last_token && t < owner.size(); ++t) owner[t] = m;
    for (std::size_t t = 0; t < s.tokens.size();) {
      if (owner[t]) {
        const std::size_t last = std::min(mentions[*owner[t]].last_token, s.tokens.size() - 1);
        units_.push_back({owner[t], t, last});
        t = last + 1;
      } else {
        units_.push_back({std::nullopt, t, t});
        ++t;
      }
    }
  }

  std::optional<PatternMatch> run(const SentencePattern& p) {
    for (std::size_t start = 0; start < units_.size(); ++start) {
      used_.clear();
      slots_ = {};
      if (seq(p.elements, 0, start, 0, [](std::size_t) { return true; })) {
        PatternMatch m;
        m.category = p.category;
        m.pattern_id = p.id;
        m.mention1 = *slots_[0];
        m.mention2 = *slots_[1];
        for (std::size_t u : used_)
          for (std::size_t t = units_[u].first; t <= units_[u].last; ++t) m.tokens.push_back(t);
        std::sort(m.tokens.begin(), m.tokens.end());
        return m;
      }
    }
    return std::nullopt;
  }

 private:
  using Cont = std::function<bool(std::size_t)>;

  // Matches els[i..] with the first element starting within `gap` units of pos.
  bool seq(const std::vector<PatternElement>& els, std::size_t i, std::size_t pos, std::size_t gap, const Cont& k) {
    if (i == els.size()) return k(pos);
    const PatternElement& el = els[i];
    if (el.kind == PatternElement::Kind::kOptional) {
      if (seq(el.group, 0, pos, gap, [&](std::size_t p) { return seq(els, i + 1, p, kPatternGap, k); })) return true;
      return seq(els, i + 1, pos, gap, k);
    }
    for (std::size_t start = pos; start < units_.size() && start <= pos + gap; ++start) {
      // A gap never skips over another mention: the nearest one is the argument.
      if (start > pos && units_[start - 1].mention) break;
      for (std::size_t end : ends(el, start)) {
        const std::size_t mark = used_.size();
        for (std::size_t u = start; u < end; ++u) used_.push_back(u);
        const auto saved = slots_;
        if (el.kind == PatternElement::Kind::kSlot) slots_[static_cast<std::size_t>(el.slot - 1)] = units_[start].mention;
        if (seq(els, i + 1, end, kPatternGap, k)) return true;
        used_.resize(mark);
        slots_ = saved;
      }
    }
    return false;
  }

  const Token& word(std::size_t u) const { return s_.tokens[units_[u].first]; }
  bool is_word(std::size_t u) const {
    return !units_[u].mention && word(u).kind != TokenKind::kPunct;
  }

  // Possible end positions (exclusive) of `el` starting at unit `u`, in
  // preference order.
  std::vector<std::size_t> ends(const PatternElement& el, std::size_t u) const {
    switch (el.kind) {
      case PatternElement::Kind::kSlot:
        if (units_[u].mention) return {u + 1};
        return {};
      case PatternElement::Kind::kPos: {
        if (!is_word(u)) return {};
        const Token& t = word(u);
        if (el.pos == Pos::kVB) {
          if ((t.pos == Pos::kVB || t.pos == Pos::kVBN) && !kBeForms.count(to_lower(t.text))) return {u + 1};
          return {};
        }
        if (t.pos == el.pos) return {u + 1};
        return {};
      }
      case PatternElement::Kind::kNounPhrase: {
        std::size_t e = u;
        while (e < units_.size() && is_word(e)) {
          const Pos p = word(e).pos;
          if (p != Pos::kDET && p != Pos::kADJ && p != Pos::kNN && p != Pos::kNpPart) break;
          ++e;
        }
        if (e == u) return {};
        return {e};
      }
      case PatternElement::Kind::kWords: {
        std::vector<std::size_t> out;
        for (const auto& alt : el.alternatives) {
          std::size_t e = u;
          bool ok = true;
          for (const auto& w : alt) {
            if (e >= units_.size() || !is_word(e) || !literal_matches(w, word(e).text)) {
              ok = false;
              break;
            }
            ++e;
          }
          if (ok && std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
        }
        return out;
      }
      case PatternElement::Kind::kOptional:
        break;
    }
    return {};
  }

  static bool literal_matches(const std::string& lit, const std::string& text) {
    if (lit == "be") return kBeForms.count(to_lower(text)) > 0;
    return keyword_matches(lit, text);
  }

  const Sentence& s_;
  std::vector<Unit> units_;
  std::vector<std::size_t> used_;
  std::array<std::optional<std::size_t>, 2> slots_;
};

bool strict_subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

std::string_view to_string(RelationCategory c) { return kCategories[static_cast<std::size_t>(c)].name; }

std::string_view abbreviation(RelationCategory c) { return kCategories[static_cast<std::size_t>(c)].abbrev; }

std::optional<RelationCategory> parse_relation_category(std::string_view s) {
  const std::string l = to_lower(trim(s));
  for (const auto& c : kCategories)
    if (l == to_lower(c.name) || l == to_lower(c.abbrev)) return c.category;
  return std::nullopt;
}

SentencePattern compile_pattern(std::string_view spec, std::string id) {
  const std::size_t sep = spec.find("::");
  if (sep == std::string_view::npos) syntax_error(1, "expected 'CATEGORY :: template'");
  auto cat = parse_relation_category(spec.substr(0, sep));
  if (!cat) syntax_error(1, "unknown category '" + trim(spec.substr(0, sep)) + "'");
  const std::string_view body = spec.substr(sep + 2);
  TemplateParser parser(body, sep + 2);
  SentencePattern p;
  p.id = std::move(id);
  p.category = *cat;
  p.source = trim(body);
  p.elements = parser.parse();
  for (int slot : {1, 2})
    if (parser.slot_count(slot) != 1) syntax_error(spec.size() + 1, "missing AE" + std::to_string(slot));
  return p;
}

std::vector<SentencePattern> parse_pattern_file(std::string_view contents) {
  std::vector<SentencePattern> out;
  std::map<RelationCategory, int> seen;
  std::size_t line_no = 0;
  for (const auto& raw : split(contents, '\n')) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    try {
      SentencePattern p = compile_pattern(line);
      p.id = std::string(abbreviation(p.category)) + std::to_string(++seen[p.category]);
      out.push_back(std::move(p));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<PatternMatch> match_patterns(const Sentence& sentence, const std::vector<Mention>& mentions,
                                         const std::vector<SentencePattern>& patterns) {
  std::vector<PatternMatch> found;
  if (mentions.size() < 2) return found;
  Matcher matcher(sentence, mentions);
  for (const auto& p : patterns)
    if (auto m = matcher.run(p)) found.push_back(std::move(*m));
  std::vector<PatternMatch> out;
  for (std::size_t i = 0; i < found.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < found.size() && !dominated; ++j) {
      dominated = j != i && found[j].mention1 == found[i].mention1 && found[j].mention2 == found[i].mention2 &&
                  strict_subset(found[i].tokens, found[j].tokens);
    }
    if (!dominated) out.push_back(found[i]);
  }
  return out;
}

std::vector<RelationSentence> select_relation_sentences(const std::vector<TaskSentence>& sentences,
                                                        const TextProcessor& tp) {
  std::vector<RelationSentence> out;
  for (const auto& ts : sentences) {
    RelationSentence r;
    r.sentence = tp.make_sentence(ts.text, ts.source);
    r.mentions = tp.detect_api_mentions(r.sentence, ts.markup);
    if (r.mentions.size() < 2) continue;
    r.code_snippet = ts.code_snippet;
    out.push_back(std::move(r));
  }
  return out;
}

ApiEnrichResult add_api_semantic_relations(const std::vector<RelationSentence>& sentences,
                                           const std::vector<SentencePattern>& patterns, const ApiLinker& linker) {
  ApiEnrichResult r;
  std::map<std::tuple<std::string, std::string, RelationCategory>, std::vector<RelationEvidence>> merged;
  for (const auto& rs : sentences) {
    std::optional<CodeResolver> code;
    if (rs.code_snippet) code.emplace(*rs.code_snippet, linker.tp->resources().code_keywords);
    const std::string raw = trim(rs.sentence.raw);
    for (const auto& m : match_patterns(rs.sentence, rs.mentions, patterns)) {
      const auto& m1 = rs.mentions[m.mention1];
      const auto& m2 = rs.mentions[m.mention2];
      auto a = linker.link(m1.text, raw, code ? &*code : nullptr);
      auto b = linker.link(m2.text, raw, code ? &*code : nullptr);
      if (!a.api || !b.api) {
        for (const auto* miss : {!a.api ? &m1 : nullptr, !b.api ? &m2 : nullptr})
          if (miss) r.diagnostics.push_back("unlinked\t" + miss->text + "\t" + m.pattern_id + "\t" + raw);
        continue;
      }
      if (*a.api == *b.api) {
        r.diagnostics.push_back("self\t" + *a.api + "\t" + m.pattern_id + "\t" + raw);
        continue;
      }
      auto& ev = merged[{*a.api, *b.api, m.category}];
      RelationEvidence e{raw, m.pattern_id};
      if (std::find(ev.begin(), ev.end(), e) == ev.end()) ev.push_back(std::move(e));
    }
  }
  for (auto& [key, ev] : merged)
    r.relations.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::move(ev)});
  return r;
}

}  // namespace kgfuse
