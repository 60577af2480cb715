#include "kgfuse/taskkg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "kgfuse/error.hpp"
#include "kgfuse/stem.hpp"
#include "kgfuse/util.hpp"

namespace kgfuse {

namespace {

bool is_noun_part(Pos p) { return p == Pos::kNN || p == Pos::kNpPart || p == Pos::kDET || p == Pos::kADJ; }

// Same spacing rule as VerbPhrase::text(), so results are substrings of it.
std::string join_tokens(const std::vector<Token>& toks, std::size_t a, std::size_t b) {
  std::string out;
  for (std::size_t i = a; i < b; ++i) {
    if (!out.empty() && toks[i].kind != TokenKind::kPunct) out += ' ';
    out += toks[i].text;
  }
  return out;
}

std::vector<std::string> features(const VerbPhrase& vp) {
  std::vector<std::string> f;
  f.push_back("h=" + to_lower(vp.head_verb.text));
  f.push_back("hs=" + stem(vp.head_verb.text));
  bool has_noun = false;
  for (std::size_t i = 0; i < vp.tokens.size(); ++i) {
    const Token& t = vp.tokens[i];
    if (t.kind == TokenKind::kPunct) continue;
    f.push_back(t.kind == TokenKind::kApiToken ? std::string("w=<api>") : "w=" + to_lower(t.text));
    if (i > 0 && t.pos == Pos::kNN) has_noun = true;
  }
  f.push_back(has_noun ? "noun=1" : "noun=0");
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

VerbPhrase training_phrase(const std::string& text, const TextProcessor& tp) {
  Sentence s = tp.make_sentence(text);
  auto vps = tp.extract_verb_phrases(s);
  if (!vps.empty() && !s.tokens.empty() && vps[0].head_verb.start == s.tokens[0].start) return vps[0];
  VerbPhrase vp;
  vp.tokens = s.tokens;
  if (!s.tokens.empty()) vp.head_verb = s.tokens[0];
  return vp;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

bool contains_keyword(const Sentence& s, const std::string& kw) {
  if (kw.find(' ') != std::string::npos) {
    const std::string hay = " " + to_lower(normalize_space(s.raw)) + " ";
    for (std::size_t pos = hay.find(kw); pos != std::string::npos; pos = hay.find(kw, pos + 1)) {
      const bool left = pos > 0 && !std::isalnum(static_cast<unsigned char>(hay[pos - 1]));
      const std::size_t e = pos + kw.size();
      const bool right = e < hay.size() && !std::isalnum(static_cast<unsigned char>(hay[e]));
      if (left && right) return true;
    }
    return false;
  }
  for (const auto& t : s.tokens)
    if (t.kind != TokenKind::kPunct && to_lower(t.text) == kw) return true;
  return false;
}

bool has_any(const Sentence& s, const std::vector<std::string>& kws) {
  return std::any_of(kws.begin(), kws.end(), [&](const std::string& k) { return contains_keyword(s, k); });
}

struct SentenceWithMarkup {
  Sentence sentence;
  std::vector<MarkupSpan> markup;
};

std::vector<SentenceWithMarkup> sentences_of(const SectionText& st, const TextProcessor& tp, std::string_view src) {
  std::vector<SentenceWithMarkup> out;
  for (auto& s : tp.split_sentences(st.text, src)) out.push_back({std::move(s), st.code_spans});
  return out;
}

std::string merge(const std::vector<std::string>& parts) {
  return join(parts, " ");
}

// Which sections a tutorial walk has opened so far.
struct TutorialBuilder {
  TutorialDocument doc;
  const std::string& code_tag;
  std::vector<std::size_t> heading_stack;
  std::vector<std::size_t> li_stack;

  std::size_t add_section(int level, SectionText title, std::optional<std::size_t> parent) {
    TutorialSection s;
    s.anchor = "s" + std::to_string(doc.sections.size() + 1);
    s.level = level;
    s.title = std::move(title);
    s.parent = parent;
    doc.sections.push_back(std::move(s));
    const std::size_t idx = doc.sections.size() - 1;
    if (parent) doc.sections[*parent].children.push_back(idx);
    return idx;
  }

  std::optional<std::size_t> current_heading() const {
    if (heading_stack.empty()) return std::nullopt;
    return heading_stack.back();
  }

  static SectionText to_section_text(const FlatText& f) { return {f.text, f.code_spans}; }

  static std::string code_text(const HtmlNode& n) {
    std::string t = n.inner_text();
    while (!t.empty() && (t.back() == '\n' || t.back() == ' ' || t.back() == '\r')) t.pop_back();
    std::size_t b = 0;
    while (b < t.size() && t[b] == '\n') ++b;
    return t.substr(b);
  }

  void walk(const HtmlNode& n) {
    for (const auto& c : n.children) visit(c);
  }

  void visit(const HtmlNode& n) {
    if (n.is_text()) {
      if (!trim(n.text).empty() && li_stack.empty()) add_body({normalize_space(n.text), {}});
      return;
    }
    if (n.tag == "h1" || n.tag == "h2" || n.tag == "h3") {
      const int level = n.tag[1] - '0';
      while (!heading_stack.empty() && doc.sections[heading_stack.back()].level >= level) heading_stack.pop_back();
      const std::size_t idx = add_section(level, to_section_text(flatten(n)), current_heading());
      heading_stack.push_back(idx);
      return;
    }
    if (n.tag == "li") {
      std::optional<std::size_t> parent = li_stack.empty() ? current_heading() : std::optional(li_stack.back());
      const int level = 4 + static_cast<int>(li_stack.size());
      const std::size_t idx =
          add_section(level, to_section_text(flatten(n, {"ul", "ol", code_tag})), parent);
      for (const HtmlNode* code : n.find_all(code_tag)) doc.sections[idx].code_boxes.push_back(code_text(*code));
      li_stack.push_back(idx);
      for (const auto& c : n.children)
        if (c.tag == "ul" || c.tag == "ol") visit(c);
      li_stack.pop_back();
      return;
    }
    if (n.tag == code_tag) {
      if (li_stack.empty())
        if (auto h = current_heading()) doc.sections[*h].code_boxes.push_back(code_text(n));
      return;
    }
    if (n.tag == "p" || n.tag == "blockquote" || n.tag == "h4" || n.tag == "h5" || n.tag == "h6") {
      if (li_stack.empty()) add_body(to_section_text(flatten(n)));
      return;
    }
    if (n.tag == "script" || n.tag == "style" || n.tag == "head") return;
    walk(n);
  }

  void add_body(SectionText t) {
    if (t.text.empty()) return;
    if (auto h = current_heading()) doc.sections[*h].body.push_back(std::move(t));
  }
};

}  // namespace

std::vector<LabeledPhrase> parse_labeled_phrases(std::string_view contents) {
  std::vector<LabeledPhrase> out;
  int line_no = 0;
  for (const auto& line : split(contents, '\n')) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto tab = t.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::kConfigError, "labeled phrases line " + std::to_string(line_no) + ": missing tab");
    const std::string label = trim(t.substr(0, tab));
    if (label != "task" && label != "non-task")
      throw Error(ErrorCode::kConfigError,
                  "labeled phrases line " + std::to_string(line_no) + ": unknown label " + label);
    out.push_back({label == "task", trim(t.substr(tab + 1))});
  }
  return out;
}

LinearTaskClassifier LinearTaskClassifier::train(const std::vector<LabeledPhrase>& data, const TextProcessor& tp,
                                                 Options opts) {
  LinearTaskClassifier c;
  std::vector<std::pair<std::vector<std::string>, double>> examples;
  for (const auto& d : data) {
    VerbPhrase vp = training_phrase(d.phrase, tp);
    if (vp.tokens.empty()) continue;
    examples.push_back({features(vp), d.is_task ? 1.0 : 0.0});
  }
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    const double lr = opts.learning_rate / (1.0 + 0.1 * epoch);
    for (const auto& [feats, y] : examples) {
      double z = c.bias_;
      for (const auto& f : feats) z += c.weights_[f];
      const double g = sigmoid(z) - y;
      c.bias_ -= lr * g;
      for (const auto& f : feats) {
        double& w = c.weights_[f];
        w -= lr * (g + opts.l2 * w);
      }
    }
  }
  return c;
}

double LinearTaskClassifier::score(const VerbPhrase& phrase) const {
  double z = bias_;
  for (const auto& f : features(phrase)) {
    auto it = weights_.find(f);
    if (it != weights_.end()) z += it->second;
  }
  return sigmoid(z);
}

std::set<std::string> RuleTaskClassifier::parse_action_verbs(std::string_view contents) {
  std::set<std::string> out;
  for (const auto& line : split(contents, '\n')) {
    std::string t = trim(line);
    if (!t.empty() && t[0] != '#') out.insert(to_lower(t));
  }
  return out;
}

double RuleTaskClassifier::score(const VerbPhrase& phrase) const {
  const std::string head = to_lower(phrase.head_verb.text);
  if (!verbs_.count(head) && !verbs_.count(stem(head))) return 0.0;
  for (std::size_t i = 1; i < phrase.tokens.size(); ++i)
    if (phrase.tokens[i].pos == Pos::kNN || phrase.tokens[i].pos == Pos::kNpPart) return 1.0;
  return 0.0;
}

double classify_task_phrase(const VerbPhrase& phrase, const TaskClassifier& classifier) {
  if (phrase.tokens.empty()) throw Error(ErrorCode::kEmptyPhrase, "empty task phrase");
  return classifier.score(phrase);
}

ActionObject chunk_action_object(const VerbPhrase& phrase) {
  const auto& t = phrase.tokens;
  if (t.empty() || t[0].pos != Pos::kVB) throw Error(ErrorCode::kNoPatternMatch, "phrase does not start with a verb");
  std::size_t i = 1;
  while (i < t.size() && is_noun_part(t[i].pos)) ++i;
  const std::size_t run1_end = i;
  if (i < t.size() && t[i].pos == Pos::kADP) {
    std::size_t j = i + 1;
    while (j < t.size() && is_noun_part(t[j].pos)) ++j;
    if (j > i + 1) {
      ActionObject ao;
      ao.action = to_lower(join_tokens(t, 0, run1_end));
      ao.object = join_tokens(t, i + 1, j);
      return ao;
    }
  }
  if (run1_end == 1) throw Error(ErrorCode::kNoPatternMatch, "no noun after the verb in \"" + phrase.text() + "\"");
  return {to_lower(t[0].text), join_tokens(t, 1, run1_end)};
}

std::vector<ApiPacket> extract_api_packets(const Sentence& sentence, std::span<const MarkupSpan> markup,
                                           const std::optional<std::string>& code_snippet,
                                           const TaskBuildContext& ctx) {
  std::optional<CodeResolver> resolver;
  if (code_snippet) resolver.emplace(*code_snippet, ctx.tp->resources().code_keywords);
  static const TypeTable kEmpty;
  const TypeTable& types = ctx.types ? *ctx.types : kEmpty;
  std::vector<ApiPacket> out;
  for (const auto& m : ctx.tp->detect_api_mentions(sentence, markup))
    out.push_back(packet_for_mention(m.text, resolver ? &*resolver : nullptr, types));
  return out;
}

TaskAttributes extract_task_attributes(const TutorialSection& section, const TaskBuildContext& ctx) {
  const TextProcessor& tp = *ctx.tp;
  TaskAttributes a;
  if (!section.code_boxes.empty()) a.code_snippet = join(section.code_boxes, "\n");

  std::vector<SentenceWithMarkup> all = sentences_of(section.title, tp, section.anchor);
  const std::size_t title_count = all.size();
  for (const auto& b : section.body)
    for (auto& s : sentences_of(b, tp, section.anchor)) all.push_back(std::move(s));

  std::vector<std::string> notes, summary;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i == 0 && title_count > 0) continue;  // the task phrase itself
    const Sentence& s = all[i].sentence;
    if (has_any(s, ctx.keywords.notes)) notes.push_back(trim(s.raw));
    if (has_any(s, ctx.keywords.summary)) summary.push_back(trim(s.raw));
  }
  if (!notes.empty()) a.notes = merge(notes);
  if (!summary.empty()) a.code_summary = merge(summary);

  for (const auto& sm : all) {
    for (auto& p : extract_api_packets(sm.sentence, sm.markup, a.code_snippet, ctx)) {
      a.api_packets.push_back(std::move(p));
      a.packet_contexts.push_back(trim(sm.sentence.raw));
    }
  }
  return a;
}

TutorialDocument parse_tutorial(const HtmlNode& doc, std::string_view doc_id, const std::string& code_tag) {
  TutorialBuilder b{{}, code_tag, {}, {}};
  b.doc.id = std::string(doc_id);
  b.walk(doc);
  return std::move(b.doc);
}

std::string slugify(std::string_view s) {
  std::string out;
  bool dash = false;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      if (dash && !out.empty()) out += '-';
      dash = false;
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      dash = true;
    }
  }
  return out;
}

TaskDocResult build_task_document(const TutorialDocument& doc, const TaskBuildContext& ctx) {
  TaskDocResult r;
  std::vector<std::string> ids(doc.sections.size());
  std::set<std::string> used;
  for (std::size_t i = 0; i < doc.sections.size(); ++i) {
    const TutorialSection& sec = doc.sections[i];
    auto sents = ctx.tp->split_sentences(sec.title.text, sec.anchor);
    if (sents.empty()) continue;
    for (const auto& vp : ctx.tp->extract_verb_phrases(sents.front())) {
      if (classify_task_phrase(vp, *ctx.classifier) < ctx.threshold) continue;
      ActionObject ao;
      try {
        ao = chunk_action_object(vp);
      } catch (const Error&) {
        continue;
      }
      TaskEntity t;
      std::string id = "task:" + doc.id + "/" + slugify(vp.text());
      for (int n = 2; used.count(id); ++n) id = "task:" + doc.id + "/" + slugify(vp.text()) + "-" + std::to_string(n);
      used.insert(id);
      t.id = id;
      t.action = ao.action;
      t.object = ao.object;
      t.phrase = vp.text();
      t.source = doc.id + "#" + sec.anchor;
      TaskAttributes a = extract_task_attributes(sec, ctx);
      t.notes = a.notes;
      t.code_snippet = a.code_snippet;
      t.code_summary = a.code_summary;
      t.api_packets = std::move(a.api_packets);
      t.packet_contexts = std::move(a.packet_contexts);
      ids[i] = t.id;
      r.tasks.push_back(std::move(t));
      break;
    }
  }
  r.relations = extract_task_relations(doc, ids, ctx);

  for (const auto& sec : doc.sections) {
    std::optional<std::string> snippet;
    if (!sec.code_boxes.empty()) snippet = join(sec.code_boxes, "\n");
    std::vector<const SectionText*> texts{&sec.title};
    for (const auto& b : sec.body) texts.push_back(&b);
    for (const SectionText* st : texts) {
      for (const auto& s : ctx.tp->split_sentences(st->text)) {
        TaskSentence ts;
        ts.source = doc.id + "#" + sec.anchor;
        ts.text = s.raw;
        for (const auto& span : st->code_spans) {
          if (span.begin >= s.begin && span.end <= s.begin + s.raw.size())
            ts.markup.push_back({span.begin - s.begin, span.end - s.begin});
        }
        ts.code_snippet = snippet;
        r.sentences.push_back(std::move(ts));
      }
    }
  }
  return r;
}

std::vector<TaskDeclRelation> extract_task_relations(const TutorialDocument& doc,
                                                     const std::vector<std::string>& task_ids,
                                                     const TaskBuildContext& ctx) {
  std::vector<TaskDeclRelation> out;
  // Nearest task ancestor per task section; groups of siblings keyed by it.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < doc.sections.size(); ++i) {
    if (task_ids[i].empty()) continue;
    std::string parent;
    for (auto p = doc.sections[i].parent; p; p = doc.sections[*p].parent) {
      if (!task_ids[*p].empty()) {
        parent = task_ids[*p];
        break;
      }
    }
    if (!parent.empty()) out.push_back({parent, task_ids[i], TaskDeclKind::kParentChild});
    groups[parent].push_back(i);
  }

  auto first_or_last = [&](std::size_t idx, bool last) -> std::string {
    const auto& sec = doc.sections[idx];
    if (sec.body.empty()) return {};
    const auto& text = last ? sec.body.back().text : sec.body.front().text;
    auto sents = ctx.tp->split_sentences(text);
    if (sents.empty()) return {};
    return last ? sents.back().raw : sents.front().raw;
  };

  for (const auto& [parent, members] : groups) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        std::string x = task_ids[members[a]], y = task_ids[members[b]];
        if (y < x) std::swap(x, y);
        out.push_back({x, y, TaskDeclKind::kSibling});
      }
      if (a + 1 < members.size()) {
        const std::string connecting = first_or_last(members[a], true) + " " + first_or_last(members[a + 1], false);
        Sentence s = ctx.tp->make_sentence(connecting);
        if (has_any(s, ctx.keywords.temporal))
          out.push_back({task_ids[members[a]], task_ids[members[a + 1]], TaskDeclKind::kTemporal});
      }
    }
  }
  return out;
}

const TaskEntity* TaskGraph::find(std::string_view id) const {
  auto it = std::lower_bound(tasks.begin(), tasks.end(), id,
                             [](const TaskEntity& t, std::string_view k) { return t.id < k; });
  return it != tasks.end() && it->id == id ? &*it : nullptr;
}

TaskGraph assemble_task_graph(std::vector<TaskDocResult> docs) {
  TaskGraph g;
  std::set<std::string> seen;
  for (auto& d : docs) {
    for (auto& t : d.tasks) {
      if (!seen.insert(t.id).second) {
        g.diagnostics.push_back("id_collision\t" + t.id);
        continue;
      }
      g.tasks.push_back(std::move(t));
    }
    for (auto& r : d.relations) g.relations.push_back(std::move(r));
    for (auto& x : d.diagnostics) g.diagnostics.push_back(std::move(x));
    for (auto& x : d.sentences) g.sentences.push_back(std::move(x));
  }
  std::sort(g.tasks.begin(), g.tasks.end(), [](const TaskEntity& a, const TaskEntity& b) { return a.id < b.id; });
  auto key = [](const TaskDeclRelation& r) { return std::tuple(r.src, r.dst, static_cast<int>(r.kind)); };
  std::sort(g.relations.begin(), g.relations.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  g.relations.erase(std::unique(g.relations.begin(), g.relations.end()), g.relations.end());
  return g;
}

}  // namespace kgfuse
