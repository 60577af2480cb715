#include "kgfuse/apikg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "kgfuse/error.hpp"
#include "kgfuse/stem.hpp"
#include "kgfuse/util.hpp"

namespace kgfuse {

namespace {

std::string strip_generics(std::string_view s) {
  std::string out;
  int depth = 0;
  for (char c : s) {
    if (c == '<') {
      ++depth;
    } else if (c == '>') {
      if (depth > 0) --depth;
    } else if (depth == 0) {
      out += c;
    }
  }
  return out;
}

// Splits on commas that are not nested in (), <> or [].
std::vector<std::string> split_top_level(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '<' || c == '[') ++depth;
    if (c == ')' || c == '>' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

struct ParsedParam {
  std::string type;
  std::string name;
};

struct ParsedSignature {
  std::string name;
  bool callable = false;
  std::vector<ParsedParam> params;
};

ParsedSignature parse_signature(std::string_view raw) {
  ParsedSignature sig;
  const std::string s = normalize_space(raw);
  auto open = s.find('(');
  if (open == std::string::npos) {
    auto words = split(strip_generics(s), ' ');
    sig.name = words.empty() ? std::string() : trim(words.back());
    return sig;
  }
  sig.callable = true;
  std::string head = trim(s.substr(0, open));
  auto sp = head.find_last_of(' ');
  sig.name = sp == std::string::npos ? head : head.substr(sp + 1);
  auto close = s.rfind(')');
  if (close == std::string::npos || close < open) close = s.size();
  const std::string inner = s.substr(open + 1, close - open - 1);
  int idx = 0;
  for (const auto& p : split_top_level(inner)) {
    if (p.empty()) continue;
    std::string erased = strip_generics(p);
    std::vector<std::string> words;
    for (auto& w : split(normalize_space(erased), ' '))
      if (!w.empty() && w != "final") words.push_back(w);
    ParsedParam pp;
    if (words.size() >= 2) {
      pp.name = words.back();
      words.pop_back();
      pp.type = join(words, "");
    } else if (words.size() == 1) {
      pp.type = words[0];
      pp.name = "arg" + std::to_string(idx);
    }
    auto dots = pp.type.find("...");
    if (dots != std::string::npos) pp.type = pp.type.substr(0, dots) + "[]";
    sig.params.push_back(pp);
    ++idx;
  }
  return sig;
}

void fail(std::string_view page_id, std::string_view marker) {
  throw Error(ErrorCode::kMalformedDocument,
              "page " + std::string(page_id) + ": missing marker " + std::string(marker));
}

ApiEntity make_entity(ApiKind kind, std::string qualified, std::string simple) {
  ApiEntity e;
  e.id = api_entity_id(qualified);
  e.kind = kind;
  e.qualified_name = std::move(qualified);
  e.simple_name = std::move(simple);
  return e;
}

void describe(ApiEntity& e, const HtmlNode* block, std::string_view page_id, const TextProcessor& tp,
              const KeywordSet& keywords, std::vector<std::string>& corpus) {
  if (!block) return;
  const std::string flat = flatten(*block).text;
  if (flat.empty()) return;
  const std::string resolved = tp.resolve_pronouns(flat, e.qualified_name);
  auto sents = tp.split_sentences(resolved, std::string(page_id) + "#" + e.qualified_name);
  for (const auto& st : sents) corpus.push_back(trim(st.raw));
  e = attach_sentence_attributes(std::move(e), identify_function_sentences(e, sents),
                                 identify_directive_sentences(sents, keywords));
}

std::string strip_call(std::string_view s) {
  std::string out(s);
  if (out.size() >= 2 && out.compare(out.size() - 2, 2, "()") == 0) out.resize(out.size() - 2);
  return out;
}

}  // namespace

KeywordSet KeywordSet::parse(std::string_view contents) {
  KeywordSet ks;
  for (const auto& line : split(contents, '\n')) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    ks.keywords.push_back(to_lower(t));
  }
  return ks;
}

bool KeywordSet::matches(std::string_view word) const {
  return std::any_of(keywords.begin(), keywords.end(), [&](const std::string& k) { return keyword_matches(k, word); });
}

bool KeywordSet::matches_any(const Sentence& s) const {
  for (const auto& t : s.tokens)
    if (t.kind == TokenKind::kWord && matches(t.text)) return true;
  return false;
}

const ApiEntity* ApiGraph::find(std::string_view id) const {
  auto it = std::lower_bound(entities.begin(), entities.end(), id,
                             [](const ApiEntity& e, std::string_view k) { return e.id < k; });
  return it != entities.end() && it->id == id ? &*it : nullptr;
}

std::vector<Sentence> identify_function_sentences(const ApiEntity& entity, const std::vector<Sentence>& description) {
  std::vector<Sentence> out;
  const std::string want = strip_call(entity.simple_name);
  for (const auto& s : description) {
    std::size_t k = 0;
    while (k < s.tokens.size() && s.tokens[k].kind == TokenKind::kPunct) ++k;
    if (k >= s.tokens.size()) continue;
    if (s.tokens[k].pos == Pos::kVB) {
      out.push_back(s);
      continue;
    }
    for (std::size_t i = k; i < s.tokens.size(); ++i) {
      const Token& t = s.tokens[i];
      if (t.pos == Pos::kVB || t.pos == Pos::kVBN) break;
      if (t.pos == Pos::kNN) {
        if (strip_call(api_simple_name(t.text)) == want) out.push_back(s);
        break;
      }
    }
  }
  return out;
}

std::vector<Sentence> identify_directive_sentences(const std::vector<Sentence>& description,
                                                   const KeywordSet& keywords) {
  std::vector<Sentence> out;
  for (const auto& s : description)
    if (keywords.matches_any(s)) out.push_back(s);
  return out;
}

ApiEntity attach_sentence_attributes(ApiEntity entity, const std::vector<Sentence>& fn,
                                     const std::vector<Sentence>& dir) {
  if (!fn.empty()) {
    std::vector<std::string> parts;
    for (const auto& s : fn) parts.push_back(trim(s.raw));
    entity.function_sentence = join(parts, " ");
  }
  for (const auto& s : dir) entity.directive_sentences.push_back(trim(s.raw));
  return entity;
}

std::vector<std::string> erased_parameter_types(std::string_view signature) {
  std::vector<std::string> out;
  for (const auto& p : parse_signature(signature).params) out.push_back(p.type);
  return out;
}

ApiPageResult parse_api_reference(const HtmlNode& doc, std::string_view page_id, const TextProcessor& tp,
                                  const KeywordSet& keywords) {
  ApiPageResult r;
  r.page_id = std::string(page_id);

  const HtmlNode* subtitle = doc.find("div", "subtitle");
  if (!subtitle) fail(page_id, "div.subtitle");
  const std::string package = trim(subtitle->inner_text());
  if (package.empty()) fail(page_id, "div.subtitle");

  const HtmlNode* title = doc.find("h2", "title");
  if (!title) fail(page_id, "h2.title");
  auto kind = parse_api_kind(title->attr("data-kind"));
  if (!kind || (*kind != ApiKind::kClass && *kind != ApiKind::kInterface && *kind != ApiKind::kException))
    fail(page_id, "h2.title[data-kind]");
  auto title_words = split(normalize_space(strip_generics(title->inner_text())), ' ');
  const std::string simple = title_words.empty() ? std::string() : title_words.back();
  if (simple.empty()) fail(page_id, "h2.title");
  const std::string type_qn = package + "." + simple;

  ApiEntity type = make_entity(*kind, type_qn, simple);
  type.packet = {simple, package, std::nullopt};
  // The type description is the first top-level block outside member tables.
  const HtmlNode* type_block = nullptr;
  for (const HtmlNode* b : doc.find_all("div", "block")) {
    bool in_table = false;
    for (const HtmlNode* t : doc.find_all("table", "memberSummary")) {
      for (const HtmlNode* inner : t->find_all("div", "block"))
        if (inner == b) in_table = true;
    }
    if (!in_table) {
      type_block = b;
      break;
    }
  }
  describe(type, type_block, page_id, tp, keywords, r.sentences);
  r.entities.push_back(type);

  for (const HtmlNode* dl : doc.find_all("dl", "inheritance")) {
    DeclKind rel = DeclKind::kExtend;
    for (const auto& child : dl->children) {
      if (child.tag == "dt") {
        const std::string label = to_lower(trim(child.inner_text()));
        rel = label.rfind("implement", 0) == 0 ? DeclKind::kImplement : DeclKind::kExtend;
      } else if (child.tag == "dd") {
        for (const auto& name : split_top_level(strip_generics(child.inner_text())))
          if (!name.empty()) r.pending.push_back({type.id, name, rel, package});
      }
    }
  }

  for (const HtmlNode* table : doc.find_all("table", "memberSummary")) {
    auto member_kind = parse_api_kind(table->attr("data-kind"));
    if (!member_kind ||
        (*member_kind != ApiKind::kMethod && *member_kind != ApiKind::kField && *member_kind != ApiKind::kConstructor))
      fail(page_id, "table.memberSummary[data-kind]");
    for (const HtmlNode* row : table->find_all("tr")) {
      const HtmlNode* sig_cell = nullptr;
      const HtmlNode* desc_cell = nullptr;
      const HtmlNode* throws_cell = nullptr;
      for (const auto& cell : row->children) {
        if (cell.tag != "td") continue;
        if (cell.has_class("colSignature")) sig_cell = &cell;
        if (cell.has_class("colDescription")) desc_cell = &cell;
        if (cell.has_class("colThrows")) throws_cell = &cell;
      }
      if (!sig_cell) continue;  // header rows
      const HtmlNode* code = sig_cell->find("code");
      const std::string sig_text = trim((code ? code : sig_cell)->inner_text());
      ParsedSignature sig = parse_signature(sig_text);
      if (sig.name.empty()) fail(page_id, "td.colSignature");

      ApiEntity m;
      if (*member_kind == ApiKind::kField) {
        if (sig.callable) fail(page_id, "td.colSignature");
        m = make_entity(ApiKind::kField, type_qn + "." + sig.name, sig.name);
        m.packet = {sig.name, type_qn, std::nullopt};
      } else {
        if (!sig.callable) fail(page_id, "td.colSignature");
        std::vector<std::string> types;
        for (const auto& p : sig.params) types.push_back(p.type);
        const std::string qn = type_qn + "." + sig.name + "(" + join(types, ",") + ")";
        m = make_entity(*member_kind, qn, sig.name + "()");
        m.param_count = static_cast<int>(sig.params.size());
        m.packet = {m.simple_name, type_qn, m.param_count};
      }
      describe(m, desc_cell ? desc_cell->find("div", "block") : nullptr, page_id, tp, keywords, r.sentences);
      const DeclKind has = *member_kind == ApiKind::kMethod  ? DeclKind::kHasMethod
                           : *member_kind == ApiKind::kField ? DeclKind::kHasField
                                                              : DeclKind::kHasConstructor;
      r.relations.push_back({type.id, m.id, has});
      r.entities.push_back(m);

      if (sig.callable) {
        for (const auto& p : sig.params) {
          ApiEntity pe = make_entity(ApiKind::kParameter, m.qualified_name + "#" + p.name, p.name);
          pe.packet = {p.name, m.qualified_name, std::nullopt};
          r.relations.push_back({m.id, pe.id, DeclKind::kHasParameter});
          r.entities.push_back(pe);
        }
      }
      if (throws_cell) {
        for (const HtmlNode* c : throws_cell->find_all("code"))
          for (const auto& name : split_top_level(c->inner_text()))
            if (!name.empty()) r.pending.push_back({m.id, name, DeclKind::kThrow, package});
      }
    }
  }
  return r;
}

ApiGraph assemble_api_graph(std::vector<ApiPageResult> pages) {
  ApiGraph g;
  std::map<std::string, ApiEntity> by_id;
  std::set<std::tuple<std::string, std::string, int>> rels;
  std::vector<PendingRelation> pending;
  std::sort(pages.begin(), pages.end(),
            [](const ApiPageResult& a, const ApiPageResult& b) { return a.page_id < b.page_id; });

  for (auto& page : pages) {
    // Packages have no page of their own; they come from type containers.
    for (const auto& e : page.entities) {
      if (e.kind != ApiKind::kClass && e.kind != ApiKind::kInterface && e.kind != ApiKind::kException) continue;
      const std::string package = e.packet.container.value_or("");
      if (package.empty()) continue;
      ApiEntity pkg = make_entity(ApiKind::kPackage, package, package);
      pkg.packet.name = package;
      by_id.emplace(pkg.id, pkg);
      rels.insert({pkg.id, e.id, static_cast<int>(DeclKind::kContain)});
    }
    for (auto& e : page.entities) {
      auto [it, inserted] = by_id.emplace(e.id, e);
      if (!inserted && !(it->second == e)) {
        g.diagnostics.push_back("id_collision\t" + page.page_id + "\t" + e.id);
      }
    }
    for (auto& r : page.relations) rels.insert({r.src, r.dst, static_cast<int>(r.kind)});
    for (auto& p : page.pending) pending.push_back(p);
    for (auto& x : page.sentences) g.sentences.push_back(std::move(x));
  }

  std::map<std::string, std::vector<std::string>> types_by_simple;
  std::set<std::string> type_qns;
  for (const auto& [id, e] : by_id) {
    if (e.kind == ApiKind::kClass || e.kind == ApiKind::kInterface || e.kind == ApiKind::kException) {
      types_by_simple[e.simple_name].push_back(e.qualified_name);
      type_qns.insert(e.qualified_name);
    }
  }

  for (const auto& p : pending) {
    const std::string name = trim(p.target_name);
    std::string target;
    if (name.find('.') != std::string::npos) {
      if (type_qns.count(name)) target = name;
    } else if (type_qns.count(p.context_package + "." + name)) {
      target = p.context_package + "." + name;
    } else {
      auto it = types_by_simple.find(name);
      if (it != types_by_simple.end() && it->second.size() == 1) target = it->second.front();
    }
    if (target.empty()) {
      g.diagnostics.push_back("unresolved\t" + std::string(to_string(p.kind)) + "\t" + p.src + "\t" + name);
      continue;
    }
    const std::string dst = api_entity_id(target);
    if (dst == p.src) continue;
    rels.insert({p.src, dst, static_cast<int>(p.kind)});
  }

  for (auto& [id, e] : by_id) g.entities.push_back(std::move(e));
  for (const auto& [s, d, k] : rels) g.relations.push_back({s, d, static_cast<DeclKind>(k)});
  std::sort(g.diagnostics.begin(), g.diagnostics.end());
  return g;
}

}  // namespace kgfuse
