#include "kgfuse/code_resolver.hpp"

#include <cctype>
#include <regex>

#include "kgfuse/util.hpp"

namespace kgfuse {

namespace {

const std::set<std::string, std::less<>> kControl = {"if",     "for",   "while", "switch", "catch", "synchronized",
                                                     "return", "super", "this",  "throw",  "assert", "new",
                                                     "try",    "else",  "do"};

// Blanks out comments and the contents of string/char literals so later
// scans can ignore them without changing offsets.
std::string mask(std::string_view code) {
  std::string out(code);
  std::size_t i = 0;
  while (i < out.size()) {
    if (out.compare(i, 2, "//") == 0) {
      while (i < out.size() && out[i] != '\n') out[i++] = ' ';
    } else if (out.compare(i, 2, "/*") == 0) {
      std::size_t e = out.find("*/", i + 2);
      e = e == std::string::npos ? out.size() : e + 2;
      for (; i < e; ++i)
        if (out[i] != '\n') out[i] = ' ';
    } else if (out[i] == '"' || out[i] == '\'') {
      const char q = out[i++];
      while (i < out.size() && out[i] != q && out[i] != '\n') {
        if (out[i] == '\\' && i + 1 < out.size()) out[i++] = ' ';
        out[i++] = ' ';
      }
      if (i < out.size()) ++i;
    } else {
      ++i;
    }
  }
  return out;
}

std::string strip_generics(std::string_view s) {
  std::string out;
  int depth = 0;
  for (char c : s) {
    if (c == '<') ++depth;
    else if (c == '>') depth = depth > 0 ? depth - 1 : 0;
    else if (depth == 0) out += c;
  }
  return out;
}

// Index of the bracket closing the one at `open`, or npos.
std::size_t match_forward(std::string_view s, std::size_t open) {
  const char o = s[open];
  const char c = o == '(' ? ')' : o == '<' ? '>' : o == '[' ? ']' : '}';
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == o) ++depth;
    else if (s[i] == c && --depth == 0) return i;
  }
  return std::string_view::npos;
}

std::size_t match_backward(std::string_view s, std::size_t close) {
  const char c = s[close];
  const char o = c == ')' ? '(' : c == '>' ? '<' : '[';
  int depth = 0;
  for (std::size_t i = close + 1; i-- > 0;) {
    if (s[i] == c) ++depth;
    else if (s[i] == o && --depth == 0) return i;
  }
  return std::string_view::npos;
}

bool upper_start(std::string_view s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

bool all_lower_segments(const std::vector<std::string>& segs) {
  for (const auto& s : segs)
    if (s.empty() || upper_start(s)) return false;
  return true;
}

int count_top_level(std::string_view inner) {
  if (trim(inner).empty()) return 0;
  int depth = 0, commas = 0;
  char quote = 0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const char ch = inner[i];
    if (quote) {
      if (ch == '\\') ++i;
      else if (ch == quote) quote = 0;
      continue;
    }
    if (ch == '"' || ch == '\'') quote = ch;
    else if (ch == '(' || ch == '[' || ch == '{' || ch == '<') ++depth;
    else if (ch == ')' || ch == ']' || ch == '}' || ch == '>') --depth;
    else if (ch == ',' && depth == 0) ++commas;
  }
  return commas + 1;
}

}  // namespace

void TypeTable::add(std::string_view qualified_name) {
  std::string qn(qualified_name);
  auto dot = qn.rfind('.');
  by_simple_[dot == std::string::npos ? qn : qn.substr(dot + 1)].insert(qn);
  qualified_.insert(qn);
}

std::string TypeTable::qualify(std::string_view simple_in, const std::vector<std::string>& imports) const {
  const std::string simple = trim(strip_generics(simple_in));
  if (simple.find('.') != std::string::npos) return simple;
  for (const auto& imp : imports) {
    auto dot = imp.rfind('.');
    if (dot != std::string::npos && imp.compare(dot + 1, std::string::npos, simple) == 0) return imp;
  }
  for (const auto& imp : imports) {
    if (imp.size() > 2 && imp.compare(imp.size() - 2, 2, ".*") == 0) {
      std::string cand = imp.substr(0, imp.size() - 1) + simple;
      if (qualified_.count(cand)) return cand;
    }
  }
  auto it = by_simple_.find(simple);
  if (it != by_simple_.end() && it->second.size() == 1) return *it->second.begin();
  return simple;
}

int count_arguments(std::string_view parenthesized) {
  std::string_view s = parenthesized;
  auto open = s.find('(');
  if (open == std::string_view::npos) return 0;
  auto close = s.rfind(')');
  if (close == std::string_view::npos || close < open) close = s.size();
  return count_top_level(s.substr(open + 1, close - open - 1));
}

CodeResolver::CodeResolver(std::string_view code, const std::set<std::string>& keywords) {
  const std::string m = mask(code);

  static const std::regex import_re(R"(\bimport\s+(?:static\s+)?([\w$.]+(?:\.\*)?)\s*;)");
  for (std::sregex_iterator it(m.begin(), m.end(), import_re), end; it != end; ++it)
    imports_.push_back((*it)[1].str());

  static const std::regex decl_re(
      R"(((?:[a-z_][\w$]*\.)*[A-Z][\w$]*)\s*(<[^;=(){}]*>)?\s*((?:\[\s*\]\s*)*)\s+([A-Za-z_$][\w$]*)\s*(?==|;|,|\)|:))");
  for (std::sregex_iterator it(m.begin(), m.end(), decl_re), end; it != end; ++it) {
    const auto pos = static_cast<std::size_t>(it->position(0));
    if (pos > 0 && (is_ident_char(m[pos - 1]) || m[pos - 1] == '.')) continue;
    const std::string var = (*it)[4].str();
    if (kControl.count(var) || keywords.count(var)) continue;
    vars_.emplace(var, (*it)[1].str());
  }

  std::size_t i = 0;
  while (i < m.size()) {
    if (!is_ident_start(m[i]) || (i > 0 && is_ident_char(m[i - 1]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < m.size() && is_ident_char(m[i])) ++i;
    const std::string ident = m.substr(start, i - start);
    std::size_t j = i;
    while (j < m.size() && std::isspace(static_cast<unsigned char>(m[j]))) ++j;

    // Word before the identifier, to spot "new".
    std::size_t b = start;
    while (b > 0 && std::isspace(static_cast<unsigned char>(m[b - 1]))) --b;
    std::size_t wb = b;
    while (wb > 0 && is_ident_char(m[wb - 1])) --wb;
    const bool after_new = m.compare(wb, b - wb, "new") == 0 && b - wb == 3;

    if (after_new && j < m.size() && m[j] == '<') {
      auto gt = match_forward(m, j);
      if (gt == std::string::npos) continue;
      j = gt + 1;
      while (j < m.size() && std::isspace(static_cast<unsigned char>(m[j]))) ++j;
    }
    if (j >= m.size() || m[j] != '(') continue;
    if (!after_new && (kControl.count(ident) || keywords.count(ident))) continue;
    const std::size_t close = match_forward(m, j);
    if (close == std::string::npos) continue;
    std::size_t k = close + 1;
    while (k < m.size() && std::isspace(static_cast<unsigned char>(m[k]))) ++k;
    if (!after_new && (k < m.size() && (m[k] == '{' || m.compare(k, 6, "throws") == 0))) continue;  // declaration

    CallSite call;
    call.offset = start;
    call.param_count = count_top_level(std::string_view(code).substr(j + 1, close - j - 1));
    if (after_new) {
      call.constructor = true;
      call.name = ident + "()";
      call.receiver_type = ident;
    } else {
      call.name = ident + "()";
      if (b > 0 && m[b - 1] == '.') {
        std::size_t r = b - 1;
        while (r > 0 && std::isspace(static_cast<unsigned char>(m[r - 1]))) --r;
        if (r == 0 || m[r - 1] == ')' || m[r - 1] == ']') {
          call.receiver_unknown = true;
        } else {
          std::size_t rs = r;
          while (rs > 0 && (is_ident_char(m[rs - 1]) || m[rs - 1] == '.')) --rs;
          const std::string path = m.substr(rs, r - rs);
          const bool chained = rs > 0 && (m[rs - 1] == ')' || m[rs - 1] == ']');
          auto segs = split(path, '.');
          if (chained || path.empty() || !is_ident_start(path[0])) {
            call.receiver_unknown = true;
          } else if (segs.size() == 1) {
            if (auto t = variable_type(path)) call.receiver_type = *t;
            else if (upper_start(path)) call.receiver_type = path;
            else call.receiver_unknown = true;
          } else {
            std::vector<std::string> head(segs.begin(), segs.end() - 1);
            if (upper_start(segs.back()) && all_lower_segments(head)) call.receiver_type = path;
            else call.receiver_unknown = true;
          }
        }
      }
    }
    calls_.push_back(std::move(call));
  }
}

std::optional<std::string> CodeResolver::variable_type(std::string_view var) const {
  auto it = vars_.find(std::string(var));
  if (it == vars_.end()) return std::nullopt;
  return it->second;
}

ApiPacket packet_for_call(const CallSite& call, const CodeResolver& code, const TypeTable& types) {
  ApiPacket p;
  p.name = call.name;
  if (call.receiver_type) p.container = types.qualify(*call.receiver_type, code.imports());
  p.param_count = call.param_count;
  return p;
}

ApiPacket packet_for_mention(std::string_view mention, const CodeResolver* code, const TypeTable& types) {
  std::string m = trim(mention);
  ApiPacket p;
  bool callable = false;
  std::optional<int> count;
  std::string head = m;
  if (!m.empty() && m.back() == ')') {
    auto open = match_backward(m, m.size() - 1);
    if (open != std::string::npos) {
      callable = true;
      const std::string inner = m.substr(open + 1, m.size() - open - 2);
      if (!trim(inner).empty()) count = count_top_level(inner);
      head = m.substr(0, open);
    }
  }
  const bool chained = head.find(')') != std::string::npos;
  head = strip_generics(head);
  auto dot = head.rfind('.');
  const std::string base = trim(dot == std::string::npos ? head : head.substr(dot + 1));
  const std::string qualifier = dot == std::string::npos || chained ? std::string() : trim(head.substr(0, dot));
  p.name = callable ? base + "()" : base;
  p.param_count = count;
  const std::vector<std::string> no_imports;
  const auto& imports = code ? code->imports() : no_imports;

  if (!qualifier.empty()) {
    auto segs = split(qualifier, '.');
    if (segs.size() == 1 && !upper_start(qualifier)) {
      if (code)
        if (auto t = code->variable_type(qualifier)) p.container = types.qualify(*t, imports);
    } else if (all_lower_segments(segs)) {
      p.container = qualifier;
    } else if (segs.size() == 1) {
      p.container = types.qualify(qualifier, imports);
    } else {
      p.container = qualifier;
    }
  }

  if (callable && code && !chained) {
    for (const auto& call : code->calls()) {
      if (call.name != *p.name) continue;
      ApiPacket cp = packet_for_call(call, *code, types);
      if (p.container && cp.container != p.container) continue;
      if (!p.container) p.container = cp.container;
      if (!p.param_count) p.param_count = cp.param_count;
      break;
    }
  }
  return p;
}

std::vector<ApiPacket> packets_from_code(std::string_view code, const std::set<std::string>& keywords,
                                         const TypeTable& types) {
  CodeResolver r(code, keywords);
  std::vector<ApiPacket> out;
  for (const auto& c : r.calls()) out.push_back(packet_for_call(c, r, types));
  return out;
}

}  // namespace kgfuse
