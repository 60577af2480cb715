#include "kgfuse/html.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "kgfuse/util.hpp"

namespace kgfuse {

namespace {

const std::set<std::string, std::less<>> kVoid = {"br", "hr", "img", "meta", "link", "input", "wbr", "col"};
const std::set<std::string, std::less<>> kRawText = {"script", "style"};
const std::set<std::string, std::less<>> kBlock = {
    "p",  "div", "li", "ul", "ol", "dl", "dt",    "dd",    "h1", "h2", "h3", "h4", "h5",   "h6",
    "pre", "table", "tr", "td", "th", "tbody", "thead", "section", "br", "hr", "body", "html", "blockquote"};
// Opening one of these implicitly closes an open <p>.
const std::set<std::string, std::less<>> kClosesP = {"p",  "div", "ul", "ol", "dl", "h1", "h2", "h3",
                                                     "h4", "h5",  "h6", "pre", "table", "section", "blockquote"};

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  HtmlNode run() {
    HtmlNode root;
    root.tag = "#document";
    stack_.push_back(&root);
    while (pos_ < src_.size()) {
      if (src_[pos_] == '<') {
        if (src_.compare(pos_, 4, "<!--") == 0) {
          auto e = src_.find("-->", pos_ + 4);
          pos_ = e == std::string_view::npos ? src_.size() : e + 3;
        } else if (pos_ + 1 < src_.size() && (src_[pos_ + 1] == '!' || src_[pos_ + 1] == '?')) {
          auto e = src_.find('>', pos_);
          pos_ = e == std::string_view::npos ? src_.size() : e + 1;
        } else if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
          close_tag();
        } else if (pos_ + 1 < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_ + 1]))) {
          open_tag();
        } else {
          add_text(src_.substr(pos_, 1));
          ++pos_;
        }
      } else {
        auto e = src_.find('<', pos_);
        if (e == std::string_view::npos) e = src_.size();
        add_text(src_.substr(pos_, e - pos_));
        pos_ = e;
      }
    }
    return root;
  }

 private:
  HtmlNode& top() { return *stack_.back(); }

  void add_text(std::string_view raw) {
    if (raw.empty()) return;
    std::string decoded = decode_entities(raw);
    auto& kids = top().children;
    if (!kids.empty() && kids.back().is_text()) {
      kids.back().text += decoded;
    } else {
      HtmlNode t;
      t.text = std::move(decoded);
      kids.push_back(std::move(t));
    }
  }

  std::string read_name() {
    std::string name;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':') {
        name += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        ++pos_;
      } else {
        break;
      }
    }
    return name;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  void open_tag() {
    ++pos_;
    HtmlNode node;
    node.tag = read_name();
    bool self_closing = false;
    while (pos_ < src_.size()) {
      skip_ws();
      if (pos_ >= src_.size()) break;
      if (src_[pos_] == '>') {
        ++pos_;
        break;
      }
      if (src_[pos_] == '/') {
        self_closing = true;
        ++pos_;
        continue;
      }
      std::string name = read_name();
      if (name.empty()) {
        ++pos_;
        continue;
      }
      skip_ws();
      std::string value;
      if (pos_ < src_.size() && src_[pos_] == '=') {
        ++pos_;
        skip_ws();
        if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'')) {
          char q = src_[pos_++];
          auto e = src_.find(q, pos_);
          if (e == std::string_view::npos) e = src_.size();
          value = decode_entities(src_.substr(pos_, e - pos_));
          pos_ = std::min(e + 1, src_.size());
        } else {
          auto b = pos_;
          while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) && src_[pos_] != '>')
            ++pos_;
          value = decode_entities(src_.substr(b, pos_ - b));
        }
      }
      node.attrs.emplace(std::move(name), std::move(value));
    }

    if (kClosesP.count(node.tag)) implicit_close({"p"}, {});
    if (node.tag == "li") implicit_close({"li"}, {"ul", "ol"});
    if (node.tag == "dt" || node.tag == "dd") implicit_close({"dt", "dd"}, {"dl"});
    if (node.tag == "tr") implicit_close({"tr", "td", "th"}, {"table", "tbody", "thead"});
    if (node.tag == "td" || node.tag == "th") implicit_close({"td", "th"}, {"tr", "table"});

    const std::string tag = node.tag;
    top().children.push_back(std::move(node));
    if (self_closing || kVoid.count(tag)) return;
    if (kRawText.count(tag)) {
      const std::string end = "</" + tag;
      std::size_t e = pos_;
      while (true) {
        e = src_.find("</", e);
        if (e == std::string_view::npos) break;
        if (to_lower(src_.substr(e, end.size())) == end) break;
        ++e;
      }
      if (e == std::string_view::npos) e = src_.size();
      HtmlNode t;
      t.text = std::string(src_.substr(pos_, e - pos_));
      top().children.back().children.push_back(std::move(t));
      auto gt = src_.find('>', e);
      pos_ = gt == std::string_view::npos ? src_.size() : gt + 1;
      return;
    }
    stack_.push_back(&top().children.back());
  }

  // Pops the innermost open element whose tag is in `tags`, provided no
  // element from `barriers` sits above it.
  void implicit_close(std::initializer_list<std::string_view> tags, std::initializer_list<std::string_view> barriers) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const std::string& t = stack_[i]->tag;
      if (std::find(tags.begin(), tags.end(), t) != tags.end()) {
        stack_.resize(i);
        return;
      }
      if (std::find(barriers.begin(), barriers.end(), t) != barriers.end()) return;
    }
  }

  void close_tag() {
    pos_ += 2;
    std::string name = read_name();
    auto gt = src_.find('>', pos_);
    pos_ = gt == std::string_view::npos ? src_.size() : gt + 1;
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->tag == name) {
        stack_.resize(i);
        return;
      }
    }
    // Stray end tag: ignored.
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<HtmlNode*> stack_;
};

void collect_text(const HtmlNode& n, std::string& out) {
  if (n.is_text()) {
    out += n.text;
    return;
  }
  for (const auto& c : n.children) collect_text(c, out);
}

struct Flattener {
  const std::vector<std::string>& skip;
  FlatText out;
  bool pending_space = false;

  void emit(std::string_view s) {
    for (char c : s) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        pending_space = !out.text.empty();
      } else {
        if (pending_space) out.text += ' ';
        pending_space = false;
        out.text += c;
      }
    }
  }

  void walk(const HtmlNode& n) {
    if (n.is_text()) {
      emit(n.text);
      return;
    }
    if (kRawText.count(n.tag)) return;
    if (std::find(skip.begin(), skip.end(), n.tag) != skip.end()) return;
    const bool block = kBlock.count(n.tag) > 0;
    if (block && !out.text.empty()) pending_space = true;
    if (n.tag == "code") {
      if (pending_space) {
        out.text += ' ';
        pending_space = false;
      }
      const std::size_t b = out.text.size();
      for (const auto& c : n.children) walk(c);
      pending_space = false;
      if (out.text.size() > b) out.code_spans.push_back({b, out.text.size()});
      return;
    }
    for (const auto& c : n.children) walk(c);
    if (block && !out.text.empty()) pending_space = true;
  }
};

}  // namespace

bool HtmlNode::has_class(std::string_view cls) const {
  auto it = attrs.find("class");
  if (it == attrs.end()) return false;
  for (const auto& part : split(normalize_space(it->second), ' '))
    if (part == cls) return true;
  return false;
}

std::string HtmlNode::attr(const std::string& name) const {
  auto it = attrs.find(name);
  return it == attrs.end() ? std::string() : it->second;
}

std::string HtmlNode::inner_text() const {
  std::string out;
  collect_text(*this, out);
  return out;
}

void HtmlNode::visit(const std::function<void(const HtmlNode&)>& fn) const {
  for (const auto& c : children) {
    fn(c);
    c.visit(fn);
  }
}

std::vector<const HtmlNode*> HtmlNode::find_all(const std::function<bool(const HtmlNode&)>& pred) const {
  std::vector<const HtmlNode*> out;
  visit([&](const HtmlNode& n) {
    if (pred(n)) out.push_back(&n);
  });
  return out;
}

std::vector<const HtmlNode*> HtmlNode::find_all(std::string_view tag, std::string_view cls) const {
  return find_all([&](const HtmlNode& n) { return n.tag == tag && (cls.empty() || n.has_class(cls)); });
}

const HtmlNode* HtmlNode::find(std::string_view tag, std::string_view cls) const {
  for (const auto& c : children) {
    if (c.tag == tag && (cls.empty() || c.has_class(cls))) return &c;
    if (const HtmlNode* hit = c.find(tag, cls)) return hit;
  }
  return nullptr;
}

HtmlNode parse_html(std::string_view src) { return Parser(src).run(); }

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += '&';
      continue;
    }
    std::string_view ent = s.substr(i + 1, semi - i - 1);
    bool ok = true;
    if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "amp") out += '&';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else if (ent == "nbsp") out += ' ';
    else if (!ent.empty() && ent[0] == '#') {
      unsigned long cp = 0;
      char* end = nullptr;
      std::string num(ent.substr(1));
      if (!num.empty() && (num[0] == 'x' || num[0] == 'X'))
        cp = std::strtoul(num.c_str() + 1, &end, 16);
      else
        cp = std::strtoul(num.c_str(), &end, 10);
      if (end && *end == '\0' && num.size() > 0 && cp > 0 && cp <= 0x10FFFF)
        append_utf8(out, cp);
      else
        ok = false;
    } else {
      ok = false;
    }
    if (ok) {
      i = semi;
    } else {
      out += '&';
    }
  }
  return out;
}

FlatText flatten(const HtmlNode& node, const std::vector<std::string>& skip_tags) {
  Flattener f{skip_tags, {}, false};
  f.walk(node);
  return std::move(f.out);
}

}  // namespace kgfuse
