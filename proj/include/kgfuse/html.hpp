#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kgfuse/text.hpp"

namespace kgfuse {

// Minimal tolerant DOM for the documentation pages we consume. Text nodes
// have an empty tag; entity references are decoded at parse time.
struct HtmlNode {
  std::string tag;
  std::map<std::string, std::string> attrs;
  std::string text;
  std::vector<HtmlNode> children;

  bool is_text() const { return tag.empty(); }
  bool has_class(std::string_view cls) const;
  std::string attr(const std::string& name) const;

  // Raw concatenated descendant text.
  std::string inner_text() const;

  void visit(const std::function<void(const HtmlNode&)>& fn) const;
  std::vector<const HtmlNode*> find_all(const std::function<bool(const HtmlNode&)>& pred) const;
  // First descendant (preorder, excluding this node) with the given tag and,
  // when non-empty, class.
  const HtmlNode* find(std::string_view tag, std::string_view cls = {}) const;
  std::vector<const HtmlNode*> find_all(std::string_view tag, std::string_view cls = {}) const;
};

HtmlNode parse_html(std::string_view src);

std::string decode_entities(std::string_view s);

// Flattened prose of an element: block boundaries become spaces, whitespace
// is collapsed, and the byte ranges covered by <code> elements are reported
// so mention detection can honour markup.
struct FlatText {
  std::string text;
  std::vector<MarkupSpan> code_spans;
};

FlatText flatten(const HtmlNode& node, const std::vector<std::string>& skip_tags = {});

}  // namespace kgfuse
