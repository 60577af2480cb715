#include <doctest.h>

#include "kgfuse/html.hpp"

using namespace kgfuse;

TEST_CASE("decode_entities") {
  CHECK(decode_entities("List&lt;E&gt; &amp; &#65;&#x42; &bogus; &") == "List<E> & AB &bogus; &");
  CHECK(decode_entities("a&nbsp;b") == "a b");
}

TEST_CASE("parse_html builds a tolerant tree") {
  auto doc = parse_html(
      "<!DOCTYPE html><html><body><div class='a b'>x<br>y</div>"
      "<ul><li>one<li>two</ul><p>para<p>next</body></html>");
  const HtmlNode* div = doc.find("div", "b");
  REQUIRE(div);
  CHECK(div->inner_text() == "xy");
  CHECK(doc.find_all("li").size() == 2);
  CHECK(doc.find_all("li")[1]->inner_text() == "two");
  CHECK(doc.find_all("p").size() == 2);
  CHECK(doc.find("span") == nullptr);
}

TEST_CASE("stray and unclosed tags do not lose text") {
  auto doc = parse_html("<div>a</span>b<b>c</div>d");
  CHECK(doc.inner_text() == "abcd");
}

TEST_CASE("script content is raw and skipped by flatten") {
  auto doc = parse_html("<p>a<script>if (x < 3) y();</script>b</p>");
  CHECK(flatten(doc).text == "ab");
}

TEST_CASE("flatten reports code spans") {
  auto doc = parse_html("<p>Call <code>remove()</code> on the\n  <code>List</code>.</p><p>Next</p>");
  auto flat = flatten(doc);
  CHECK(flat.text == "Call remove() on the List. Next");
  REQUIRE(flat.code_spans.size() == 2);
  CHECK(flat.text.substr(flat.code_spans[0].begin, flat.code_spans[0].end - flat.code_spans[0].begin) ==
        "remove()");
  CHECK(flat.text.substr(flat.code_spans[1].begin, flat.code_spans[1].end - flat.code_spans[1].begin) == "List");
  CHECK(flatten(doc, {"code"}).text == "Call on the . Next");
}
