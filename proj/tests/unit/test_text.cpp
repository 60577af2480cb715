#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "kgfuse/util.hpp"

using namespace kgfuse;
using kgfuse::testing::text;

namespace {

std::vector<Pos> tags_of(std::string_view s) {
  std::vector<Pos> out;
  for (const auto& t : text().make_sentence(s).tokens) out.push_back(t.pos);
  return out;
}

std::vector<std::string> mention_texts(const Sentence& s, std::span<const MarkupSpan> markup = {}) {
  std::vector<std::string> out;
  for (const auto& m : text().detect_api_mentions(s, markup)) out.push_back(m.text);
  return out;
}

}  // namespace

TEST_CASE("tokenize keeps calls with arguments as one API token") {
  auto toks = text().tokenize("the method add(index, E) inserts");
  REQUIRE(toks.size() == 4);
  CHECK(toks[2].text == "add(index, E)");
  CHECK(toks[2].kind == TokenKind::kApiToken);
  CHECK(toks[3].text == "inserts");
  CHECK(toks[3].kind == TokenKind::kWord);
}

TEST_CASE("tokenize empty input") { CHECK(text().tokenize("").empty()); }

TEST_CASE("tokenize code keywords and dotted calls") {
  auto toks = text().tokenize("while (it.hasNext())");
  REQUIRE(toks.size() == 4);
  CHECK(toks[0].text == "while");
  CHECK(toks[0].kind == TokenKind::kCodeKeyword);
  CHECK(toks[1].text == "(");
  CHECK(toks[1].kind == TokenKind::kPunct);
  CHECK(toks[2].text == "it.hasNext()");
  CHECK(toks[2].kind == TokenKind::kApiToken);
  CHECK(toks[3].text == ")");
}

TEST_CASE("tokenize treats generics as part of the API token") {
  auto toks = text().tokenize("a Stack<E> and java.util.List<String> here");
  CHECK(toks[1].text == "Stack<E>");
  CHECK(toks[1].kind == TokenKind::kApiToken);
  CHECK(toks[3].text == "java.util.List<String>");
}

TEST_CASE("token spans are in range and non-overlapping") {
  std::mt19937 rng(7);
  const std::vector<std::string> parts = {"add(int, E)", "the", "List", "java.util.Map", ".", ",",
                                          "hasNext()", "while", "42", "3.5", "(", ")", "it's",
                                          "e.g.", "SQLException", "x.y().z()", "don't", "élan"};
  for (int round = 0; round < 200; ++round) {
    std::string s;
    int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      s += parts[rng() % parts.size()];
      s += (rng() % 3 == 0) ? "" : " ";
    }
    auto toks = text().tokenize(s);
    std::size_t last_end = 0;
    for (const auto& t : toks) {
      CHECK(t.start >= last_end);
      CHECK(t.end > t.start);
      CHECK(t.end <= s.size());
      CHECK(s.substr(t.start, t.end - t.start) == t.text);
      if (t.kind == TokenKind::kApiToken) CHECK(text().is_api_orthography(t.text));
      last_end = t.end;
    }
  }
}

TEST_CASE("split_sentences merges a sentence starting with a conjunction") {
  auto s = text().split_sentences(
      "In order to update the database you need to use a Statement. But, instead of calling the "
      "executeQuery() method, you call the executeUpdate() method.");
  CHECK(s.size() == 1);
  CHECK(text().split_sentences("Reads a single character.").size() == 1);
  auto two = text().split_sentences("A runs. C waits.");
  REQUIRE(two.size() == 2);
  CHECK(two[0].raw == "A runs.");
  CHECK(two[1].raw == "C waits.");
}

TEST_CASE("split_sentences does not split inside API tokens or abbreviations") {
  auto s = text().split_sentences("Call java.util.List.add() now, e.g. with 1.5 items. Done.");
  REQUIRE(s.size() == 2);
  CHECK(s[0].raw == "Call java.util.List.add() now, e.g. with 1.5 items.");
}

TEST_CASE("split_sentences reconstructs the input and never starts with a conjunction") {
  const std::string src =
      "It works. And it also fails. So what? Yet another line! Nothing else. or lower case. "
      "Finally done";
  auto sents = text().split_sentences(src);
  std::string joined;
  for (const auto& s : sents) {
    CHECK(src.substr(s.begin, s.raw.size()) == s.raw);
    joined += s.raw;
    std::string first = to_lower(s.tokens.front().text);
    CHECK(text().resources().conjunctions.count(first) == 0);
  }
  auto strip = [](std::string x) {
    std::string o;
    for (char c : x)
      if (!isspace(static_cast<unsigned char>(c))) o += c;
    return o;
  };
  CHECK(strip(joined) == strip(src));
  CHECK(sents.size() == 3);
}

TEST_CASE("pos_tag uses the shipped lexicon") {
  CHECK(tags_of("Reads a single character") == std::vector<Pos>{Pos::kVB, Pos::kDET, Pos::kADJ, Pos::kNN});
  CHECK(tags_of("remove element from Collection") ==
        std::vector<Pos>{Pos::kVB, Pos::kNN, Pos::kADP, Pos::kNN});
  auto toks = text().tokenize("List");
  toks[0].kind = TokenKind::kApiToken;
  CHECK(text().pos_tag(toks)[0].pos == Pos::kNN);
}

TEST_CASE("pos_tag is deterministic") {
  const std::string s = "Sort the list, then return the set of keys to the caller.";
  CHECK(tags_of(s) == tags_of(s));
  auto t = tags_of(s);
  CHECK(t[0] == Pos::kVB);
  CHECK(t[2] == Pos::kNN);  // "list" after a determiner
}

TEST_CASE("extract_verb_phrases") {
  auto vps = text().extract_verb_phrases(text().make_sentence("Convert Set to List"));
  REQUIRE(vps.size() == 1);
  CHECK(vps[0].text() == "Convert Set to List");
  CHECK(vps[0].head_verb.text == "Convert");

  CHECK(text().extract_verb_phrases(text().make_sentence("the list of items")).empty());

  auto pass = text().extract_verb_phrases(text().make_sentence("pass the set as parameter to addAll()"));
  REQUIRE(pass.size() == 1);
  CHECK(pass[0].tokens.size() == 7);
}

TEST_CASE("resolve_pronouns") {
  CHECK(text().resolve_pronouns("It returns the head of the queue.", "Queue.peek()") ==
        "peek() returns the head of the queue.");
  CHECK(text().resolve_pronouns("Returns the head.", "Queue.peek()") == "Returns the head.");
  CHECK(text().resolve_pronouns("They may throw.", "Queue.peek()") == "They may throw.");
  CHECK(text().resolve_pronouns("An ordered collection. This interface extends Collection.",
                                "java.util.List") == "An ordered collection. List extends Collection.");
}

TEST_CASE("detect_api_mentions") {
  const std::string src = "remove() element from collection";
  Sentence s = text().make_sentence(src);
  MarkupSpan code{0, 8};
  CHECK(mention_texts(s, std::span<const MarkupSpan>(&code, 1)) == std::vector<std::string>{"remove()"});
  CHECK(mention_texts(text().make_sentence("the list of items")).empty());
  CHECK(mention_texts(text().make_sentence("use ListIterator instead of Iterator")) ==
        std::vector<std::string>{"ListIterator", "Iterator"});
  CHECK(mention_texts(text().make_sentence("Convert List to Set")) ==
        std::vector<std::string>{"List", "Set"});
}

TEST_CASE("tokenize never splits a detected mention") {
  for (std::string s : {"call list.add(\"a, b\") then Map.Entry<K, V> and x.y().z(1)",
                        "the ConcurrentHashMap and java.util.HashTable class"}) {
    Sentence sent = text().make_sentence(s);
    for (const auto& m : text().detect_api_mentions(sent)) CHECK(m.first_token == m.last_token);
  }
}
