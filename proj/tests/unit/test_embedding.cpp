#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "kgfuse/embedding.hpp"
#include "kgfuse/error.hpp"

using namespace kgfuse;
using kgfuse::testing::text;

namespace {

EmbeddingConfig small_config() {
  EmbeddingConfig c;
  c.dim = 16;
  c.window = 2;
  c.epochs = 200;
  c.negative = 3;
  c.seed = 7;
  return c;
}

}  // namespace

TEST_CASE("train_embeddings rejects an empty corpus") {
  try {
    train_embeddings(std::vector<std::vector<std::string>>{}, EmbeddingConfig{});
    FAIL("expected EmptyCorpus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyCorpus);
  }
  CHECK_THROWS_AS(train_embeddings(std::vector<std::string>{"", "  ."}, text(), EmbeddingConfig{}), Error);
}

TEST_CASE("one repeated sentence: every token has a vector, unknowns are zero") {
  std::vector<std::string> corpus(5, "remove the element from the list");
  EmbeddingConfig cfg;
  cfg.epochs = 2;
  auto m = train_embeddings(corpus, text(), cfg);
  CHECK(m.dim() == 128);
  CHECK(m.size() == 5);
  for (const auto& w : m.vocabulary()) {
    auto v = m.vector(w);
    CHECK(v.size() == 128u);
    double n = 0;
    for (float x : v) n += x * x;
    CHECK(n > 0);
  }
  auto z = m.vector("nowhere");
  CHECK(z.size() == 128u);
  for (float x : z) CHECK(x == 0.0f);
}

TEST_CASE("co-occurring words end up closer than words that never meet") {
  const std::vector<std::vector<std::string>> corpus = {
      {"remove", "delete", "item", "list"},
      {"delete", "remove", "entry", "list"},
      {"sunny", "weather", "beach", "sand"},
  };
  auto m = train_embeddings(corpus, small_config());
  const double near = cosine(m.vector("remove"), m.vector("delete"));
  const double far = cosine(m.vector("remove"), m.vector("beach"));
  CHECK(near > far);
}

TEST_CASE("training is deterministic for a fixed seed") {
  const std::vector<std::string> corpus = {"Add an element to the list.", "Remove the element.", "Sort it."};
  auto a = train_embeddings(corpus, text(), EmbeddingConfig{});
  auto b = train_embeddings(corpus, text(), EmbeddingConfig{});
  CHECK(a.serialize() == b.serialize());
  EmbeddingConfig other;
  other.seed = 2;
  CHECK(train_embeddings(corpus, text(), other).serialize() != a.serialize());
}

TEST_CASE("sentence_similarity") {
  const std::vector<std::string> corpus = {"add an element to the list", "remove the first element",
                                           "open a connection to the database"};
  auto m = train_embeddings(corpus, text(), EmbeddingConfig{});
  CHECK(std::abs(sentence_similarity("add the element", "add the element", m, text()) - 1.0) < 1e-9);
  CHECK(sentence_similarity("", "add the element", m, text()) == 0.0);
  CHECK(sentence_similarity("unknown words only", "add the element", m, text()) == 0.0);

  // Independent recomputation of the averaged-vector cosine.
  const std::vector<std::string> a = {"remove", "the", "element"};
  const std::vector<std::string> b = {"open", "a", "connection", "zzz"};
  std::vector<double> va(128, 0.0), vb(128, 0.0);
  for (const auto& t : a)
    for (int k = 0; k < 128; ++k) va[k] += m.vector(t)[k] / 3.0;
  for (const auto& t : b)
    for (int k = 0; k < 128; ++k) vb[k] += m.vector(t)[k] / 4.0;
  double dot = 0, na = 0, nb = 0;
  for (int k = 0; k < 128; ++k) {
    dot += va[k] * vb[k];
    na += va[k] * va[k];
    nb += vb[k] * vb[k];
  }
  CHECK(std::abs(sentence_similarity("Remove the element", "open a connection zzz", m, text()) -
                 dot / std::sqrt(na * nb)) < 1e-9);
}

TEST_CASE("model file round trip") {
  auto m = train_embeddings(std::vector<std::vector<std::string>>{{"a b", "c%d", "e"}}, small_config());
  auto back = EmbeddingModel::parse(m.serialize());
  CHECK(back.vocabulary() == m.vocabulary());
  CHECK(back.serialize() == m.serialize());
  for (const auto& w : m.vocabulary())
    for (int k = 0; k < m.dim(); ++k) CHECK(back.vector(w)[k] == m.vector(w)[k]);
  CHECK_THROWS_AS(EmbeddingModel::parse("16 2\nx 1 2\n"), Error);
}
