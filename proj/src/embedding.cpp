#include "kgfuse/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <thread>

#include "kgfuse/error.hpp"
#include "kgfuse/util.hpp"

namespace kgfuse {

namespace {

constexpr std::string_view kTokenSpecial = " \t\n\r";

// word2vec's linear congruential generator; portable and cheap.
struct Lcg {
  std::uint64_t state;
  std::uint64_t next() {
    state = state * 25214903917ULL + 11;
    return state;
  }
  double uniform() { return static_cast<double>((next() >> 16) & 0xFFFF) / 65536.0; }
};

struct Trainer {
  const EmbeddingConfig& cfg;
  std::vector<std::vector<std::size_t>> corpus;
  std::vector<std::uint64_t> counts;
  std::vector<std::size_t> table;
  std::vector<float> syn0, syn1;
  std::uint64_t total_words = 0;
  std::uint64_t train_words = 0;

  void build_table() {
    const std::size_t size = std::max<std::size_t>(1000, counts.size() * 100);
    table.resize(size);
    double norm = 0;
    for (auto c : counts) norm += std::pow(static_cast<double>(c), 0.75);
    std::size_t w = 0;
    double acc = std::pow(static_cast<double>(counts[0]), 0.75) / norm;
    for (std::size_t a = 0; a < size; ++a) {
      table[a] = w;
      if (static_cast<double>(a) / static_cast<double>(size) > acc && w + 1 < counts.size()) {
        ++w;
        acc += std::pow(static_cast<double>(counts[w]), 0.75) / norm;
      }
    }
  }

  void run_slice(std::size_t begin, std::size_t end, std::uint64_t seed, std::uint64_t word_offset) {
    const int dim = cfg.dim;
    Lcg rng{seed};
    std::vector<float> neu1e(static_cast<std::size_t>(dim));
    std::uint64_t processed = word_offset;
    const double total = static_cast<double>(train_words) * cfg.epochs + 1;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      for (std::size_t si = begin; si < end; ++si) {
        std::vector<std::size_t> sent;
        for (std::size_t w : corpus[si]) {
          if (cfg.sample > 0) {
            const double f = static_cast<double>(counts[w]);
            const double thr = cfg.sample * static_cast<double>(total_words);
            const double keep = (std::sqrt(f / thr) + 1) * thr / f;
            if (keep < rng.uniform()) continue;
          }
          sent.push_back(w);
        }
        processed += corpus[si].size();
        double alpha = cfg.alpha * (1 - static_cast<double>(processed) / total);
        alpha = std::max(alpha, cfg.alpha * 1e-4);
        for (std::size_t pos = 0; pos < sent.size(); ++pos) {
          const int b = static_cast<int>(rng.next() % static_cast<std::uint64_t>(cfg.window));
          for (int a = b; a < cfg.window * 2 + 1 - b; ++a) {
            if (a == cfg.window) continue;
            const long c = static_cast<long>(pos) - cfg.window + a;
            if (c < 0 || c >= static_cast<long>(sent.size())) continue;
            const std::size_t context = sent[static_cast<std::size_t>(c)];
            float* l1 = &syn0[context * static_cast<std::size_t>(dim)];
            std::fill(neu1e.begin(), neu1e.end(), 0.0f);
            for (int d = 0; d <= cfg.negative; ++d) {
              std::size_t target;
              double label;
              if (d == 0) {
                target = sent[pos];
                label = 1;
              } else {
                target = table[(rng.next() >> 16) % table.size()];
                if (target == sent[pos]) continue;
                label = 0;
              }
              float* l2 = &syn1[target * static_cast<std::size_t>(dim)];
              double f = 0;
              for (int k = 0; k < dim; ++k) f += static_cast<double>(l1[k]) * l2[k];
              double g;
              if (f > 6) g = (label - 1) * alpha;
              else if (f < -6) g = label * alpha;
              else g = (label - 1.0 / (1.0 + std::exp(-f))) * alpha;
              for (int k = 0; k < dim; ++k) neu1e[static_cast<std::size_t>(k)] += static_cast<float>(g * l2[k]);
              for (int k = 0; k < dim; ++k) l2[k] += static_cast<float>(g * l1[k]);
            }
            for (int k = 0; k < dim; ++k) l1[k] += neu1e[static_cast<std::size_t>(k)];
          }
        }
      }
    }
  }
};

}  // namespace

EmbeddingModel::EmbeddingModel(int dim, std::vector<std::string> vocab, std::vector<float> vectors)
    : dim_(dim), vocab_(std::move(vocab)), vectors_(std::move(vectors)), zero_(static_cast<std::size_t>(dim), 0.0f) {
  if (vectors_.size() != vocab_.size() * static_cast<std::size_t>(dim))
    throw Error(ErrorCode::kConfigError, "embedding vectors do not match vocabulary size");
  for (std::size_t i = 0; i < vocab_.size(); ++i) index_.emplace(vocab_[i], i);
}

bool EmbeddingModel::contains(std::string_view token) const { return index_.count(std::string(token)) > 0; }

std::span<const float> EmbeddingModel::vector(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return zero_;
  return std::span<const float>(vectors_.data() + it->second * static_cast<std::size_t>(dim_),
                                static_cast<std::size_t>(dim_));
}

std::string EmbeddingModel::serialize() const {
  std::string out = std::to_string(dim_) + " " + std::to_string(vocab_.size()) + "\n";
  char buf[32];
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    out += percent_escape(vocab_[i], kTokenSpecial);
    for (int k = 0; k < dim_; ++k) {
      std::snprintf(buf, sizeof(buf), " %.9g", static_cast<double>(vectors_[i * static_cast<std::size_t>(dim_) + k]));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

EmbeddingModel EmbeddingModel::parse(std::string_view contents) {
  auto lines = split(contents, '\n');
  if (lines.empty()) throw Error(ErrorCode::kConfigError, "embedding file: missing header");
  auto header = split(trim(lines[0]), ' ');
  if (header.size() != 2) throw Error(ErrorCode::kConfigError, "embedding file: bad header");
  const int dim = std::atoi(header[0].c_str());
  const long n = std::atol(header[1].c_str());
  if (dim <= 0 || n < 0) throw Error(ErrorCode::kConfigError, "embedding file: bad header");
  std::vector<std::string> vocab;
  std::vector<float> vecs;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    auto parts = split(trim(lines[li]), ' ');
    if (parts.size() != static_cast<std::size_t>(dim) + 1)
      throw Error(ErrorCode::kConfigError, "embedding file line " + std::to_string(li + 1) + ": wrong width");
    vocab.push_back(percent_unescape(parts[0]));
    for (int k = 1; k <= dim; ++k) vecs.push_back(std::strtof(parts[static_cast<std::size_t>(k)].c_str(), nullptr));
  }
  if (static_cast<long>(vocab.size()) != n)
    throw Error(ErrorCode::kConfigError, "embedding file: expected " + std::to_string(n) + " rows");
  return EmbeddingModel(dim, std::move(vocab), std::move(vecs));
}

void EmbeddingModel::save(const std::string& path) const { write_file(path, serialize()); }

EmbeddingModel EmbeddingModel::load(const std::string& path) { return parse(read_file(path)); }

EmbeddingModel train_embeddings(const std::vector<std::vector<std::string>>& sentences, const EmbeddingConfig& cfg) {
  if (cfg.dim <= 0 || cfg.window <= 0 || cfg.epochs <= 0 || cfg.negative < 0)
    throw Error(ErrorCode::kConfigError, "invalid embedding configuration");
  std::map<std::string, std::uint64_t> freq;
  for (const auto& s : sentences)
    for (const auto& w : s) ++freq[w];
  std::vector<std::pair<std::string, std::uint64_t>> vocab;
  for (auto& [w, c] : freq)
    if (c >= static_cast<std::uint64_t>(cfg.min_count)) vocab.emplace_back(w, c);
  if (vocab.empty()) throw Error(ErrorCode::kEmptyCorpus, "no tokens to train embeddings on");
  std::stable_sort(vocab.begin(), vocab.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  Trainer t{cfg, {}, {}, {}, {}, {}, 0, 0};
  std::unordered_map<std::string, std::size_t> idx;
  std::vector<std::string> words;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    idx.emplace(vocab[i].first, i);
    words.push_back(vocab[i].first);
    t.counts.push_back(vocab[i].second);
    t.total_words += vocab[i].second;
  }
  for (const auto& s : sentences) {
    std::vector<std::size_t> ids;
    for (const auto& w : s) {
      auto it = idx.find(w);
      if (it != idx.end()) ids.push_back(it->second);
    }
    t.train_words += ids.size();
    t.corpus.push_back(std::move(ids));
  }
  t.build_table();

  const std::size_t dim = static_cast<std::size_t>(cfg.dim);
  t.syn0.resize(vocab.size() * dim);
  t.syn1.assign(vocab.size() * dim, 0.0f);
  Lcg init{cfg.seed};
  for (auto& v : t.syn0) v = static_cast<float>((init.uniform() - 0.5) / cfg.dim);

  if (cfg.threads <= 1) {
    t.run_slice(0, t.corpus.size(), cfg.seed, 0);
  } else {
    std::vector<std::thread> pool;
    const std::size_t n = t.corpus.size();
    const std::size_t k = static_cast<std::size_t>(cfg.threads);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t b = n * i / k, e = n * (i + 1) / k;
      pool.emplace_back([&t, b, e, i, &cfg] { t.run_slice(b, e, cfg.seed + i, 0); });
    }
    for (auto& th : pool) th.join();
  }
  return EmbeddingModel(cfg.dim, std::move(words), std::move(t.syn0));
}

EmbeddingModel train_embeddings(const std::vector<std::string>& sentences, const TextProcessor& tp,
                                const EmbeddingConfig& cfg) {
  std::vector<std::vector<std::string>> tok;
  tok.reserve(sentences.size());
  for (const auto& s : sentences) tok.push_back(tp.embedding_tokens(s));
  return train_embeddings(tok, cfg);
}

std::vector<double> sentence_vector(std::string_view text, const EmbeddingModel& m, const TextProcessor& tp) {
  std::vector<double> v(static_cast<std::size_t>(m.dim()), 0.0);
  const auto toks = tp.embedding_tokens(text);
  if (toks.empty()) return v;
  for (const auto& t : toks) {
    auto tv = m.vector(t);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += tv[k];
  }
  for (auto& x : v) x /= static_cast<double>(toks.size());
  return v;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double cosine(std::span<const float> a, std::span<const float> b) {
  std::vector<double> da(a.begin(), a.end()), db(b.begin(), b.end());
  return cosine(std::span<const double>(da), std::span<const double>(db));
}

double sentence_similarity(std::string_view a, std::string_view b, const EmbeddingModel& m, const TextProcessor& tp) {
  const auto va = sentence_vector(a, m, tp);
  const auto vb = sentence_vector(b, m, tp);
  return cosine(std::span<const double>(va), std::span<const double>(vb));
}

}  // namespace kgfuse
