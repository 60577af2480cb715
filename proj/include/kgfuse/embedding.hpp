#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgfuse/text.hpp"

namespace kgfuse {

struct EmbeddingConfig {
  int dim = 128;
  int window = 5;
  int epochs = 20;
  int min_count = 1;
  int negative = 5;
  double alpha = 0.025;
  double sample = 0.0;  // sub-sampling threshold, 0 disables
  std::uint64_t seed = 1;
  // More than one thread trains lock-free and is not reproducible.
  int threads = 1;
};

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(int dim, std::vector<std::string> vocab, std::vector<float> vectors);

  int dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocab_; }
  bool contains(std::string_view token) const;
  // Zero vector for unknown tokens.
  std::span<const float> vector(std::string_view token) const;

  // Text format: "dim vocab" header, then one row per token: the
  // percent-escaped token followed by dim reals.
  std::string serialize() const;
  static EmbeddingModel parse(std::string_view contents);
  void save(const std::string& path) const;
  static EmbeddingModel load(const std::string& path);

 private:
  int dim_ = 0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> vectors_;
  std::vector<float> zero_;
};

// Skip-gram with negative sampling over pre-tokenized sentences, in corpus
// order. Throws EmptyCorpus when no sentence has a token.
EmbeddingModel train_embeddings(const std::vector<std::vector<std::string>>& sentences, const EmbeddingConfig& cfg);
EmbeddingModel train_embeddings(const std::vector<std::string>& sentences, const TextProcessor& tp,
                                const EmbeddingConfig& cfg);

// Mean of the token vectors of `text` (unknown tokens count as zero).
std::vector<double> sentence_vector(std::string_view text, const EmbeddingModel& m, const TextProcessor& tp);
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(std::span<const float> a, std::span<const float> b);

// Cosine of averaged token vectors; 0 when either side averages to zero.
double sentence_similarity(std::string_view a, std::string_view b, const EmbeddingModel& m, const TextProcessor& tp);

}  // namespace kgfuse
