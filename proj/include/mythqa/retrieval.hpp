#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mythqa/corpus.hpp"

namespace mythqa {

// Analyzer switches. Defaults keep every surface token.
struct AnalyzerConfig {
  bool remove_stopwords = false;
  bool stem = false;

  friend bool operator==(const AnalyzerConfig&, const AnalyzerConfig&) = default;
};

using TokenStream = std::vector<std::string>;

// normalize_text, then split on whitespace and punctuation. Tokens are never
// empty and never contain punctuation.
TokenStream tokenize(std::string_view text, const AnalyzerConfig& analyzer = {});

// Strips English plural endings ("viruses" -> "viruse", "flies" -> "fly").
std::string stem_plural(std::string_view term);
bool is_stopword(std::string_view term);

struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;

  friend bool operator==(const Bm25Params&, const Bm25Params&) = default;
};

struct Posting {
  std::uint32_t doc;
  std::uint32_t tf;

  friend bool operator==(const Posting&, const Posting&) = default;
};

struct RankedTweet {
  std::string tweet_id;
  double score = 0.0;

  friend bool operator==(const RankedTweet&, const RankedTweet&) = default;
};

// Result order: score descending, then tweet id ascending.
bool ranks_before(const RankedTweet& a, const RankedTweet& b);

class InvertedIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  // Throws InvalidArgument on an empty corpus.
  static InvertedIndex build(const Corpus& corpus, Bm25Params params = {},
                             AnalyzerConfig analyzer = {});

  void save(const std::filesystem::path& path) const;
  static InvertedIndex load(const std::filesystem::path& path);

  // nullptr when the term occurs nowhere.
  const std::vector<Posting>* postings(std::string_view term) const;

  std::size_t doc_count() const noexcept { return doc_ids_.size(); }
  std::size_t term_count() const noexcept { return postings_.size(); }
  std::uint32_t doc_length(std::size_t pos) const { return doc_lengths_.at(pos); }
  const std::string& doc_id(std::size_t pos) const { return doc_ids_.at(pos); }
  double avg_doc_length() const noexcept { return avg_doc_length_; }
  const Bm25Params& params() const noexcept { return params_; }
  const AnalyzerConfig& analyzer() const noexcept { return analyzer_; }

  // ln(1 + (N - df + 0.5) / (df + 0.5))
  double idf(std::size_t df) const;

  // Per-document BM25 scores for a query, one entry per doc position.
  std::vector<double> score_all(std::string_view query) const;

  friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

 private:
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::vector<std::string> doc_ids_;
  std::vector<std::uint32_t> doc_lengths_;
  double avg_doc_length_ = 0.0;
  Bm25Params params_;
  AnalyzerConfig analyzer_;
};

// Top-k documents with a positive BM25 score.
std::vector<RankedTweet> bm25_search(const InvertedIndex& index, std::string_view query,
                                     std::size_t k);

// Ranks the given doc positions only, keeping zero-score members at the tail.
std::vector<RankedTweet> bm25_search_within(const InvertedIndex& index, std::string_view query,
                                            std::size_t k, std::span<const std::size_t> pool);

// Text encoder used by dense retrieval and suggestion reranking.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::string name() const = 0;
};

// Model-free provider: signed feature hashing of tokens, L2-normalized.
class HashingEmbedder final : public EmbeddingProvider {
 public:
  explicit HashingEmbedder(std::size_t dim = 256, std::uint64_t seed = 0);

  std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) const override;
  std::size_t dim() const override { return dim_; }
  std::string name() const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

class DenseIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  DenseIndex() = default;
  DenseIndex(std::vector<std::string> doc_ids, std::size_t dim, std::vector<float> matrix);

  static DenseIndex build(const Corpus& corpus, const EmbeddingProvider& provider,
                          std::size_t batch_size = 64);

  void save(const std::filesystem::path& path) const;
  static DenseIndex load(const std::filesystem::path& path);

  std::size_t doc_count() const noexcept { return doc_ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& doc_id(std::size_t pos) const { return doc_ids_.at(pos); }
  std::span<const float> row(std::size_t pos) const;

  friend bool operator==(const DenseIndex&, const DenseIndex&) = default;

 private:
  std::vector<std::string> doc_ids_;
  std::size_t dim_ = 0;
  std::vector<float> matrix_;  // row-major, doc_count x dim
};

double inner_product(std::span<const float> a, std::span<const float> b);

// Exact top-k by inner product. Throws InvalidArgument on a dimension mismatch.
std::vector<RankedTweet> dense_search(const DenseIndex& index, std::span<const float> query,
                                      std::size_t k);
std::vector<RankedTweet> dense_search(const DenseIndex& index, const EmbeddingProvider& provider,
                                      std::string_view query, std::size_t k);
std::vector<RankedTweet> dense_search_within(const DenseIndex& index,
                                             std::span<const float> query, std::size_t k,
                                             std::span<const std::size_t> pool);

// Retrieval handle shared by the reader, the miner and the suggester.
class Retriever {
 public:
  virtual ~Retriever() = default;
  virtual std::vector<RankedTweet> search(std::string_view query, std::size_t k) const = 0;
  // Ranks only `pool` (doc positions); every pool member is eligible.
  virtual std::vector<RankedTweet> search_within(std::string_view query, std::size_t k,
                                                 std::span<const std::size_t> pool) const = 0;
  virtual std::string name() const = 0;
};

class Bm25Retriever final : public Retriever {
 public:
  explicit Bm25Retriever(std::shared_ptr<const InvertedIndex> index);

  std::vector<RankedTweet> search(std::string_view query, std::size_t k) const override;
  std::vector<RankedTweet> search_within(std::string_view query, std::size_t k,
                                         std::span<const std::size_t> pool) const override;
  std::string name() const override { return "bm25"; }

 private:
  std::shared_ptr<const InvertedIndex> index_;
};

class DenseRetriever final : public Retriever {
 public:
  DenseRetriever(std::shared_ptr<const DenseIndex> index,
                 std::shared_ptr<const EmbeddingProvider> provider);

  std::vector<RankedTweet> search(std::string_view query, std::size_t k) const override;
  std::vector<RankedTweet> search_within(std::string_view query, std::size_t k,
                                         std::span<const std::size_t> pool) const override;
  std::string name() const override { return "dense:" + provider_->name(); }

 private:
  std::vector<float> encode(std::string_view query) const;

  std::shared_ptr<const DenseIndex> index_;
  std::shared_ptr<const EmbeddingProvider> provider_;
};

// Retriever over a corpus with no documents.
class EmptyRetriever final : public Retriever {
 public:
  std::vector<RankedTweet> search(std::string_view, std::size_t) const override { return {}; }
  std::vector<RankedTweet> search_within(std::string_view, std::size_t,
                                         std::span<const std::size_t>) const override {
    return {};
  }
  std::string name() const override { return "empty"; }
};

// Restricts a base retriever to a fixed set of doc positions.
class PoolRetriever final : public Retriever {
 public:
  PoolRetriever(const Retriever& base, std::vector<std::size_t> pool);

  std::vector<RankedTweet> search(std::string_view query, std::size_t k) const override;
  std::vector<RankedTweet> search_within(std::string_view query, std::size_t k,
                                         std::span<const std::size_t> pool) const override;
  std::string name() const override { return "pool:" + base_.name(); }

 private:
  const Retriever& base_;
  std::vector<std::size_t> pool_;
};

}  // namespace mythqa
