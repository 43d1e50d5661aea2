#include <algorithm>
#include <cmath>
#include <numeric>

#include "mythqa/error.hpp"
#include "mythqa/retrieval.hpp"

namespace mythqa {

bool ranks_before(const RankedTweet& a, const RankedTweet& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.tweet_id < b.tweet_id;
}

namespace {

std::vector<RankedTweet> top_k(std::vector<RankedTweet> hits, std::size_t k) {
  if (hits.size() > k) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(),
                      ranks_before);
    hits.resize(k);
  } else {
    std::sort(hits.begin(), hits.end(), ranks_before);
  }
  return hits;
}

void require_k(std::size_t k) {
  if (k == 0) throw InvalidArgument("k must be positive");
}

}  // namespace

InvertedIndex InvertedIndex::build(const Corpus& corpus, Bm25Params params,
                                   AnalyzerConfig analyzer) {
  if (corpus.empty()) throw InvalidArgument("cannot index an empty corpus");
  InvertedIndex idx;
  idx.params_ = params;
  idx.analyzer_ = analyzer;
  idx.doc_ids_.reserve(corpus.size());
  idx.doc_lengths_.reserve(corpus.size());
  std::unordered_map<std::string, std::uint32_t> tf;
  double total = 0.0;
  for (std::size_t pos = 0; pos < corpus.size(); ++pos) {
    const Tweet& t = corpus.at(pos);
    const TokenStream terms = tokenize(t.text, analyzer);
    tf.clear();
    for (const auto& term : terms) ++tf[term];
    for (const auto& [term, count] : tf) {
      idx.postings_[term].push_back({static_cast<std::uint32_t>(pos), count});
    }
    idx.doc_ids_.push_back(t.id);
    idx.doc_lengths_.push_back(static_cast<std::uint32_t>(terms.size()));
    total += static_cast<double>(terms.size());
  }
  idx.avg_doc_length_ = total / static_cast<double>(corpus.size());
  return idx;
}

const std::vector<Posting>* InvertedIndex::postings(std::string_view term) const {
  auto it = postings_.find(std::string(term));
  return it == postings_.end() ? nullptr : &it->second;
}

double InvertedIndex::idf(std::size_t df) const {
  const double n = static_cast<double>(doc_count());
  const double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

std::vector<double> InvertedIndex::score_all(std::string_view query) const {
  std::vector<double> scores(doc_count(), 0.0);
  const double k1 = params_.k1;
  const double b = params_.b;
  // avgdl is 0 only when every doc tokenizes to nothing; no postings exist then.
  const double avgdl = avg_doc_length_ > 0.0 ? avg_doc_length_ : 1.0;
  for (const auto& term : tokenize(query, analyzer_)) {
    const auto* plist = postings(term);
    if (!plist) continue;
    const double w = idf(plist->size());
    for (const Posting& p : *plist) {
      const double tf = p.tf;
      const double norm = k1 * (1.0 - b + b * doc_lengths_[p.doc] / avgdl);
      scores[p.doc] += w * (tf * (k1 + 1.0)) / (tf + norm);
    }
  }
  return scores;
}

std::vector<RankedTweet> bm25_search(const InvertedIndex& index, std::string_view query,
                                     std::size_t k) {
  require_k(k);
  const auto scores = index.score_all(query);
  std::vector<RankedTweet> hits;
  for (std::size_t pos = 0; pos < scores.size(); ++pos) {
    if (scores[pos] > 0.0) hits.push_back({index.doc_id(pos), scores[pos]});
  }
  return top_k(std::move(hits), k);
}

std::vector<RankedTweet> bm25_search_within(const InvertedIndex& index, std::string_view query,
                                            std::size_t k, std::span<const std::size_t> pool) {
  require_k(k);
  const auto scores = index.score_all(query);
  std::vector<RankedTweet> hits;
  hits.reserve(pool.size());
  std::vector<bool> seen(index.doc_count(), false);
  for (std::size_t pos : pool) {
    if (pos >= index.doc_count()) throw InvalidArgument("pool position out of range");
    if (seen[pos]) continue;
    seen[pos] = true;
    hits.push_back({index.doc_id(pos), scores[pos]});
  }
  return top_k(std::move(hits), k);
}

Bm25Retriever::Bm25Retriever(std::shared_ptr<const InvertedIndex> index)
    : index_(std::move(index)) {
  if (!index_) throw InvalidArgument("Bm25Retriever needs an index");
}

std::vector<RankedTweet> Bm25Retriever::search(std::string_view query, std::size_t k) const {
  return bm25_search(*index_, query, k);
}

std::vector<RankedTweet> Bm25Retriever::search_within(std::string_view query, std::size_t k,
                                                      std::span<const std::size_t> pool) const {
  return bm25_search_within(*index_, query, k, pool);
}

PoolRetriever::PoolRetriever(const Retriever& base, std::vector<std::size_t> pool)
    : base_(base), pool_(std::move(pool)) {
  std::sort(pool_.begin(), pool_.end());
  pool_.erase(std::unique(pool_.begin(), pool_.end()), pool_.end());
}

std::vector<RankedTweet> PoolRetriever::search(std::string_view query, std::size_t k) const {
  if (pool_.empty()) return {};
  return base_.search_within(query, k, pool_);
}

std::vector<RankedTweet> PoolRetriever::search_within(std::string_view query, std::size_t k,
                                                      std::span<const std::size_t> pool) const {
  std::vector<std::size_t> sorted(pool.begin(), pool.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> both;
  std::set_intersection(pool_.begin(), pool_.end(), sorted.begin(), sorted.end(),
                        std::back_inserter(both));
  if (both.empty()) return {};
  return base_.search_within(query, k, both);
}

}  // namespace mythqa
