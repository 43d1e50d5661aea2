#include <algorithm>
#include <cmath>

#include "mythqa/error.hpp"
#include "mythqa/retrieval.hpp"

namespace mythqa {

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

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

void check_query(const DenseIndex& index, std::span<const float> query, std::size_t k) {
  if (k == 0) throw InvalidArgument("k must be positive");
  if (query.size() != index.dim()) {
    throw InvalidArgument("query dimension " + std::to_string(query.size()) +
                          " does not match index dimension " + std::to_string(index.dim()));
  }
}

}  // namespace

HashingEmbedder::HashingEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim_ == 0) throw InvalidArgument("embedding dimension must be positive");
}

std::string HashingEmbedder::name() const {
  return "hashing-" + std::to_string(dim_) + "-" + std::to_string(seed_);
}

std::vector<std::vector<float>> HashingEmbedder::embed(const std::vector<std::string>& texts) const {
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<double> acc(dim_, 0.0);
    for (const auto& term : tokenize(text)) {
      const std::uint64_t h = fnv1a(term, seed_);
      acc[h % dim_] += (h >> 63) ? -1.0 : 1.0;
    }
    double norm = 0.0;
    for (double v : acc) norm += v * v;
    norm = std::sqrt(norm);
    std::vector<float> vec(dim_, 0.0f);
    if (norm > 0.0) {
      for (std::size_t i = 0; i < dim_; ++i) vec[i] = static_cast<float>(acc[i] / norm);
    }
    out.push_back(std::move(vec));
  }
  return out;
}

DenseIndex::DenseIndex(std::vector<std::string> doc_ids, std::size_t dim, std::vector<float> matrix)
    : doc_ids_(std::move(doc_ids)), dim_(dim), matrix_(std::move(matrix)) {
  if (matrix_.size() != doc_ids_.size() * dim_) {
    throw InvalidArgument("dense matrix size does not match doc_count x dim");
  }
}

DenseIndex DenseIndex::build(const Corpus& corpus, const EmbeddingProvider& provider,
                             std::size_t batch_size) {
  if (corpus.empty()) throw InvalidArgument("cannot index an empty corpus");
  if (batch_size == 0) batch_size = 1;
  const std::size_t dim = provider.dim();
  std::vector<std::string> ids;
  std::vector<float> matrix;
  ids.reserve(corpus.size());
  matrix.reserve(corpus.size() * dim);
  for (std::size_t begin = 0; begin < corpus.size(); begin += batch_size) {
    const std::size_t end = std::min(corpus.size(), begin + batch_size);
    std::vector<std::string> texts;
    for (std::size_t i = begin; i < end; ++i) texts.push_back(corpus.at(i).text);
    const auto vecs = provider.embed(texts);
    if (vecs.size() != texts.size()) {
      throw InvalidArgument("embedding provider returned " + std::to_string(vecs.size()) +
                            " vectors for " + std::to_string(texts.size()) + " texts");
    }
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      if (vecs[i].size() != dim) {
        throw InvalidArgument("embedding for tweet '" + corpus.at(begin + i).id +
                              "' has dimension " + std::to_string(vecs[i].size()) +
                              ", expected " + std::to_string(dim));
      }
      ids.push_back(corpus.at(begin + i).id);
      matrix.insert(matrix.end(), vecs[i].begin(), vecs[i].end());
    }
  }
  return DenseIndex(std::move(ids), dim, std::move(matrix));
}

std::span<const float> DenseIndex::row(std::size_t pos) const {
  if (pos >= doc_count()) throw InvalidArgument("dense row out of range");
  return std::span<const float>(matrix_).subspan(pos * dim_, dim_);
}

double inner_product(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw InvalidArgument("inner product of vectors with different dimensions");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

std::vector<RankedTweet> dense_search(const DenseIndex& index, std::span<const float> query,
                                      std::size_t k) {
  check_query(index, query, k);
  std::vector<RankedTweet> hits;
  hits.reserve(index.doc_count());
  for (std::size_t pos = 0; pos < index.doc_count(); ++pos) {
    hits.push_back({index.doc_id(pos), inner_product(index.row(pos), query)});
  }
  return top_k(std::move(hits), k);
}

std::vector<RankedTweet> dense_search(const DenseIndex& index, const EmbeddingProvider& provider,
                                      std::string_view query, std::size_t k) {
  auto vecs = provider.embed({std::string(query)});
  if (vecs.size() != 1) throw InvalidArgument("embedding provider returned no query vector");
  return dense_search(index, vecs.front(), k);
}

std::vector<RankedTweet> dense_search_within(const DenseIndex& index,
                                             std::span<const float> query, std::size_t k,
                                             std::span<const std::size_t> pool) {
  check_query(index, query, k);
  std::vector<RankedTweet> hits;
  std::vector<bool> seen(index.doc_count(), false);
  for (std::size_t pos : pool) {
    if (pos >= index.doc_count()) throw InvalidArgument("pool position out of range");
    if (seen[pos]) continue;
    seen[pos] = true;
    hits.push_back({index.doc_id(pos), inner_product(index.row(pos), query)});
  }
  return top_k(std::move(hits), k);
}

DenseRetriever::DenseRetriever(std::shared_ptr<const DenseIndex> index,
                               std::shared_ptr<const EmbeddingProvider> provider)
    : index_(std::move(index)), provider_(std::move(provider)) {
  if (!index_ || !provider_) throw InvalidArgument("DenseRetriever needs an index and a provider");
  if (provider_->dim() != index_->dim()) {
    throw InvalidArgument("provider dimension does not match dense index dimension");
  }
}

std::vector<float> DenseRetriever::encode(std::string_view query) const {
  auto vecs = provider_->embed({std::string(query)});
  if (vecs.size() != 1) throw InvalidArgument("embedding provider returned no query vector");
  return std::move(vecs.front());
}

std::vector<RankedTweet> DenseRetriever::search(std::string_view query, std::size_t k) const {
  return dense_search(*index_, encode(query), k);
}

std::vector<RankedTweet> DenseRetriever::search_within(std::string_view query, std::size_t k,
                                                       std::span<const std::size_t> pool) const {
  return dense_search_within(*index_, encode(query), k, pool);
}

}  // namespace mythqa
