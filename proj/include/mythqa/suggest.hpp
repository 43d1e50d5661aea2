#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mythqa/corpus.hpp"
#include "mythqa/retrieval.hpp"

namespace mythqa {

// Query pattern with exactly one TOPIC_ENTITY placeholder.
class QueryTemplate {
 public:
  static constexpr std::string_view kPlaceholder = "TOPIC_ENTITY";

  // Throws InvalidArgument unless the placeholder occurs exactly once.
  explicit QueryTemplate(std::string pattern);

  const std::string& pattern() const noexcept { return pattern_; }
  std::string substitute(std::string_view alias) const;

 private:
  std::string pattern_;
  std::size_t at_;
};

std::vector<std::string> expand_queries(const QueryTemplate& tmpl,
                                        const std::vector<std::string>& aliases);

struct KMeansResult {
  std::vector<std::size_t> assignment;
  std::vector<std::vector<double>> centroids;
  std::size_t iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding and Euclidean distance. Stops after
// `iters` rounds or when assignments are stable. A cluster left empty takes
// the point farthest from its own centroid.
KMeansResult kmeans(const std::vector<std::vector<float>>& vectors, std::size_t k,
                    std::size_t iters, std::uint64_t seed);

struct SuggestConfig {
  std::size_t pool_size = 1000;
  std::size_t clusters = 5;
  std::size_t per_cluster = 20;
  std::size_t kmeans_iters = 50;
  std::uint64_t seed = 13;

  std::size_t target() const { return clusters * per_cluster; }
};

struct Suggestion {
  Tweet tweet;
  // -1 when the pool was too small to cluster.
  int cluster = -1;
  double similarity = 0.0;
  // 0-based position in the similarity-ranked pool.
  std::size_t rank = 0;
};

// Expands the template over the aliases, pools the retrieval results, cleans
// them, reranks by similarity to the claim (template with the first alias),
// clusters the top pool_size and keeps the best per_cluster of each cluster.
// `provider` may be null; the pool is then ranked by retrieval score.
std::vector<Suggestion> suggest_candidates(const QueryTemplate& tmpl,
                                           const std::vector<std::string>& aliases,
                                           const Corpus& corpus, const EmbeddingProvider* provider,
                                           const Retriever& retriever, const SuggestConfig& cfg);

}  // namespace mythqa
