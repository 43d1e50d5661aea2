#include "mythqa/suggest.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "mythqa/error.hpp"
#include "mythqa/text.hpp"

namespace mythqa {

QueryTemplate::QueryTemplate(std::string pattern) : pattern_(std::move(pattern)) {
  at_ = pattern_.find(kPlaceholder);
  if (at_ == std::string::npos) {
    throw InvalidArgument("query template '" + pattern_ + "' has no TOPIC_ENTITY placeholder");
  }
  if (pattern_.find(kPlaceholder, at_ + kPlaceholder.size()) != std::string::npos) {
    throw InvalidArgument("query template '" + pattern_ + "' has more than one TOPIC_ENTITY");
  }
}

std::string QueryTemplate::substitute(std::string_view alias) const {
  std::string out = pattern_;
  out.replace(at_, kPlaceholder.size(), alias);
  return out;
}

std::vector<std::string> expand_queries(const QueryTemplate& tmpl,
                                        const std::vector<std::string>& aliases) {
  if (aliases.empty()) throw InvalidArgument("expand_queries: need at least one alias");
  std::vector<std::string> out;
  out.reserve(aliases.size());
  for (const auto& a : aliases) out.push_back(tmpl.substitute(a));
  return out;
}

namespace {

struct PoolEntry {
  std::size_t pos;
  double retrieval;
  double similarity = 0.0;
};

}  // namespace

std::vector<Suggestion> suggest_candidates(const QueryTemplate& tmpl,
                                           const std::vector<std::string>& aliases,
                                           const Corpus& corpus, const EmbeddingProvider* provider,
                                           const Retriever& retriever, const SuggestConfig& cfg) {
  if (cfg.pool_size == 0) throw InvalidArgument("suggest: pool_size must be positive");
  const auto queries = expand_queries(tmpl, aliases);

  std::vector<PoolEntry> pool;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& q : queries) {
    for (const auto& hit : retriever.search(q, cfg.pool_size)) {
      auto [it, fresh] = slot.emplace(hit.tweet_id, pool.size());
      if (fresh) {
        const auto pos = corpus.position(hit.tweet_id);
        if (!pos) throw InvalidArgument("retriever returned unknown tweet '" + hit.tweet_id + "'");
        pool.push_back({*pos, hit.score});
      } else {
        pool[it->second].retrieval = std::max(pool[it->second].retrieval, hit.score);
      }
    }
  }

  std::unordered_set<std::string> seen_text;
  std::erase_if(pool, [&](const PoolEntry& e) {
    const auto& text = corpus.at(e.pos).text;
    return is_retweet(text) || !seen_text.insert(normalize_text(text)).second;
  });
  if (pool.empty()) return {};

  std::vector<std::vector<float>> vecs;
  if (provider) {
    std::vector<std::string> texts = {tmpl.substitute(aliases.front())};
    for (const auto& e : pool) texts.push_back(corpus.at(e.pos).text);
    vecs = provider->embed(texts);
    if (vecs.size() != texts.size()) throw InvalidArgument("suggest: provider returned too few vectors");
    const auto& claim = vecs.front();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      pool[i].similarity = inner_product(claim, vecs[i + 1]);
    }
    vecs.erase(vecs.begin());
  } else {
    for (auto& e : pool) e.similarity = e.retrieval;
  }

  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pool[a].similarity != pool[b].similarity) return pool[a].similarity > pool[b].similarity;
    return corpus.at(pool[a].pos).id < corpus.at(pool[b].pos).id;
  });
  if (order.size() > cfg.pool_size) order.resize(cfg.pool_size);

  std::vector<Suggestion> ranked;
  ranked.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    ranked.push_back({corpus.at(pool[order[r]].pos), -1, pool[order[r]].similarity, r});
  }
  if (cfg.clusters == 0 || ranked.size() < cfg.clusters) return ranked;

  std::vector<std::vector<float>> points;
  points.reserve(order.size());
  if (provider) {
    for (auto i : order) points.push_back(vecs[i]);
  } else {
    // No encoder: cluster on hashed bag-of-words vectors.
    std::vector<std::string> texts;
    for (const auto& s : ranked) texts.push_back(s.tweet.text);
    points = HashingEmbedder().embed(texts);
  }
  const auto km = kmeans(points, cfg.clusters, cfg.kmeans_iters, cfg.seed);
  for (std::size_t r = 0; r < ranked.size(); ++r) ranked[r].cluster = static_cast<int>(km.assignment[r]);

  const std::size_t target = std::min(ranked.size(), cfg.target());
  std::vector<bool> selected(ranked.size(), false);
  std::vector<std::size_t> taken(cfg.clusters, 0);
  std::size_t count = 0;
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    auto& t = taken[km.assignment[r]];
    if (t < cfg.per_cluster) {
      ++t;
      selected[r] = true;
      ++count;
    }
  }
  // Small clusters leave room; fill it with the best remaining tweets.
  for (std::size_t r = 0; r < ranked.size() && count < target; ++r) {
    if (!selected[r]) {
      selected[r] = true;
      ++count;
    }
  }

  std::vector<std::size_t> best_rank(cfg.clusters, ranked.size());
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    if (selected[r]) best_rank[km.assignment[r]] = std::min(best_rank[km.assignment[r]], r);
  }
  std::vector<std::size_t> cluster_order(cfg.clusters);
  for (std::size_t c = 0; c < cfg.clusters; ++c) cluster_order[c] = c;
  std::sort(cluster_order.begin(), cluster_order.end(),
            [&](std::size_t a, std::size_t b) { return best_rank[a] < best_rank[b]; });

  std::vector<Suggestion> out;
  out.reserve(count);
  for (auto c : cluster_order) {
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      if (selected[r] && km.assignment[r] == c) out.push_back(ranked[r]);
    }
  }
  return out;
}

}  // namespace mythqa
