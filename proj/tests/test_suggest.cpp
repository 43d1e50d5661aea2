#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "mythqa/error.hpp"
#include "mythqa/suggest.hpp"
#include "support.hpp"

using namespace mythqa;

namespace {

double within_ss(const std::vector<std::vector<float>>& pts, const std::vector<std::size_t>& assign,
                 std::size_t k) {
  double total = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> mean;
    std::size_t n = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (assign[i] != c) continue;
      if (mean.empty()) mean.assign(pts[i].size(), 0.0);
      for (std::size_t d = 0; d < pts[i].size(); ++d) mean[d] += pts[i][d];
      ++n;
    }
    for (auto& m : mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (assign[i] != c) continue;
      for (std::size_t d = 0; d < pts[i].size(); ++d) total += (pts[i][d] - mean[d]) * (pts[i][d] - mean[d]);
    }
  }
  return total;
}

// Minimum within-cluster sum of squares over every labelling into exactly k
// non-empty clusters.
double brute_force_best(const std::vector<std::vector<float>>& pts, std::size_t k) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> a(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::set<std::size_t> used(a.begin(), a.end());
    if (used.size() == k) best = std::min(best, within_ss(pts, a, k));
    std::size_t i = 0;
    while (i < n && ++a[i] == k) a[i++] = 0;
    if (i == n) break;
  }
  return best;
}

std::shared_ptr<const InvertedIndex> index_of(const Corpus& c) {
  return std::make_shared<const InvertedIndex>(InvertedIndex::build(c));
}

}  // namespace

TEST_SUITE("suggest") {
  TEST_CASE("template and expansion") {
    const QueryTemplate t("shoes can spread TOPIC_ENTITY");
    const auto qs = expand_queries(t, {"COVID-19", "Wuhan virus"});
    REQUIRE(qs.size() == 2);
    CHECK(qs[0] == "shoes can spread COVID-19");
    CHECK(qs[1] == "shoes can spread Wuhan virus");
    CHECK(expand_queries(t, {"x"}).size() == 1);
    CHECK_THROWS_AS(expand_queries(t, {}), InvalidArgument);
    CHECK_THROWS_AS(QueryTemplate("no placeholder"), InvalidArgument);
    CHECK_THROWS_AS(QueryTemplate("TOPIC_ENTITY and TOPIC_ENTITY"), InvalidArgument);
  }

  TEST_CASE("kmeans examples") {
    const std::vector<std::vector<float>> pairs = {{0.0f}, {10.0f}, {0.1f}, {10.1f}};
    const auto r = kmeans(pairs, 2, 50, 1);
    CHECK(r.assignment[0] == r.assignment[2]);
    CHECK(r.assignment[1] == r.assignment[3]);
    CHECK(r.assignment[0] != r.assignment[1]);
    CHECK(within_ss(pairs, r.assignment, 2) == doctest::Approx(brute_force_best(pairs, 2)));

    const auto one = kmeans(pairs, 1, 10, 1);
    for (auto a : one.assignment) CHECK(a == 0);

    const auto each = kmeans(pairs, 4, 10, 1);
    CHECK(std::set<std::size_t>(each.assignment.begin(), each.assignment.end()).size() == 4);
    CHECK(within_ss(pairs, each.assignment, 4) == 0.0);

    CHECK_THROWS_AS(kmeans(pairs, 5, 10, 1), InvalidArgument);
    CHECK_THROWS_AS(kmeans({{1.0f}, {1.0f, 2.0f}}, 1, 10, 1), InvalidArgument);
  }

  TEST_CASE("kmeans is deterministic and every cluster is non-empty") {
    std::mt19937_64 rng(9);
    std::normal_distribution<float> nd;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::vector<float>> pts(30, std::vector<float>(3));
      for (auto& p : pts) {
        for (auto& x : p) x = nd(rng);
      }
      // duplicates force empty-cluster repair
      for (int i = 0; i < 10; ++i) pts[i] = pts[0];
      const std::size_t k = 2 + trial % 6;
      const auto a = kmeans(pts, k, 50, trial);
      const auto b = kmeans(pts, k, 50, trial);
      CHECK(a.assignment == b.assignment);
      CHECK(std::set<std::size_t>(a.assignment.begin(), a.assignment.end()).size() == k);
      CHECK(a.iterations <= 50);
    }
  }

  TEST_CASE("kmeans finds the optimum on separated blobs") {
    std::mt19937_64 rng(4);
    std::normal_distribution<float> nd(0.0f, 0.05f);
    std::vector<std::vector<float>> pts;
    for (float cx : {0.0f, 5.0f, 10.0f}) {
      for (int i = 0; i < 3; ++i) pts.push_back({cx + nd(rng), nd(rng)});
    }
    const auto r = kmeans(pts, 3, 50, 2);
    CHECK(within_ss(pts, r.assignment, 3) == doctest::Approx(brute_force_best(pts, 3)).epsilon(1e-9));
  }

  TEST_CASE("suggest with small pool falls back to ranked pool") {
    const Corpus c = testsupport::make_corpus({{"1", "shoes spread covid"},
                                               {"2", "RT @x: shoes spread covid fast"},
                                               {"3", "shoes do not spread covid"},
                                               {"4", "covid shoes"},
                                               {"5", "gardening"}});
    const Bm25Retriever r(index_of(c));
    const auto out = suggest_candidates(QueryTemplate("shoes spread TOPIC_ENTITY"), {"covid"}, c, nullptr, r, {});
    REQUIRE(out.size() == 3);
    for (const auto& s : out) {
      CHECK(s.cluster == -1);
      CHECK(s.tweet.id != "2");
      CHECK(s.tweet.id != "5");
    }
    for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i - 1].similarity >= out[i].similarity);
  }

  struct Big {
    Corpus corpus;
    std::shared_ptr<const InvertedIndex> idx;
  };

  Big big_corpus(std::size_t n) {
    std::vector<std::pair<std::string, std::string>> rows;
    const char* words[] = {"masks", "vaccine", "shoes", "water", "sun", "garlic", "phone", "air"};
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back({"t" + std::to_string(1000 + i),
                      std::string("covid ") + words[i % 8] + " " + words[(i / 8) % 8] + " w" + std::to_string(i)});
    }
    rows.push_back({"z1", "nothing relevant here"});
    Corpus c = testsupport::make_corpus(rows);
    auto idx = index_of(c);
    return {std::move(c), std::move(idx)};
  }

  TEST_CASE("pool of exactly the target returns everything, clustered") {
    const auto b = big_corpus(100);
    const Bm25Retriever r(b.idx);
    const HashingEmbedder emb(64);
    SuggestConfig cfg;
    const auto out = suggest_candidates(QueryTemplate("TOPIC_ENTITY spread"), {"covid"}, b.corpus, &emb, r, cfg);
    CHECK(out.size() == 100);
    std::set<std::string> ids;
    for (const auto& s : out) {
      ids.insert(s.tweet.id);
      CHECK(s.cluster >= 0);
      CHECK(s.cluster < 5);
    }
    CHECK(ids.size() == 100);
  }

  TEST_CASE("larger pool yields clusters*per_cluster grouped by best rank") {
    const auto b = big_corpus(300);
    const Bm25Retriever r(b.idx);
    const HashingEmbedder emb(64);
    SuggestConfig cfg;
    cfg.clusters = 4;
    cfg.per_cluster = 10;
    const auto out =
        suggest_candidates(QueryTemplate("TOPIC_ENTITY masks"), {"covid", "corona"}, b.corpus, &emb, r, cfg);
    CHECK(out.size() == 40);
    // each cluster appears as one contiguous block, blocks ordered by best rank
    std::vector<int> seen;
    std::size_t last_best = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (i == 0 || out[i].cluster != out[i - 1].cluster) {
        CHECK(std::find(seen.begin(), seen.end(), out[i].cluster) == seen.end());
        seen.push_back(out[i].cluster);
        std::size_t best = out[i].rank;
        for (std::size_t j = i; j < out.size() && out[j].cluster == out[i].cluster; ++j) best = std::min(best, out[j].rank);
        if (i) CHECK(best > last_best);
        last_best = best;
      }
      CHECK(b.corpus.contains(out[i].tweet.id));
    }
    const auto again =
        suggest_candidates(QueryTemplate("TOPIC_ENTITY masks"), {"covid", "corona"}, b.corpus, &emb, r, cfg);
    REQUIRE(again.size() == out.size());
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(again[i].tweet.id == out[i].tweet.id);

    // another seed clusters the same ranked pool
    cfg.seed = 99;
    const auto other =
        suggest_candidates(QueryTemplate("TOPIC_ENTITY masks"), {"covid", "corona"}, b.corpus, &emb, r, cfg);
    CHECK(other.size() == 40);
  }

  TEST_CASE("every suggestion is retrieved by some query") {
    const auto b = big_corpus(120);
    const Bm25Retriever r(b.idx);
    SuggestConfig cfg;
    cfg.pool_size = 50;
    cfg.clusters = 3;
    cfg.per_cluster = 5;
    const std::vector<std::string> aliases = {"vaccine", "water"};
    const QueryTemplate t("TOPIC_ENTITY covid");
    const auto out = suggest_candidates(t, aliases, b.corpus, nullptr, r, cfg);
    CHECK(out.size() == 15);
    std::set<std::string> hit;
    for (const auto& q : expand_queries(t, aliases)) {
      for (const auto& h : r.search(q, cfg.pool_size)) hit.insert(h.tweet_id);
    }
    for (const auto& s : out) CHECK(hit.count(s.tweet.id));
  }
}
