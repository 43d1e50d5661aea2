#include "mythqa/mining.hpp"

#include <algorithm>
#include <limits>

#include "mythqa/error.hpp"

namespace mythqa {

void MiningConfig::validate() const {
  if (k == 0) throw InvalidArgument("mining: k must be at least 1");
  if (e == 0) throw InvalidArgument("mining: e must be at least 1");
  if (!(retrieval_blend >= 0.0 && retrieval_blend <= 1.0)) {
    throw InvalidArgument("mining: retrieval_blend must lie in [0, 1]");
  }
}

namespace {

struct Keyed {
  StanceEvidence ev;
  double key;
};

void finish(std::vector<Keyed>& items, std::size_t e, std::vector<StanceEvidence>& out) {
  std::sort(items.begin(), items.end(), [](const Keyed& a, const Keyed& b) {
    if (a.key != b.key) return a.key > b.key;
    return a.ev.tweet_id < b.ev.tweet_id;
  });
  if (items.size() > e) items.resize(e);
  out.reserve(items.size());
  for (auto& it : items) out.push_back(std::move(it.ev));
}

}  // namespace

MiningResult mine_ranked(const Claim& claim, const std::vector<RankedTweet>& ranked,
                         const Corpus& corpus, const StanceScorer& scorer,
                         const MiningConfig& cfg) {
  cfg.validate();
  MiningResult result;
  if (ranked.empty()) return result;

  std::vector<Tweet> tweets;
  tweets.reserve(ranked.size());
  for (const auto& hit : ranked) tweets.push_back(corpus.by_id(hit.tweet_id));
  const auto judgments = scorer.classify_batch(claim, tweets);
  if (judgments.size() != tweets.size()) {
    throw Error("stance scorer '" + scorer.name() + "' returned " +
                std::to_string(judgments.size()) + " judgments for " +
                std::to_string(tweets.size()) + " tweets");
  }

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& hit : ranked) {
    lo = std::min(lo, hit.score);
    hi = std::max(hi, hit.score);
  }
  const double w = cfg.retrieval_blend;

  std::vector<Keyed> sup, ref;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& j = judgments[i];
    if (j.label == StanceLabel::Neutral) continue;
    StanceEvidence ev{ranked[i].tweet_id, j.label, j.score(j.label), ranked[i].score};
    const double rnorm = hi > lo ? (ranked[i].score - lo) / (hi - lo) : 1.0;
    const double key = w == 0.0 ? ev.stance_score : (1.0 - w) * ev.stance_score + w * rnorm;
    (j.label == StanceLabel::Supporting ? sup : ref).push_back({std::move(ev), key});
  }
  finish(sup, cfg.e, result.supporting);
  finish(ref, cfg.e, result.refuting);
  return result;
}

MiningResult mine_contradictory(const Claim& claim, const Retriever& retriever,
                                const Corpus& corpus, const StanceScorer& scorer,
                                const MiningConfig& cfg) {
  cfg.validate();
  return mine_ranked(claim, retriever.search(claim.text, cfg.k), corpus, scorer, cfg);
}

std::unordered_set<std::string> restrict_to_annotated(std::string_view question_id,
                                                      const Dataset& dataset) {
  const auto& rec = dataset.at(question_id);
  std::unordered_set<std::string> pool;
  for (const auto& a : rec.answers) {
    pool.insert(a.supporting.begin(), a.supporting.end());
    pool.insert(a.refuting.begin(), a.refuting.end());
    pool.insert(a.neutral.begin(), a.neutral.end());
  }
  return pool;
}

}  // namespace mythqa
