#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "mythqa/corpus.hpp"
#include "mythqa/retrieval.hpp"
#include "mythqa/stance.hpp"

namespace mythqa {

struct StanceEvidence {
  std::string tweet_id;
  StanceLabel label = StanceLabel::Supporting;
  double stance_score = 0.0;
  double retrieval_score = 0.0;
};

struct MiningResult {
  std::vector<StanceEvidence> supporting;
  std::vector<StanceEvidence> refuting;
};

struct MiningConfig {
  std::size_t k = 100;
  std::size_t e = 1;
  // Weight of the (min-max normalized) retrieval score in the evidence rank
  // key. 0 ranks by stance score alone.
  double retrieval_blend = 0.0;

  void validate() const;
};

// Classifies an already-retrieved list against the claim and keeps the top-e
// supporting and top-e refuting tweets.
MiningResult mine_ranked(const Claim& claim, const std::vector<RankedTweet>& ranked,
                         const Corpus& corpus, const StanceScorer& scorer,
                         const MiningConfig& cfg);

// Retrieves top-k tweets for the claim text, then mine_ranked.
MiningResult mine_contradictory(const Claim& claim, const Retriever& retriever,
                                const Corpus& corpus, const StanceScorer& scorer,
                                const MiningConfig& cfg);

// All tweet ids annotated (any stance) for any gold answer of the question.
std::unordered_set<std::string> restrict_to_annotated(std::string_view question_id,
                                                      const Dataset& dataset);

}  // namespace mythqa
