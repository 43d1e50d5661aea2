#pragma once

// Components that replay the gold annotations. They give an upper bound for
// the pipeline and make end-to-end tests independent of any model.

#include <map>
#include <string>
#include <unordered_map>
#include <utility>

#include "mythqa/corpus.hpp"
#include "mythqa/reader.hpp"
#include "mythqa/stance.hpp"

namespace mythqa::gold {

// For each annotated (question, tweet) pair, returns the gold answer the tweet
// was annotated for (first answer in dataset order when shared).
class GoldExtractor final : public AnswerExtractor {
 public:
  explicit GoldExtractor(const Dataset& dataset);

  std::optional<AnswerSpan> extract_one(const Question& question,
                                        const Tweet& tweet) const override;
  std::string name() const override { return "gold-extractor"; }

 private:
  std::map<std::pair<std::string, std::string>, std::string> table_;
};

// Labels a (claim, tweet) pair with its annotated stance, Neutral otherwise.
// Yes/no claims use YES evidence directly and NO evidence mirrored.
class GoldScorer final : public StanceScorer {
 public:
  explicit GoldScorer(const Dataset& dataset);

  std::vector<StanceJudgment> classify_batch(const Claim& claim,
                                             std::span<const Tweet> tweets) const override;
  std::string name() const override { return "gold-scorer"; }

 private:
  // (question id, normalized answer) -> tweet id -> label
  std::map<std::pair<std::string, std::string>, std::unordered_map<std::string, StanceLabel>>
      labels_;
};

}  // namespace mythqa::gold
