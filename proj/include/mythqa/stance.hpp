#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mythqa/corpus.hpp"

namespace mythqa {

// A question paired with one answer, in the textual form fed to stance
// scoring: "<question> Answer is <answer>."
struct Claim {
  std::string question_id;
  std::string answer_text;
  std::string text;
};

Claim make_claim(const Question& question, std::string_view answer_text);

enum class StanceLabel { Supporting = 0, Refuting = 1, Neutral = 2 };

std::string_view to_string(StanceLabel label);
StanceLabel parse_stance_label(std::string_view s);

enum class NliLabel { Entailment, Neutral, Contradiction };

StanceLabel map_nli_label(NliLabel nli);
NliLabel parse_nli_label(std::string_view s);

// Scores indexed by StanceLabel.
using StanceScores = std::array<double, 3>;

// Highest score wins; ties resolve Supporting, then Refuting, then Neutral.
StanceLabel argmax_label(const StanceScores& scores);

struct StanceJudgment {
  StanceLabel label = StanceLabel::Neutral;
  StanceScores scores{0.0, 0.0, 0.0};

  double score(StanceLabel l) const { return scores[static_cast<std::size_t>(l)]; }

  static StanceJudgment from_scores(const StanceScores& scores) {
    return {argmax_label(scores), scores};
  }
};

class StanceScorer {
 public:
  virtual ~StanceScorer() = default;
  // One judgment per tweet, in input order. Must be safe to call concurrently.
  virtual std::vector<StanceJudgment> classify_batch(const Claim& claim,
                                                     std::span<const Tweet> tweets) const = 0;
  virtual std::string name() const = 0;
};

struct LexicalBaselineConfig {
  double threshold = 0.2;
  std::vector<std::string> cues = {"fake",    "false",       "myth",     "debunked",
                                   "hoax",    "not true",    "no evidence", "unlikely",
                                   "does not", "doesn't",    "won't",    "cannot"};
};

// Model-free stand-in for an NLI scorer: Jaccard overlap of token sets gates
// relevance, refutation cues pick Refuting over Supporting.
class LexicalBaselineScorer final : public StanceScorer {
 public:
  explicit LexicalBaselineScorer(LexicalBaselineConfig config = {});

  std::vector<StanceJudgment> classify_batch(const Claim& claim,
                                             std::span<const Tweet> tweets) const override;
  StanceJudgment classify(const Claim& claim, const Tweet& tweet) const;
  std::string name() const override { return "lexical-baseline"; }

  const LexicalBaselineConfig& config() const noexcept { return config_; }

 private:
  LexicalBaselineConfig config_;
  std::vector<std::vector<std::string>> cue_tokens_;
};

// Jaccard overlap of the tokenize() term sets of two texts.
double token_jaccard(std::string_view a, std::string_view b);

}  // namespace mythqa
