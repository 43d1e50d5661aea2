#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mythqa/corpus.hpp"
#include "mythqa/pipeline.hpp"
#include "mythqa/retrieval.hpp"
#include "mythqa/stance.hpp"

namespace mythqa::metrics {

// Predicted (answer, supporting, refuting) tuple; evidence in rank order.
struct PredictedTuple {
  std::string answer;
  std::vector<std::string> supporting;
  std::vector<std::string> refuting;
};

struct GoldTuple {
  std::string answer;
  std::vector<std::string> supporting;
  std::vector<std::string> refuting;
};

enum class MatchMode { Entity, YesNo };

// Which evidence test the correctness score applies.
enum class EvidenceTest { Ignore, Overlap };

struct TupleScore {
  int se = 0;
  int re = 0;
  double c = 0.0;
};

using AnswerMatchBreakdown = std::vector<TupleScore>;

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 1 iff the two id sets intersect.
int evidence_match(std::span<const std::string> predicted, std::span<const std::string> gold);

// Answers compare by normalize_answer equality. With EvidenceTest::Ignore the
// evidence test always yields 1.
AnswerMatchBreakdown score_tuples(const std::vector<PredictedTuple>& preds,
                                  const std::vector<GoldTuple>& golds, MatchMode mode,
                                  EvidenceTest test = EvidenceTest::Overlap);

// Fractions in [0, 1]. Throws InvalidArgument when n == 0.
PRF f1_from_correctness(std::span<const double> c, std::size_t m, std::size_t n);

// Percentages in [0, 100].
PRF answer_prf(const std::vector<PredictedTuple>& preds, const std::vector<GoldTuple>& golds);
double f1_ans(const std::vector<PredictedTuple>& preds, const std::vector<GoldTuple>& golds);
PRF contro_prf_at_e(const std::vector<PredictedTuple>& preds, const std::vector<GoldTuple>& golds,
                    std::size_t e, MatchMode mode);
double f1_contro_at_e(const std::vector<PredictedTuple>& preds,
                      const std::vector<GoldTuple>& golds, std::size_t e, MatchMode mode);

// 1 iff any of the top-k tweets is supporting or refuting evidence of any gold answer.
int hits_at_k(const std::vector<RankedTweet>& retrieved, const std::vector<GoldTuple>& golds,
              std::size_t k);
// Hits@k scaled by the fraction of gold answers with evidence in the top k. In [0, 1].
double mhits_at_k(const std::vector<RankedTweet>& retrieved, const std::vector<GoldTuple>& golds,
                  std::size_t k);

struct StanceReport {
  std::array<PRF, 3> per_class{};  // indexed by StanceLabel, percentages
  PRF macro;
  std::array<std::array<std::size_t, 3>, 3> confusion{};  // [gold][pred]
  std::size_t pairs = 0;
};

// Throws InvalidArgument on a length mismatch.
StanceReport stance_prf(std::span<const StanceLabel> predicted, std::span<const StanceLabel> gold);

std::vector<GoldTuple> gold_tuples(const QuestionRecord& record);
std::vector<PredictedTuple> predicted_tuples(const QuestionPrediction& prediction);

// One predicted stance for a (question, answer, tweet) pair.
struct StancePair {
  std::string question_id;
  std::string answer;
  std::string tweet_id;
  StanceLabel label = StanceLabel::Neutral;
};

struct GroupScores {
  std::size_t questions = 0;
  double f1_ans = 0.0;
  double prec_ans = 0.0;
  double rec_ans = 0.0;
  std::map<std::size_t, double> f1_contro;
  std::size_t retrieval_questions = 0;
  std::map<std::size_t, double> hits;
  std::map<std::size_t, double> mhits;
};

struct EvalReport {
  GroupScores entity;
  GroupScores yesno;
  GroupScores overall;
  std::optional<StanceReport> stance;
  std::size_t stance_skipped = 0;
};

struct EvalOptions {
  std::vector<std::size_t> e_values = {1, 10, 100};
  std::vector<std::size_t> k_values = {100, 1000};
};

// Dataset-level report: per-question scores averaged within each question
// type and overall. Dataset questions without a prediction score zero;
// predictions for unknown questions throw ValidationError.
EvalReport evaluate(const Dataset& dataset, const std::vector<QuestionPrediction>& predictions,
                    const EvalOptions& options,
                    const std::map<std::string, std::vector<RankedTweet>>* retrieval = nullptr,
                    const std::vector<StancePair>* stance = nullptr);

}  // namespace mythqa::metrics
