#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mythqa/corpus.hpp"
#include "mythqa/mining.hpp"
#include "mythqa/reader.hpp"
#include "mythqa/retrieval.hpp"
#include "mythqa/stance.hpp"

namespace mythqa {

// Intrinsic: candidate tweets are the gold-annotated tweets of the question.
// Extrinsic: candidate tweets come from the whole corpus.
enum class EvalMode { Intrinsic, Extrinsic };

std::string_view to_string(EvalMode mode);
EvalMode parse_eval_mode(std::string_view s);

struct PipelineConfig {
  std::size_t k = 100;
  std::size_t m = 5;
  std::size_t e = 1;
  double lambda = 0.5;
  EvalMode mode = EvalMode::Extrinsic;
  // Mine entity evidence from the question's retrieval instead of a fresh
  // per-claim retrieval.
  bool reuse_question_retrieval = false;
  double retrieval_blend = 0.0;
  // Keep the question-text retrieval list on each prediction (for Hits@k).
  bool record_retrieval = false;
  // 0 = hardware concurrency.
  std::size_t workers = 0;

  void validate() const;
};

struct EntityPrediction {
  std::string answer;
  std::vector<StanceEvidence> supporting;
  std::vector<StanceEvidence> refuting;
};

enum class Verdict { Yes, No, NotSure };

std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view s);

struct YesNoPrediction {
  std::vector<Verdict> verdicts;
  std::vector<StanceEvidence> yes_evidence;
  std::vector<StanceEvidence> no_evidence;

  bool has(Verdict v) const;
};

// Derives the verdict set from the evidence lists.
YesNoPrediction make_yesno_prediction(std::vector<StanceEvidence> yes_evidence,
                                      std::vector<StanceEvidence> no_evidence);
bool verdicts_consistent(const YesNoPrediction& p);

struct QuestionPrediction {
  std::string question_id;
  QuestionType qtype = QuestionType::Entity;
  std::vector<EntityPrediction> entity;
  YesNoPrediction yesno;
  std::vector<RankedTweet> retrieved;
};

class Pipeline {
 public:
  // `dataset` is required for intrinsic mode only. All referenced objects must
  // outlive the pipeline.
  Pipeline(const Corpus& corpus, const Retriever& retriever, const StanceScorer& scorer,
           const AnswerExtractor& extractor, const Dataset* dataset = nullptr);

  std::vector<EntityPrediction> answer_entity_question(const Question& question,
                                                       const PipelineConfig& cfg) const;
  YesNoPrediction answer_yesno_question(const Question& question,
                                        const PipelineConfig& cfg) const;

  QuestionPrediction answer(const Question& question, const PipelineConfig& cfg) const;

  // Answers every question, in parallel across cfg.workers threads. Output
  // order follows input order.
  std::vector<QuestionPrediction> run(const std::vector<Question>& questions,
                                      const PipelineConfig& cfg) const;

 private:
  std::vector<std::size_t> annotated_positions(const Question& question) const;

  const Corpus& corpus_;
  const Retriever& retriever_;
  const StanceScorer& scorer_;
  const AnswerExtractor& extractor_;
  const Dataset* dataset_;
};

}  // namespace mythqa
