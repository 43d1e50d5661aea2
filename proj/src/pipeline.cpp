#include "mythqa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "mythqa/error.hpp"

namespace mythqa {

std::string_view to_string(EvalMode mode) {
  return mode == EvalMode::Intrinsic ? "intrinsic" : "extrinsic";
}

EvalMode parse_eval_mode(std::string_view s) {
  if (s == "intrinsic") return EvalMode::Intrinsic;
  if (s == "extrinsic") return EvalMode::Extrinsic;
  throw InvalidArgument("unknown mode '" + std::string(s) + "' (expected intrinsic or extrinsic)");
}

void PipelineConfig::validate() const {
  if (m == 0) throw InvalidArgument("pipeline: m must be at least 1");
  if (k < m) throw InvalidArgument("pipeline: k must be at least m");
  if (e == 0) throw InvalidArgument("pipeline: e must be at least 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("pipeline: lambda must lie in [0, 1]");
  if (!(retrieval_blend >= 0.0 && retrieval_blend <= 1.0)) {
    throw InvalidArgument("pipeline: retrieval_blend must lie in [0, 1]");
  }
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "YES";
    case Verdict::No: return "NO";
    case Verdict::NotSure: return "NOT_SURE";
  }
  return "NOT_SURE";
}

Verdict parse_verdict(std::string_view s) {
  if (s == "YES") return Verdict::Yes;
  if (s == "NO") return Verdict::No;
  if (s == "NOT_SURE" || s == "NOT SURE") return Verdict::NotSure;
  throw ParseError("unknown verdict '" + std::string(s) + "'");
}

bool YesNoPrediction::has(Verdict v) const {
  return std::find(verdicts.begin(), verdicts.end(), v) != verdicts.end();
}

YesNoPrediction make_yesno_prediction(std::vector<StanceEvidence> yes_evidence,
                                      std::vector<StanceEvidence> no_evidence) {
  YesNoPrediction p;
  p.yes_evidence = std::move(yes_evidence);
  p.no_evidence = std::move(no_evidence);
  if (!p.yes_evidence.empty()) p.verdicts.push_back(Verdict::Yes);
  if (!p.no_evidence.empty()) p.verdicts.push_back(Verdict::No);
  if (p.verdicts.empty()) p.verdicts.push_back(Verdict::NotSure);
  return p;
}

bool verdicts_consistent(const YesNoPrediction& p) {
  const bool none = p.yes_evidence.empty() && p.no_evidence.empty();
  return p.has(Verdict::NotSure) == none && p.has(Verdict::Yes) == !p.yes_evidence.empty() &&
         p.has(Verdict::No) == !p.no_evidence.empty();
}

Pipeline::Pipeline(const Corpus& corpus, const Retriever& retriever, const StanceScorer& scorer,
                   const AnswerExtractor& extractor, const Dataset* dataset)
    : corpus_(corpus), retriever_(retriever), scorer_(scorer), extractor_(extractor),
      dataset_(dataset) {}

std::vector<std::size_t> Pipeline::annotated_positions(const Question& question) const {
  if (!dataset_) throw InvalidArgument("intrinsic mode needs the annotated dataset");
  std::vector<std::size_t> pool;
  for (const auto& id : restrict_to_annotated(question.id, *dataset_)) {
    if (auto pos = corpus_.position(id)) pool.push_back(*pos);
  }
  std::sort(pool.begin(), pool.end());
  return pool;
}

namespace {

MiningConfig mining_config(const PipelineConfig& cfg) {
  return {cfg.k, cfg.e, cfg.retrieval_blend};
}

}  // namespace

std::vector<EntityPrediction> Pipeline::answer_entity_question(const Question& question,
                                                               const PipelineConfig& cfg) const {
  cfg.validate();
  std::unique_ptr<PoolRetriever> pool;
  if (cfg.mode == EvalMode::Intrinsic) {
    pool = std::make_unique<PoolRetriever>(retriever_, annotated_positions(question));
  }
  const Retriever& retriever = pool ? static_cast<const Retriever&>(*pool) : retriever_;

  const auto ranked = retriever.search(question.text, cfg.k);
  if (ranked.empty()) return {};
  const auto candidates = aggregate_answers(question, ranked, corpus_, extractor_,
                                            ReaderConfig{cfg.m, cfg.lambda, 5});
  std::vector<EntityPrediction> out;
  out.reserve(candidates.size());
  const auto mcfg = mining_config(cfg);
  for (const auto& cand : candidates) {
    const Claim claim = make_claim(question, cand.display_text);
    MiningResult mined = cfg.reuse_question_retrieval
                             ? mine_ranked(claim, ranked, corpus_, scorer_, mcfg)
                             : mine_contradictory(claim, retriever, corpus_, scorer_, mcfg);
    out.push_back({cand.display_text, std::move(mined.supporting), std::move(mined.refuting)});
  }
  return out;
}

YesNoPrediction Pipeline::answer_yesno_question(const Question& question,
                                                const PipelineConfig& cfg) const {
  cfg.validate();
  std::unique_ptr<PoolRetriever> pool;
  if (cfg.mode == EvalMode::Intrinsic) {
    pool = std::make_unique<PoolRetriever>(retriever_, annotated_positions(question));
  }
  const Retriever& retriever = pool ? static_cast<const Retriever&>(*pool) : retriever_;
  const Claim claim = make_claim(question, "yes");
  MiningResult mined = mine_contradictory(claim, retriever, corpus_, scorer_, mining_config(cfg));
  return make_yesno_prediction(std::move(mined.supporting), std::move(mined.refuting));
}

QuestionPrediction Pipeline::answer(const Question& question, const PipelineConfig& cfg) const {
  QuestionPrediction p;
  p.question_id = question.id;
  p.qtype = question.qtype;
  if (question.qtype == QuestionType::Entity) {
    p.entity = answer_entity_question(question, cfg);
  } else {
    p.yesno = answer_yesno_question(question, cfg);
  }
  if (cfg.record_retrieval) {
    if (cfg.mode == EvalMode::Intrinsic) {
      PoolRetriever pool(retriever_, annotated_positions(question));
      p.retrieved = pool.search(question.text, cfg.k);
    } else {
      p.retrieved = retriever_.search(question.text, cfg.k);
    }
  }
  return p;
}

std::vector<QuestionPrediction> Pipeline::run(const std::vector<Question>& questions,
                                              const PipelineConfig& cfg) const {
  cfg.validate();
  std::vector<QuestionPrediction> out(questions.size());
  std::size_t workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(questions.size(), 1));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= questions.size()) return;
      try {
        out[i] = answer(questions[i], cfg);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(questions.size());
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace mythqa
