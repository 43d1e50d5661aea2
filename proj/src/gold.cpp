#include "mythqa/gold.hpp"

namespace mythqa::gold {

GoldExtractor::GoldExtractor(const Dataset& dataset) {
  for (const auto& rec : dataset.records()) {
    for (const auto& a : rec.answers) {
      for (const auto* ids : {&a.supporting, &a.refuting, &a.neutral}) {
        for (const auto& id : *ids) table_.emplace(std::make_pair(rec.question.id, id), a.text);
      }
    }
  }
}

std::optional<AnswerSpan> GoldExtractor::extract_one(const Question& question,
                                                     const Tweet& tweet) const {
  auto it = table_.find({question.id, tweet.id});
  if (it == table_.end()) return std::nullopt;
  return AnswerSpan{it->second, 1.0};
}

namespace {

void mark(std::unordered_map<std::string, StanceLabel>& m, const std::vector<std::string>& ids,
          StanceLabel label) {
  for (const auto& id : ids) m.emplace(id, label);
}

StanceLabel flip(StanceLabel l) {
  if (l == StanceLabel::Supporting) return StanceLabel::Refuting;
  if (l == StanceLabel::Refuting) return StanceLabel::Supporting;
  return l;
}

}  // namespace

GoldScorer::GoldScorer(const Dataset& dataset) {
  for (const auto& rec : dataset.records()) {
    const auto& qid = rec.question.id;
    for (const auto& a : rec.answers) {
      auto& own = labels_[{qid, normalize_answer(a.text)}];
      mark(own, a.supporting, StanceLabel::Supporting);
      mark(own, a.refuting, StanceLabel::Refuting);
      mark(own, a.neutral, StanceLabel::Neutral);
    }
    if (rec.question.qtype != QuestionType::YesNo) continue;
    // Evidence for NO mirrors onto the positive claim and vice versa.
    auto& yes = labels_[{qid, "yes"}];
    auto& no = labels_[{qid, "no"}];
    const auto yes_snapshot = yes;
    for (const auto& [id, label] : no) yes.emplace(id, flip(label));
    for (const auto& [id, label] : yes_snapshot) no.emplace(id, flip(label));
  }
}

std::vector<StanceJudgment> GoldScorer::classify_batch(const Claim& claim,
                                                       std::span<const Tweet> tweets) const {
  std::vector<StanceJudgment> out;
  out.reserve(tweets.size());
  const auto it = labels_.find({claim.question_id, normalize_answer(claim.answer_text)});
  for (const auto& t : tweets) {
    StanceLabel label = StanceLabel::Neutral;
    if (it != labels_.end()) {
      auto hit = it->second.find(t.id);
      if (hit != it->second.end()) label = hit->second;
    }
    StanceScores scores{0.0, 0.0, 0.0};
    scores[static_cast<std::size_t>(label)] = 1.0;
    out.push_back({label, scores});
  }
  return out;
}

}  // namespace mythqa::gold
